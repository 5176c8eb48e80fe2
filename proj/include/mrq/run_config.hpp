#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrq/circuit.hpp"
#include "mrq/evolution.hpp"
#include "mrq/tepa.hpp"

namespace mrq {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PlatformConfig {
    int n_qubits{1};
    double z_spacing_m{0.0};
    double qcoil_bandwidth_hz{0.0};
    std::optional<double> main_bandwidth_hz;  // absent: main coil covers all sites
};

struct SequenceConfig {
    double te_s{0.0};
    double window_factor{5.0};
    Axis refocus_axis{Axis::Y};
    double off_resonance_hz{0.0};
    std::optional<int> n_echoes;  // explicit override for the echo count
};

struct TepaConfig {
    TepaModel model{TepaModel::T1Decay};
    double tolerance{0.01};
};

struct CircuitConfig {
    bool zeros_initial{false};  // true: |0...0> instead of the generated states
    std::vector<GateOp> gates;
};

/// Everything a run needs, loaded from one JSON file with unknown keys
/// rejected. Frequencies enter in Hz and are stored angular.
struct RunConfig {
    PhysicsConfig physics;
    PlatformConfig platform;
    SequenceConfig sequence;
    TepaConfig tepa;
    std::vector<GenerationRequest> requests;
    std::optional<CircuitConfig> circuit;
    std::uint64_t seed{0};  // reserved; the simulation itself is deterministic
    std::vector<std::string> warnings;
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                                const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool known = false;
        for (const auto& a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError(where + ": unknown key \"" + key + "\"");
    }
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(where + ": missing required key \"" + key + "\"");
    return *it;
}

inline double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    return v.get<double>();
}

/// Number, or the string "inf" for a disabled relaxation channel.
inline double as_time_or_inf(const json& v, const std::string& where) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return infinite_time();
        throw ConfigError(where + ": expected a number or \"inf\"");
    }
    return as_number(v, where);
}

inline int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
    return v.get<int>();
}

inline Axis as_axis(const json& v, const std::string& where) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "x") return Axis::X;
        if (s == "y") return Axis::Y;
        if (s == "z") return Axis::Z;
    }
    throw ConfigError(where + ": expected \"x\", \"y\" or \"z\"");
}

inline TepaModel as_model(const json& v, const std::string& where) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "t1_decay") return TepaModel::T1Decay;
        if (s == "t2_decay") return TepaModel::T2Decay;
        if (s == "combined_signal") return TepaModel::CombinedSignal;
    }
    throw ConfigError(where + ": expected \"t1_decay\", \"t2_decay\" or \"combined_signal\"");
}

inline GateOp parse_gate(const json& g, const std::string& where) {
    reject_unknown_keys(g, {"kind", "targets", "angle_rad"}, where);
    const std::string kind = require(g, "kind", where).get<std::string>();
    const json& targets = require(g, "targets", where);
    if (!targets.is_array() || targets.empty()) {
        throw ConfigError(where + ": targets must be a non-empty array");
    }
    auto one_target = [&]() {
        if (targets.size() != 1) throw ConfigError(where + ": " + kind + " takes one target");
        return as_int(targets[0], where);
    };
    auto angle = [&]() { return as_number(require(g, "angle_rad", where), where); };

    if (kind == "x") return GateOp::x(one_target());
    if (kind == "y") return GateOp::y(one_target());
    if (kind == "z") return GateOp::z(one_target());
    if (kind == "h") return GateOp::h(one_target());
    if (kind == "rx") return GateOp::rx(one_target(), angle());
    if (kind == "ry") return GateOp::ry(one_target(), angle());
    if (kind == "rz") return GateOp::rz(one_target(), angle());
    if (kind == "cnot") {
        if (targets.size() != 2) throw ConfigError(where + ": cnot takes [control, target]");
        const int control = as_int(targets[0], where);
        const int target = as_int(targets[1], where);
        if (control == target) throw ConfigError(where + ": cnot control equals target");
        return GateOp::cnot(control, target);
    }
    throw ConfigError(where + ": unknown gate kind \"" + kind + "\"");
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& root) {
    using detail::as_axis;
    using detail::as_int;
    using detail::as_model;
    using detail::as_number;
    using detail::as_time_or_inf;
    using detail::reject_unknown_keys;
    using detail::require;

    reject_unknown_keys(root, {"physics", "platform", "sequence", "tepa", "requests", "circuit", "seed"},
                        "config");
    RunConfig cfg;

    {
        const auto& p = require(root, "physics", "config");
        reject_unknown_keys(p, {"gamma_hz_per_t", "b0_t", "gz_t_per_m", "t1_s", "t2_s", "rho0"},
                            "physics");
        cfg.physics.gamma = to_angular(as_number(require(p, "gamma_hz_per_t", "physics"), "physics.gamma_hz_per_t"));
        cfg.physics.b0 = as_number(require(p, "b0_t", "physics"), "physics.b0_t");
        cfg.physics.gz = as_number(require(p, "gz_t_per_m", "physics"), "physics.gz_t_per_m");
        cfg.physics.t1 = as_time_or_inf(require(p, "t1_s", "physics"), "physics.t1_s");
        cfg.physics.t2 = as_time_or_inf(require(p, "t2_s", "physics"), "physics.t2_s");
        if (p.contains("rho0")) cfg.physics.rho0 = as_number(p["rho0"], "physics.rho0");
        try {
            cfg.warnings = cfg.physics.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }

    {
        const auto& p = require(root, "platform", "config");
        reject_unknown_keys(p, {"n_qubits", "z_spacing_m", "qcoil_bandwidth_hz", "main_bandwidth_hz"},
                            "platform");
        cfg.platform.n_qubits = as_int(require(p, "n_qubits", "platform"), "platform.n_qubits");
        cfg.platform.z_spacing_m = as_number(require(p, "z_spacing_m", "platform"), "platform.z_spacing_m");
        cfg.platform.qcoil_bandwidth_hz =
            as_number(require(p, "qcoil_bandwidth_hz", "platform"), "platform.qcoil_bandwidth_hz");
        if (p.contains("main_bandwidth_hz") && !p["main_bandwidth_hz"].is_null()) {
            cfg.platform.main_bandwidth_hz = as_number(p["main_bandwidth_hz"], "platform.main_bandwidth_hz");
        }
        if (cfg.platform.n_qubits < 1) throw ConfigError("platform: n_qubits must be >= 1");
        if (!(cfg.platform.z_spacing_m > 0.0)) throw ConfigError("platform: z_spacing_m must be positive");
        if (!(cfg.platform.qcoil_bandwidth_hz > 0.0)) {
            throw ConfigError("platform: qcoil_bandwidth_hz must be positive");
        }
        if (cfg.platform.n_qubits > 1 && cfg.physics.gz == 0.0) {
            throw ConfigError("platform: gz_t_per_m = 0 makes multiple sites frequency-degenerate");
        }
    }

    {
        const auto& s = require(root, "sequence", "config");
        reject_unknown_keys(s, {"te_s", "window_factor", "refocus_axis", "off_resonance_hz", "n_echoes"},
                            "sequence");
        cfg.sequence.te_s = as_number(require(s, "te_s", "sequence"), "sequence.te_s");
        if (s.contains("window_factor")) {
            cfg.sequence.window_factor = as_number(s["window_factor"], "sequence.window_factor");
        }
        if (s.contains("refocus_axis")) cfg.sequence.refocus_axis = as_axis(s["refocus_axis"], "sequence.refocus_axis");
        if (s.contains("off_resonance_hz")) {
            cfg.sequence.off_resonance_hz = as_number(s["off_resonance_hz"], "sequence.off_resonance_hz");
        }
        if (s.contains("n_echoes")) cfg.sequence.n_echoes = as_int(s["n_echoes"], "sequence.n_echoes");
        if (!(cfg.sequence.te_s > 0.0)) throw ConfigError("sequence: te_s must be positive");
        if (!(cfg.sequence.window_factor > 0.0)) throw ConfigError("sequence: window_factor must be positive");
        if (cfg.sequence.n_echoes && *cfg.sequence.n_echoes < 1) {
            throw ConfigError("sequence: n_echoes must be >= 1");
        }
    }

    if (root.contains("tepa")) {
        const auto& t = root["tepa"];
        reject_unknown_keys(t, {"model", "tolerance"}, "tepa");
        if (t.contains("model")) cfg.tepa.model = as_model(t["model"], "tepa.model");
        if (t.contains("tolerance")) cfg.tepa.tolerance = as_number(t["tolerance"], "tepa.tolerance");
        if (!(cfg.tepa.tolerance > 0.0)) throw ConfigError("tepa: tolerance must be positive");
    }

    if (root.contains("requests")) {
        const auto& rs = root["requests"];
        if (!rs.is_array()) throw ConfigError("requests: expected an array");
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const std::string where = "requests[" + std::to_string(i) + "]";
            const auto& r = rs[i];
            reject_unknown_keys(r, {"site_id", "alpha", "beta", "echo_index"}, where);
            GenerationRequest req;
            req.site_id = as_int(require(r, "site_id", where), where);
            const bool has_pair = r.contains("alpha") || r.contains("beta");
            const bool has_index = r.contains("echo_index");
            if (has_pair == has_index) {
                throw ConfigError(where + ": give either alpha+beta or echo_index");
            }
            if (has_index) {
                req.echo_index = as_int(r["echo_index"], where);
                if (*req.echo_index < 1) throw ConfigError(where + ": echo_index must be >= 1");
            } else {
                if (!r.contains("alpha") || !r.contains("beta")) {
                    throw ConfigError(where + ": alpha and beta go together");
                }
                const double a = as_number(r["alpha"], where + ".alpha");
                const double b = as_number(r["beta"], where + ".beta");
                if (a < 0.0 || b < 0.0 || std::abs(a * a + b * b - 1.0) > 1e-9) {
                    throw ConfigError(where + ": alpha^2 + beta^2 must equal 1 (non-negative amplitudes)");
                }
                req.target = std::make_pair(a, b);
            }
            cfg.requests.push_back(req);
        }
    }

    if (root.contains("circuit")) {
        const auto& c = root["circuit"];
        reject_unknown_keys(c, {"initial", "gates"}, "circuit");
        CircuitConfig circuit;
        if (c.contains("initial")) {
            const std::string initial = c["initial"].get<std::string>();
            if (initial == "zeros") {
                circuit.zeros_initial = true;
            } else if (initial != "generated") {
                throw ConfigError("circuit: initial must be \"generated\" or \"zeros\"");
            }
        }
        const auto& gates = require(c, "gates", "circuit");
        if (!gates.is_array()) throw ConfigError("circuit: gates must be an array");
        for (std::size_t i = 0; i < gates.size(); ++i) {
            circuit.gates.push_back(detail::parse_gate(gates[i], "circuit.gates[" + std::to_string(i) + "]"));
        }
        cfg.circuit = std::move(circuit);
    }

    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer()) throw ConfigError("seed: expected an integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }

    return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    return parse_run_config(root);
}

/// Effective computation window; explicit n_echoes wins over factor * T1.
inline double effective_window(const RunConfig& cfg) {
    if (cfg.sequence.n_echoes) return *cfg.sequence.n_echoes * cfg.sequence.te_s;
    const double window = computation_window(cfg.physics.t1, cfg.sequence.window_factor);
    if (!std::isfinite(window)) {
        throw ConfigError("window is unbounded (t1_s = \"inf\"); set sequence.n_echoes explicitly");
    }
    return window;
}

}  // namespace mrq
