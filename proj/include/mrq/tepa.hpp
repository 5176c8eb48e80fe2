#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrq/platform.hpp"
#include "mrq/relaxation.hpp"
#include "mrq/spin.hpp"

namespace mrq {

/// Which envelope governs the amplitude-vs-time conversion. T1Decay keeps
/// beta^2 = exp(-t/T1); T2Decay swaps in T2; CombinedSignal uses the full
/// signal-equation envelope renormalized to its peak.
enum class TepaModel { T1Decay, T2Decay, CombinedSignal };

inline const char* tepa_model_name(TepaModel m) {
    switch (m) {
    case TepaModel::T1Decay: return "t1_decay";
    case TepaModel::T2Decay: return "t2_decay";
    case TepaModel::CombinedSignal: return "combined_signal";
    }
    return "?";
}

struct TepaEntry {
    int echo_index{0};
    double time{0.0};  // s, = echo_index * te
    double alpha{0.0};
    double beta{0.0};
};

struct TepaTable {
    std::vector<TepaEntry> entries;
    TepaModel model{TepaModel::T1Decay};

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
};

namespace detail {

inline TepaEntry make_entry(int echo_index, double time, double beta_squared) {
    const double b2 = std::clamp(beta_squared, 0.0, 1.0);
    return {echo_index, time, std::sqrt(1.0 - b2), std::sqrt(b2)};
}

}  // namespace detail

/// Conversion table calculated from the configured relaxation times, one
/// entry per echo in the window.
inline TepaTable build_tepa_table(const PhysicsConfig& cfg, double te, double window,
                                  TepaModel model) {
    if (!(te > 0.0)) throw std::invalid_argument("tepa: te must be positive");
    if (window < te) throw std::domain_error("tepa: window shorter than one echo spacing");
    const int n = echo_count(window, te);

    TepaTable table;
    table.model = model;
    table.entries.reserve(static_cast<std::size_t>(n));

    if (model == TepaModel::CombinedSignal) {
        double peak = 0.0;
        for (int i = 1; i <= n; ++i) {
            peak = std::max(peak, signal_equation(cfg.rho0, i * te, cfg.t1, cfg.t2));
        }
        if (!(peak > 0.0)) throw std::domain_error("tepa: degenerate signal envelope");
        for (int i = 1; i <= n; ++i) {
            const double t = i * te;
            table.entries.push_back(
                detail::make_entry(i, t, signal_equation(cfg.rho0, t, cfg.t1, cfg.t2) / peak));
        }
        return table;
    }

    const double tc = model == TepaModel::T1Decay ? cfg.t1 : cfg.t2;
    for (int i = 1; i <= n; ++i) {
        const double t = i * te;
        table.entries.push_back(detail::make_entry(i, t, std::exp(-t / tc)));
    }
    return table;
}

/// Table taken from a simulated echo train, the in-simulator analogue of an
/// experimentally measured conversion table. The decay models read beta^2
/// directly off the unit-equilibrium envelope; the combined model
/// renormalizes to the envelope peak.
inline TepaTable measure_tepa_table(const EchoTrain& train, TepaModel model) {
    if (train.empty()) throw std::invalid_argument("tepa: empty echo train");
    double peak = 0.0;
    for (const auto& e : train.entries) peak = std::max(peak, e.amplitude);
    if (!(peak > 0.0)) throw std::domain_error("tepa: zero-amplitude echo train");

    TepaTable table;
    table.model = model;
    table.entries.reserve(train.size());
    const double scale = model == TepaModel::CombinedSignal ? 1.0 / peak : 1.0;
    for (const auto& e : train.entries) {
        table.entries.push_back(detail::make_entry(e.echo_index, e.time, e.amplitude * scale));
    }
    return table;
}

/// Runs the Bloch-level experiment that the chosen model's table describes
/// and measures it. For the decay models that is one CPMG train whose
/// envelope time constant is the model's; for CombinedSignal it is a
/// saturation-recovery-plus-echo run per entry.
inline TepaTable measured_tepa_table(const PhysicsConfig& cfg, double te, double window,
                                     TepaModel model, Axis refocus_axis = Axis::Y) {
    if (!(te > 0.0)) throw std::invalid_argument("tepa: te must be positive");
    if (window < te) throw std::domain_error("tepa: window shorter than one echo spacing");
    const int n = echo_count(window, te);

    if (model == TepaModel::CombinedSignal) {
        EchoTrain train;
        train.entries.reserve(static_cast<std::size_t>(n));
        const double half_pi = 1.5707963267948966;
        for (int i = 1; i <= n; ++i) {
            const double t = i * te;
            BlochVector m{0.0, 0.0, 0.0};          // saturated
            m = relax(m, t, cfg);                  // recover for t
            m = rotate(m, Axis::X, half_pi);       // excite
            m = rotate(relax(m, 0.5 * t, cfg), refocus_axis, 2.0 * half_pi);
            m = relax(m, 0.5 * t, cfg);            // refocused decay over t
            train.entries.push_back({i, t, m.transverse()});
        }
        return measure_tepa_table(train, model);
    }

    PhysicsConfig envelope_cfg = cfg;
    if (model == TepaModel::T1Decay) envelope_cfg.t2 = cfg.t1;
    const CpmgSequence seq{te, n, Axis::X, refocus_axis, 0.0};
    return measure_tepa_table(simulate_cpmg(seq, envelope_cfg), model);
}

/// Gate readout time selected for a target amplitude.
struct GateLookup {
    int echo_index{0};
    double time{0.0};
    double alpha{0.0};
    double beta{0.0};
    double error{0.0};  // |beta_i^2 - target_beta^2| at the chosen entry
};

/// Entry minimizing |beta_i^2 - target^2|; ties resolve to the earlier time.
inline GateLookup lookup_gate_time(const TepaTable& table, double target_beta) {
    if (table.empty()) throw std::invalid_argument("tepa: lookup on empty table");
    if (!(target_beta >= 0.0 && target_beta <= 1.0)) {
        throw std::domain_error("tepa: target beta must be in [0, 1]");
    }
    const double want = target_beta * target_beta;
    std::size_t best = 0;
    double best_err = std::abs(table.entries[0].beta * table.entries[0].beta - want);
    for (std::size_t k = 1; k < table.entries.size(); ++k) {
        const double err = std::abs(table.entries[k].beta * table.entries[k].beta - want);
        if (err < best_err) {
            best = k;
            best_err = err;
        }
    }
    const TepaEntry& e = table.entries[best];
    return {e.echo_index, e.time, e.alpha, e.beta, best_err};
}

/// RG event: the echo sampled for one qubit.
struct ReadoutGate {
    int qubit_id{0};
    double gate_time{0.0};  // s, = echo_index * te
    int echo_index{0};
};

/// One qubit to generate, aimed either at an amplitude pair or directly at
/// an echo index.
struct GenerationRequest {
    int site_id{0};
    std::optional<std::pair<double, double>> target;  // (alpha, beta)
    std::optional<int> echo_index;
};

struct GeneratedQubit {
    int site_id{0};
    SpinState state;
    ReadoutGate gate;
    double achieved_error{0.0};
};

struct RequestFailure {
    int site_id{0};
    std::string reason;
};

struct GenerationResult {
    std::vector<GeneratedQubit> qubits;      // in request order
    std::vector<RequestFailure> failures;    // in request order
    std::vector<PulseEvent> schedule;        // time-ordered
    bool ok() const { return failures.empty(); }
};

class SelectivityError : public std::runtime_error {
public:
    SelectivityReport report;
    explicit SelectivityError(SelectivityReport r)
        : std::runtime_error("selectivity validation failed"), report(std::move(r)) {}
};

/// The generation procedure: gradient (carried by cfg and the site layout),
/// broadband 90, per-site 180 trains, gate-time selection from the
/// conversion table, and emission of the tabulated states.
/// Requests that cannot be met land in `failures` instead of aborting the
/// batch; an unselective platform aborts with SelectivityError.
inline GenerationResult generate_qubits(const std::vector<GenerationRequest>& requests,
                                        const std::vector<QubitSite>& sites,
                                        const std::vector<CoilSpec>& coils,
                                        const PhysicsConfig& cfg, double te, double window,
                                        TepaModel model = TepaModel::T1Decay,
                                        double tolerance = 0.01,
                                        Axis refocus_axis = Axis::Y) {
    if (sites.empty()) throw std::invalid_argument("generate_qubits: no sites");
    const SelectivityReport selectivity = validate_selectivity(sites, coils);
    if (!selectivity.pass()) throw SelectivityError(selectivity);

    const TepaTable table = build_tepa_table(cfg, te, window, model);
    const double half_pi = 1.5707963267948966;

    GenerationResult result;
    double lo = sites.front().center_frequency;
    double hi = lo;
    for (const auto& site : sites) {
        lo = std::min(lo, site.center_frequency);
        hi = std::max(hi, site.center_frequency);
    }
    result.schedule.push_back({0.0, half_pi, Axis::X, 0.5 * (lo + hi), CoilRef::main()});

    for (const auto& request : requests) {
        const auto site = std::find_if(sites.begin(), sites.end(), [&](const QubitSite& s) {
            return s.id == request.site_id;
        });
        if (site == sites.end()) {
            result.failures.push_back({request.site_id, "unknown site id"});
            continue;
        }
        const auto coil = std::find_if(coils.begin(), coils.end(), [&](const CoilSpec& c) {
            return c.site_id == request.site_id;
        });
        if (coil == coils.end()) {
            result.failures.push_back({request.site_id, "site has no Q-coil"});
            continue;
        }

        GateLookup pick;
        if (request.echo_index) {
            const int idx = *request.echo_index;
            if (idx < 1 || idx > static_cast<int>(table.size())) {
                result.failures.push_back(
                    {request.site_id, "echo index " + std::to_string(idx) + " outside table"});
                continue;
            }
            const TepaEntry& e = table.entries[static_cast<std::size_t>(idx - 1)];
            pick = {e.echo_index, e.time, e.alpha, e.beta, 0.0};
        } else if (request.target) {
            const auto [a, b] = *request.target;
            if (!(a >= 0.0) || !(b >= 0.0) || std::abs(a * a + b * b - 1.0) > 1e-9) {
                result.failures.push_back(
                    {request.site_id, "target amplitudes must be non-negative and normalized"});
                continue;
            }
            pick = lookup_gate_time(table, b);
            if (pick.error > tolerance) {
                result.failures.push_back(
                    {request.site_id, "unreachable target: nearest entry misses beta^2 by " +
                                          std::to_string(pick.error)});
                continue;
            }
        } else {
            result.failures.push_back({request.site_id, "request carries no target"});
            continue;
        }

        for (int k = 0; k < pick.echo_index; ++k) {
            result.schedule.push_back({0.5 * te + k * te, 2.0 * half_pi, refocus_axis,
                                       coil->carrier, CoilRef::qcoil(request.site_id)});
        }
        result.qubits.push_back({request.site_id,
                                 SpinState{cxd(pick.alpha, 0.0), cxd(pick.beta, 0.0)},
                                 ReadoutGate{request.site_id, pick.time, pick.echo_index},
                                 pick.error});
    }

    std::stable_sort(result.schedule.begin(), result.schedule.end(),
                     [](const PulseEvent& a, const PulseEvent& b) {
                         return a.start_time < b.start_time;
                     });
    return result;
}

}  // namespace mrq
