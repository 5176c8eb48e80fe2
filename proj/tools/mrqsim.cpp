// mrqsim: CLI front end for the MR-qubit platform simulator.
//
// Subcommands: simulate, tepa-table, address, procedure, circuit.
// All inputs come from one JSON config; outputs are CSV/JSON files written
// atomically under --out-dir. Exit code 0 means every validation passed and
// every request succeeded.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrq/mrq.hpp"

namespace fs = std::filesystem;
using mrq::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRequest = 3;

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    bool measured = false;
};

void emit_error(const std::string& type, const std::string& message,
                const json& extra = json::object()) {
    json err{{"error", {{"type", type}, {"message", message}}}};
    for (const auto& [k, v] : extra.items()) err[k] = v;
    std::cerr << err.dump() << "\n";
}

void write_json(const fs::path& path, const json& value) {
    mrq::write_file_atomic(path, value.dump(2) + "\n");
}

struct Platform {
    std::vector<mrq::QubitSite> sites;
    std::vector<mrq::CoilSpec> coils;
};

Platform make_platform(const mrq::RunConfig& cfg) {
    Platform p;
    p.sites = mrq::assign_sites(cfg.platform.n_qubits, cfg.platform.z_spacing_m, cfg.physics);
    p.coils = mrq::default_coils(p.sites, mrq::to_angular(cfg.platform.qcoil_bandwidth_hz));
    return p;
}

int echoes_in_run(const mrq::RunConfig& cfg) {
    if (cfg.sequence.n_echoes) return *cfg.sequence.n_echoes;
    return mrq::echo_count(mrq::effective_window(cfg), cfg.sequence.te_s);
}

int cmd_simulate(const mrq::RunConfig& cfg, const Options& opt) {
    const Platform platform = make_platform(cfg);
    const int n = echoes_in_run(cfg);

    std::vector<int> site_ids;
    if (cfg.requests.empty()) {
        for (const auto& s : platform.sites) site_ids.push_back(s.id);
    } else {
        std::set<int> seen;
        for (const auto& r : cfg.requests) {
            const bool known = std::any_of(platform.sites.begin(), platform.sites.end(),
                                           [&](const auto& s) { return s.id == r.site_id; });
            if (!known) {
                emit_error("request", "request references unknown site id " + std::to_string(r.site_id));
                return kExitRequest;
            }
            if (seen.insert(r.site_id).second) site_ids.push_back(r.site_id);
        }
    }

    const mrq::CpmgSequence seq{cfg.sequence.te_s, n, mrq::Axis::X, cfg.sequence.refocus_axis,
                                mrq::to_angular(cfg.sequence.off_resonance_hz)};
    const mrq::EchoTrain train = mrq::simulate_cpmg(seq, cfg.physics);

    for (int id : site_ids) {
        const std::string stem = "echoes_site" + std::to_string(id);
        if (opt.format == "json") {
            write_json(fs::path(opt.out_dir) / (stem + ".json"), mrq::echo_train_json(train));
        } else {
            mrq::write_file_atomic(fs::path(opt.out_dir) / (stem + ".csv"), mrq::echo_train_csv(train));
        }
    }

    json summary{{"command", "simulate"},
                 {"echo_count", n},
                 {"window_s", n * cfg.sequence.te_s},
                 {"te_s", cfg.sequence.te_s},
                 {"off_resonance_hz", cfg.sequence.off_resonance_hz},
                 {"sites", site_ids}};
    write_json(fs::path(opt.out_dir) / "summary.json", summary);
    return 0;
}

int cmd_tepa_table(const mrq::RunConfig& cfg, const Options& opt) {
    const double window = mrq::effective_window(cfg);
    const mrq::TepaTable analytic =
        mrq::build_tepa_table(cfg.physics, cfg.sequence.te_s, window, cfg.tepa.model);
    const mrq::TepaTable table =
        opt.measured ? mrq::measured_tepa_table(cfg.physics, cfg.sequence.te_s, window,
                                                cfg.tepa.model, cfg.sequence.refocus_axis)
                     : analytic;

    if (opt.format == "json") {
        write_json(fs::path(opt.out_dir) / "tepa.json", mrq::tepa_table_json(table));
    } else {
        mrq::write_file_atomic(fs::path(opt.out_dir) / "tepa.csv", mrq::tepa_table_csv(table));
    }

    json summary{{"command", "tepa-table"},
                 {"rows", table.size()},
                 {"model", mrq::tepa_model_name(cfg.tepa.model)},
                 {"te_s", cfg.sequence.te_s},
                 {"window_s", window},
                 {"measured", opt.measured}};
    if (opt.measured) {
        double worst = 0.0;
        for (std::size_t i = 0; i < table.size(); ++i) {
            worst = std::max(worst, std::abs(table.entries[i].beta - analytic.entries[i].beta));
        }
        summary["max_abs_delta_beta"] = worst;
    }
    write_json(fs::path(opt.out_dir) / "tepa_summary.json", summary);
    return 0;
}

int cmd_address(const mrq::RunConfig& cfg, const Options& opt) {
    const Platform platform = make_platform(cfg);
    const mrq::CrosstalkMatrix matrix = mrq::crosstalk_matrix(platform.sites, platform.coils);
    const mrq::SelectivityReport report = mrq::validate_selectivity(platform.sites, platform.coils);

    write_json(fs::path(opt.out_dir) / "layout.json", mrq::layout_json(platform.sites, platform.coils));
    write_json(fs::path(opt.out_dir) / "crosstalk.json", mrq::crosstalk_json(matrix, report));

    if (!report.pass()) {
        emit_error("selectivity", "crosstalk matrix is not the identity",
                   {{"report", mrq::crosstalk_json(matrix, report)}});
        return kExitValidation;
    }
    return 0;
}

json procedure_report(const mrq::GenerationResult& result) {
    json requests = json::array();
    for (const auto& q : result.qubits) {
        requests.push_back({{"site_id", q.site_id},
                            {"status", "ok"},
                            {"echo_index", q.gate.echo_index},
                            {"gate_time_s", q.gate.gate_time},
                            {"alpha", q.state.alpha.real()},
                            {"beta", q.state.beta.real()},
                            {"achieved_error", q.achieved_error}});
    }
    for (const auto& f : result.failures) {
        requests.push_back({{"site_id", f.site_id}, {"status", "error"}, {"reason", f.reason}});
    }
    return {{"command", "procedure"},
            {"n_generated", result.qubits.size()},
            {"n_failed", result.failures.size()},
            {"requests", requests}};
}

int run_circuit_stage(const mrq::RunConfig& cfg, const Options& opt,
                      const std::vector<mrq::SpinState>& generated) {
    const auto& circuit = *cfg.circuit;
    int width = static_cast<int>(generated.size());
    if (circuit.zeros_initial && width == 0) {
        for (const auto& g : circuit.gates) {
            width = std::max({width, g.target + 1, g.control + 1});
        }
    }
    if (width == 0) {
        emit_error("request", "circuit has no qubits to act on (no generated states)");
        return kExitRequest;
    }

    mrq::MultiQubitState state = circuit.zeros_initial
                                     ? mrq::MultiQubitState(width)
                                     : mrq::product_state(generated);
    for (const auto& g : circuit.gates) state = mrq::apply_gate(state, g);

    write_json(fs::path(opt.out_dir) / "circuit_probabilities.json",
               mrq::probabilities_json(mrq::measure_probabilities(state)));
    return 0;
}

int cmd_procedure(const mrq::RunConfig& cfg, const Options& opt, bool circuit_only) {
    const Platform platform = make_platform(cfg);
    const double window = mrq::effective_window(cfg);

    mrq::GenerationResult result;
    try {
        result = mrq::generate_qubits(cfg.requests, platform.sites, platform.coils, cfg.physics,
                                      cfg.sequence.te_s, window, cfg.tepa.model, cfg.tepa.tolerance,
                                      cfg.sequence.refocus_axis);
    } catch (const mrq::SelectivityError& e) {
        const auto matrix = mrq::crosstalk_matrix(platform.sites, platform.coils);
        emit_error("selectivity", e.what(), {{"report", mrq::crosstalk_json(matrix, e.report)}});
        return kExitValidation;
    }

    if (!circuit_only) {
        write_json(fs::path(opt.out_dir) / "procedure.json", procedure_report(result));
        write_json(fs::path(opt.out_dir) / "schedule.json", mrq::schedule_json(result.schedule));
    }

    int exit_code = 0;
    if (cfg.circuit && !cfg.circuit->gates.empty()) {
        if (result.ok()) {
            std::vector<mrq::SpinState> generated;
            generated.reserve(result.qubits.size());
            for (const auto& q : result.qubits) generated.push_back(q.state);
            exit_code = run_circuit_stage(cfg, opt, generated);
        }
    } else if (circuit_only) {
        emit_error("config", "circuit command needs a circuit block with gates");
        return kExitConfig;
    }

    if (!result.failures.empty()) {
        emit_error("request", std::to_string(result.failures.size()) + " of " +
                                  std::to_string(result.failures.size() + result.qubits.size()) +
                                  " requests failed");
        return kExitRequest;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MRI-gradient MR-qubit platform simulator"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "JSON run configuration")->required();
    app.add_option("--out-dir", opt.out_dir, "output directory (created if missing)");
    app.add_option("--format", opt.format, "tabular output format")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* simulate = app.add_subcommand("simulate", "CPMG echo trains per site");
    auto* tepa = app.add_subcommand("tepa-table", "amplitude vs gate-readout-time table");
    tepa->add_flag("--measured", opt.measured, "measure the table from a simulated train");
    auto* address = app.add_subcommand("address", "site/coil layout and crosstalk report");
    auto* procedure = app.add_subcommand("procedure", "run the qubit generation procedure");
    auto* circuit = app.add_subcommand("circuit", "generation plus circuit probabilities only");
    for (auto* sub : {simulate, tepa, address, procedure, circuit}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const mrq::RunConfig cfg = mrq::load_run_config(opt.config_path);
        for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
        fs::create_directories(opt.out_dir);

        if (simulate->parsed()) return cmd_simulate(cfg, opt);
        if (tepa->parsed()) return cmd_tepa_table(cfg, opt);
        if (address->parsed()) return cmd_address(cfg, opt);
        if (procedure->parsed()) return cmd_procedure(cfg, opt, false);
        if (circuit->parsed()) return cmd_procedure(cfg, opt, true);
        return kExitConfig;
    } catch (const mrq::ConfigError& e) {
        emit_error("config", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        emit_error("config", e.what());
        return kExitConfig;
    } catch (const std::domain_error& e) {
        emit_error("config", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        emit_error("io", e.what());
        return kExitConfig;
    }
}
