// End-to-end checks of the mrqsim command-line surface: subcommands, file
// outputs, exit codes and the machine-readable error channel. argv[1] is the
// mrqsim binary.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;
std::string g_cli;
fs::path g_work;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        std::cout << "[FAIL] " << what << "\n";
    } else {
        std::cout << "[ok]   " << what << "\n";
    }
}

struct RunResult {
    int exit_code{0};
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    const fs::path out = g_work / "stdout.txt";
    const fs::path err = g_work / "stderr.txt";
    const std::string cmd = "\"" + g_cli + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

fs::path write_config(const std::string& name, const json& value) {
    const fs::path path = g_work / name;
    std::ofstream out(path);
    out << value.dump(2);
    return path;
}

json base_config() {
    return json{
        {"physics",
         {{"gamma_hz_per_t", 42.577e6},
          {"b0_t", 3.0},
          {"gz_t_per_m", 0.01},
          {"t1_s", 4.0},
          {"t2_s", 2.0}}},
        {"platform", {{"n_qubits", 3}, {"z_spacing_m", 0.001}, {"qcoil_bandwidth_hz", 200.0}}},
        {"sequence", {{"te_s", 0.02}}}};
}

std::size_t data_rows(const fs::path& csv) {
    std::ifstream in(csv);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    return rows > 0 ? rows - 1 : 0;  // minus header
}

json load_json(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

void test_simulate() {
    const auto config = write_config("simulate.json", base_config());
    const fs::path out = g_work / "sim";
    const auto r = run_cli("simulate --config \"" + config.string() + "\" --out-dir \"" +
                           out.string() + "\"");
    check(r.exit_code == 0, "simulate exits 0 on the default config");
    const json summary = load_json(out / "summary.json");
    check(summary["echo_count"] == 1000, "simulate summary reports 1000 echoes");
    check(data_rows(out / "echoes_site1.csv") == 1000, "site 1 echo CSV has 1000 rows");
    check(fs::exists(out / "echoes_site3.csv"), "every site gets an echo CSV");
}

void test_simulate_single_echo() {
    auto cfg = base_config();
    cfg["platform"]["n_qubits"] = 1;
    cfg["sequence"]["n_echoes"] = 1;
    const auto config = write_config("single.json", cfg);
    const fs::path out = g_work / "single";
    const auto r = run_cli("simulate --config \"" + config.string() + "\" --out-dir \"" +
                           out.string() + "\"");
    check(r.exit_code == 0, "single-echo simulate exits 0");
    check(data_rows(out / "echoes_site1.csv") == 1, "single echo gives a single-row CSV");
}

void test_simulate_refocusing() {
    auto cfg = base_config();
    cfg["physics"]["t2_s"] = "inf";
    cfg["physics"]["t1_s"] = "inf";
    cfg["sequence"]["n_echoes"] = 40;
    cfg["sequence"]["off_resonance_hz"] = 35.0;
    const auto config = write_config("refocus.json", cfg);
    const fs::path out = g_work / "refocus";
    const auto r = run_cli("simulate --config \"" + config.string() + "\" --out-dir \"" +
                           out.string() + "\"");
    check(r.exit_code == 0, "relaxation-free simulate exits 0");
    std::ifstream in(out / "echoes_site1.csv");
    std::string line;
    std::getline(in, line);  // header
    bool all_unity = true;
    while (std::getline(in, line)) {
        const auto last_comma = line.rfind(',');
        if (line.substr(last_comma + 1) != "1") all_unity = false;
    }
    check(all_unity, "with T2 = inf every echo amplitude prints as 1");
}

void test_tepa_table() {
    const auto config = write_config("tepa.json", base_config());
    const fs::path out = g_work / "tepa";
    const auto r = run_cli("tepa-table --config \"" + config.string() + "\" --out-dir \"" +
                           out.string() + "\"");
    check(r.exit_code == 0, "tepa-table exits 0");
    check(data_rows(out / "tepa.csv") == 1000, "tepa CSV has 1000 rows");

    std::ifstream in(out / "tepa.csv");
    std::string line;
    for (int i = 0; i <= 139; ++i) std::getline(in, line);
    check(line.rfind("139,2.78,0.707760943,0.706452014", 0) == 0,
          "row 139 carries the worked-example amplitudes");

    const auto measured = run_cli("tepa-table --measured --config \"" + config.string() +
                                  "\" --out-dir \"" + (g_work / "tepa_m").string() + "\"");
    check(measured.exit_code == 0, "tepa-table --measured exits 0");
    const json summary = load_json(g_work / "tepa_m" / "tepa_summary.json");
    check(summary["measured"] == true && summary["max_abs_delta_beta"].get<double>() < 1e-3,
          "measured table stays within 1e-3 of the analytic one");
}

void test_tepa_window_factor() {
    auto cfg = base_config();
    cfg["sequence"]["window_factor"] = 1;
    const auto config = write_config("tepa_w1.json", cfg);
    const fs::path out = g_work / "tepa_w1";
    run_cli("tepa-table --config \"" + config.string() + "\" --out-dir \"" + out.string() + "\"");
    check(data_rows(out / "tepa.csv") == 200, "window factor 1 gives 200 rows at T1 = 4 s");
}

void test_tepa_json_format() {
    const auto config = write_config("tepa_json.json", base_config());
    const fs::path out = g_work / "tepa_json";
    const auto r = run_cli("tepa-table --format json --config \"" + config.string() +
                           "\" --out-dir \"" + out.string() + "\"");
    check(r.exit_code == 0 && fs::exists(out / "tepa.json"), "--format json writes tepa.json");
    const json rows = load_json(out / "tepa.json");
    check(rows.is_array() && rows.size() == 1000 && rows[138]["echo_index"] == 139,
          "tepa.json rows mirror the CSV");
}

void test_address() {
    const auto config = write_config("address.json", base_config());
    const fs::path out = g_work / "addr";
    const auto r = run_cli("address --config \"" + config.string() + "\" --out-dir \"" +
                           out.string() + "\"");
    check(r.exit_code == 0, "address exits 0 when bands are selective");
    const json crosstalk = load_json(out / "crosstalk.json");
    check(crosstalk["grade"] == "pass_with_margin", "narrow bands pass with margin");
    const json layout = load_json(out / "layout.json");
    check(layout["sites"].size() == 3 && layout["coils"].size() == 3,
          "layout lists every site and coil");

    auto wide = base_config();
    wide["platform"]["qcoil_bandwidth_hz"] = 3.0 * 425.77;
    const auto wide_config = write_config("address_wide.json", wide);
    const fs::path wide_out = g_work / "addr_wide";
    const auto rw = run_cli("address --config \"" + wide_config.string() + "\" --out-dir \"" +
                            wide_out.string() + "\"");
    check(rw.exit_code != 0, "address exits nonzero on crosstalk");
    const json report = load_json(wide_out / "crosstalk.json");
    check(report["grade"] == "fail" && !report["offending"].empty(),
          "crosstalk report lists the offending pairs");
    check(!rw.err.empty() && json::parse(rw.err)["error"]["type"] == "selectivity",
          "selectivity failure lands on stderr as JSON");
}

void test_procedure_bell() {
    auto cfg = base_config();
    cfg["platform"]["n_qubits"] = 2;
    cfg["requests"] = json::array(
        {{{"site_id", 1}, {"alpha", 0.70710678118654752}, {"beta", 0.70710678118654752}},
         {{"site_id", 2}, {"alpha", 0.70710678118654752}, {"beta", 0.70710678118654752}}});
    cfg["circuit"] = {{"initial", "zeros"},
                      {"gates", json::array({{{"kind", "h"}, {"targets", {1}}},
                                             {{"kind", "cnot"}, {"targets", {1, 0}}}})}};
    const auto config = write_config("procedure.json", cfg);
    const fs::path out = g_work / "proc";
    const auto r = run_cli("procedure --config \"" + config.string() + "\" --out-dir \"" +
                           out.string() + "\"");
    check(r.exit_code == 0, "procedure exits 0 when every request succeeds");

    const json report = load_json(out / "procedure.json");
    check(report["n_generated"] == 2 && report["requests"][0]["echo_index"] == 139,
          "both requests resolve to echo 139");
    check(std::abs(report["requests"][0]["gate_time_s"].get<double>() - 2.78) < 1e-12,
          "gate time is 2780 ms");

    const json schedule = load_json(out / "schedule.json");
    check(schedule[0]["coil"] == "main" &&
              std::abs(schedule[0]["flip_deg"].get<double>() - 90.0) < 1e-9,
          "schedule opens with the broadband 90");
    check(schedule.size() == 1 + 139 + 139, "schedule carries one train per requested site");

    const json probs = load_json(out / "circuit_probabilities.json");
    check(std::abs(probs["00"].get<double>() - 0.5) < 1e-12 &&
              std::abs(probs["11"].get<double>() - 0.5) < 1e-12,
          "Bell probabilities come out of the circuit stage");
}

void test_procedure_window_end() {
    auto cfg = base_config();
    cfg["requests"] = json::array({{{"site_id", 1}, {"echo_index", 1000}}});
    const auto config = write_config("procedure_end.json", cfg);
    const fs::path out = g_work / "proc_end";
    const auto r = run_cli("procedure --config \"" + config.string() + "\" --out-dir \"" +
                           out.string() + "\"");
    check(r.exit_code == 0, "echo 1000 request succeeds");
    const json report = load_json(out / "procedure.json");
    check(report["requests"][0]["gate_time_s"].get<double>() == 20.0,
          "echo 1000 reads out at 20 s");
}

void test_procedure_empty_requests() {
    const auto config = write_config("procedure_empty.json", base_config());
    const fs::path out = g_work / "proc_empty";
    const auto r = run_cli("procedure --config \"" + config.string() + "\" --out-dir \"" +
                           out.string() + "\"");
    check(r.exit_code == 0, "empty request list is not an error");
    const json schedule = load_json(out / "schedule.json");
    check(schedule.size() == 1 && schedule[0]["coil"] == "main",
          "empty requests leave only the main pulse in the schedule");
}

void test_procedure_failures() {
    auto cfg = base_config();
    cfg["requests"] = json::array({{{"site_id", 1}, {"echo_index", 5000}}});
    cfg["circuit"] = {{"gates", json::array({{{"kind", "h"}, {"targets", {0}}}})}};
    const auto config = write_config("procedure_bad.json", cfg);
    const fs::path out = g_work / "proc_bad";
    const auto r = run_cli("procedure --config \"" + config.string() + "\" --out-dir \"" +
                           out.string() + "\"");
    check(r.exit_code != 0, "an unsatisfiable request exits nonzero");
    const json report = load_json(out / "procedure.json");
    check(report["requests"][0]["status"] == "error", "the failure is recorded per request");
    check(!r.err.empty() && json::parse(r.err).contains("error"),
          "request failures emit error JSON on stderr");
    check(!fs::exists(out / "circuit_probabilities.json"),
          "the circuit stage is skipped when generation fails");
}

void test_circuit_subcommand() {
    auto cfg = base_config();
    cfg["platform"]["n_qubits"] = 2;
    cfg["requests"] = json::array(
        {{{"site_id", 1}, {"echo_index", 1}}, {{"site_id", 2}, {"echo_index", 1}}});
    cfg["circuit"] = {{"initial", "zeros"},
                      {"gates", json::array({{{"kind", "h"}, {"targets", {1}}},
                                             {{"kind", "cnot"}, {"targets", {1, 0}}}})}};
    const auto config = write_config("circuit_only.json", cfg);
    const fs::path out = g_work / "circ";
    const auto r = run_cli("circuit --config \"" + config.string() + "\" --out-dir \"" +
                           out.string() + "\"");
    check(r.exit_code == 0, "circuit subcommand exits 0");
    check(fs::exists(out / "circuit_probabilities.json") && !fs::exists(out / "procedure.json"),
          "circuit subcommand writes only the probability map");
    const json probs = load_json(out / "circuit_probabilities.json");
    check(std::abs(probs["00"].get<double>() - 0.5) < 1e-12, "standalone circuit runs the gates");

    auto no_gates = base_config();
    const auto config2 = write_config("circuit_none.json", no_gates);
    const auto r2 = run_cli("circuit --config \"" + config2.string() + "\" --out-dir \"" +
                            (g_work / "circ2").string() + "\"");
    check(r2.exit_code == 1, "circuit without a circuit block is a config error");
}

void test_config_errors() {
    auto cfg = base_config();
    cfg["physics"]["t1_s"] = -1.0;
    const auto config = write_config("bad_phys.json", cfg);
    const auto r = run_cli("simulate --config \"" + config.string() + "\" --out-dir \"" +
                           (g_work / "bad").string() + "\"");
    check(r.exit_code == 1, "invalid physics exits 1");
    check(json::parse(r.err)["error"]["type"] == "config", "config errors are typed JSON");

    auto unknown = base_config();
    unknown["mystery"] = 1;
    const auto config2 = write_config("bad_key.json", unknown);
    const auto r2 = run_cli("simulate --config \"" + config2.string() + "\" --out-dir \"" +
                            (g_work / "bad2").string() + "\"");
    check(r2.exit_code == 1 && r2.err.find("mystery") != std::string::npos,
          "unknown keys are rejected by name");

    const auto r3 = run_cli("simulate --config \"" + (g_work / "nope.json").string() + "\"");
    check(r3.exit_code == 1, "a missing config file exits 1");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-mrqsim>\n";
        return 2;
    }
    g_cli = argv[1];
    g_work = fs::temp_directory_path() / "mrq_cli_tests";
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    test_simulate();
    test_simulate_single_echo();
    test_simulate_refocusing();
    test_tepa_table();
    test_tepa_window_factor();
    test_tepa_json_format();
    test_address();
    test_procedure_bell();
    test_procedure_window_end();
    test_procedure_empty_requests();
    test_procedure_failures();
    test_circuit_subcommand();
    test_config_errors();

    fs::remove_all(g_work);
    if (g_failures == 0) {
        std::cout << "all cli checks passed\n";
        return 0;
    }
    std::cout << g_failures << " cli checks failed\n";
    return 1;
}
