#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrq/circuit.hpp"
#include "mrq/evolution.hpp"
#include "mrq/platform.hpp"
#include "mrq/relaxation.hpp"
#include "mrq/tepa.hpp"

namespace mrq {

using json = nlohmann::json;

/// Fixed 9-significant-digit rendering used by every CSV column.
inline std::string format_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string echo_train_csv(const EchoTrain& train) {
    std::string out = "echo_index,time_s,amplitude\n";
    for (const auto& e : train.entries) {
        out += std::to_string(e.echo_index);
        out += ',';
        out += format_value(e.time);
        out += ',';
        out += format_value(e.amplitude);
        out += '\n';
    }
    return out;
}

inline json echo_train_json(const EchoTrain& train) {
    json rows = json::array();
    for (const auto& e : train.entries) {
        rows.push_back({{"echo_index", e.echo_index}, {"time_s", e.time}, {"amplitude", e.amplitude}});
    }
    return rows;
}

inline std::string tepa_table_csv(const TepaTable& table) {
    std::string out = "echo_index,time_s,alpha,beta\n";
    for (const auto& e : table.entries) {
        out += std::to_string(e.echo_index);
        out += ',';
        out += format_value(e.time);
        out += ',';
        out += format_value(e.alpha);
        out += ',';
        out += format_value(e.beta);
        out += '\n';
    }
    return out;
}

inline json tepa_table_json(const TepaTable& table) {
    json rows = json::array();
    for (const auto& e : table.entries) {
        rows.push_back({{"echo_index", e.echo_index},
                        {"time_s", e.time},
                        {"alpha", e.alpha},
                        {"beta", e.beta}});
    }
    return rows;
}

/// Site/coil layout with frequencies in Hz.
inline json layout_json(const std::vector<QubitSite>& sites, const std::vector<CoilSpec>& coils) {
    json site_rows = json::array();
    for (const auto& s : sites) {
        site_rows.push_back({{"id", s.id}, {"z_m", s.z}, {"frequency_hz", to_hz(s.center_frequency)}});
    }
    json coil_rows = json::array();
    for (const auto& c : coils) {
        coil_rows.push_back({{"site_id", c.site_id},
                             {"carrier_hz", to_hz(c.carrier)},
                             {"bandwidth_hz", to_hz(c.bandwidth)}});
    }
    return {{"sites", site_rows}, {"coils", coil_rows}};
}

inline const char* selectivity_grade_name(SelectivityGrade g) {
    switch (g) {
    case SelectivityGrade::Fail: return "fail";
    case SelectivityGrade::Pass: return "pass";
    case SelectivityGrade::PassWithMargin: return "pass_with_margin";
    }
    return "?";
}

inline json crosstalk_json(const CrosstalkMatrix& matrix, const SelectivityReport& report) {
    json rows = json::array();
    for (std::size_t i = 0; i < matrix.n_coils; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < matrix.n_sites; ++j) row.push_back(matrix.at(i, j));
        rows.push_back(row);
    }
    json offending = json::array();
    for (const auto& pair : report.offending) {
        offending.push_back({{"coil_site_id", pair.coil_site_id}, {"site_id", pair.site_id}});
    }
    return {{"matrix", rows},
            {"grade", selectivity_grade_name(report.grade)},
            {"offending", offending},
            {"min_separation_hz", to_hz(report.min_separation)},
            {"max_bandwidth_hz", to_hz(report.max_bandwidth)}};
}

inline std::string coil_label(const CoilRef& coil) {
    return coil.kind == CoilRef::Kind::Main ? "main" : "qcoil:" + std::to_string(coil.site_id);
}

/// Pulse schedule rows {t_s, coil, axis, flip_deg, carrier_hz}.
inline json schedule_json(const std::vector<PulseEvent>& schedule) {
    json rows = json::array();
    for (const auto& p : schedule) {
        rows.push_back({{"t_s", p.start_time},
                        {"coil", coil_label(p.coil)},
                        {"axis", axis_name(p.axis)},
                        {"flip_deg", to_degrees(p.flip_angle)},
                        {"carrier_hz", to_hz(p.carrier)}});
    }
    return rows;
}

/// {bitstring: probability}, keys most significant qubit first.
inline json probabilities_json(const std::map<std::string, double>& probs) {
    json out = json::object();
    for (const auto& [label, p] : probs) out[label] = p;
    return out;
}

/// Writes via a sibling temp file and rename so readers never observe a
/// partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace mrq
