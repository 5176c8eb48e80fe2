#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mrq/evolution.hpp"

namespace mrq {

/// One MR-qubit frequency band: a point site on the z axis with the Larmor
/// frequency the gradient assigns to it.
struct QubitSite {
    int id{0};
    double z{0.0};                 // m
    double center_frequency{0.0};  // rad/s
};

struct CoilSpec {
    int site_id{0};
    double carrier{0.0};    // rad/s
    double bandwidth{0.0};  // rad/s
};

/// Sites at z = 0, dz, ..., (n-1)dz with constant adjacent separation
/// gamma * Gz * dz.
inline std::vector<QubitSite> assign_sites(int n, double z_spacing, const PhysicsConfig& cfg) {
    if (n < 1) throw std::invalid_argument("assign_sites: need at least one site");
    if (!(z_spacing > 0.0)) throw std::invalid_argument("assign_sites: z_spacing must be positive");
    if (cfg.gz == 0.0 && n > 1) {
        throw std::invalid_argument("assign_sites: gz = 0 makes multiple sites frequency-degenerate");
    }
    std::vector<QubitSite> sites;
    sites.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double z = i * z_spacing;
        sites.push_back({i + 1, z, larmor_frequency(cfg, z)});
    }
    return sites;
}

/// One coil per site, carrier on the site's center frequency.
inline std::vector<CoilSpec> default_coils(const std::vector<QubitSite>& sites, double bandwidth) {
    if (!(bandwidth > 0.0)) throw std::invalid_argument("default_coils: bandwidth must be positive");
    std::vector<CoilSpec> coils;
    coils.reserve(sites.size());
    for (const auto& site : sites) {
        coils.push_back({site.id, site.center_frequency, bandwidth});
    }
    return coils;
}

/// Dense coil x site boolean matrix.
struct CrosstalkMatrix {
    std::size_t n_coils{0};
    std::size_t n_sites{0};
    std::vector<std::uint8_t> cells;

    bool at(std::size_t coil, std::size_t site) const {
        return cells[coil * n_sites + site] != 0;
    }
    bool is_identity() const {
        if (n_coils != n_sites) return false;
        for (std::size_t i = 0; i < n_coils; ++i) {
            for (std::size_t j = 0; j < n_sites; ++j) {
                if (at(i, j) != (i == j)) return false;
            }
        }
        return true;
    }
};

/// Entry (i, j) is true iff coil i's top-hat band covers site j.
inline CrosstalkMatrix crosstalk_matrix(const std::vector<QubitSite>& sites,
                                        const std::vector<CoilSpec>& coils) {
    if (sites.empty() || coils.empty()) {
        throw std::invalid_argument("crosstalk_matrix: sites and coils must be non-empty");
    }
    CrosstalkMatrix m{coils.size(), sites.size(), {}};
    m.cells.resize(coils.size() * sites.size(), 0);
    for (std::size_t i = 0; i < coils.size(); ++i) {
        for (std::size_t j = 0; j < sites.size(); ++j) {
            m.cells[i * sites.size() + j] =
                in_band(sites[j].center_frequency, coils[i].carrier, coils[i].bandwidth) ? 1 : 0;
        }
    }
    return m;
}

enum class SelectivityGrade { Fail, Pass, PassWithMargin };

struct CrosstalkPair {
    int coil_site_id{0};
    int site_id{0};
};

struct SelectivityReport {
    SelectivityGrade grade{SelectivityGrade::Fail};
    std::vector<CrosstalkPair> offending;  // off-diagonal hits, coil-major order
    double min_separation{0.0};            // smallest adjacent frequency gap, rad/s
    double max_bandwidth{0.0};             // widest coil band, rad/s

    bool pass() const { return grade != SelectivityGrade::Fail; }
};

/// Passes iff the crosstalk matrix is the identity; the stricter
/// PassWithMargin grade additionally wants separation >= 2x bandwidth.
inline SelectivityReport validate_selectivity(const std::vector<QubitSite>& sites,
                                              const std::vector<CoilSpec>& coils) {
    const CrosstalkMatrix m = crosstalk_matrix(sites, coils);
    SelectivityReport report;
    for (std::size_t i = 0; i < coils.size(); ++i) {
        for (std::size_t j = 0; j < sites.size(); ++j) {
            const bool want = coils[i].site_id == sites[j].id;
            if (m.at(i, j) && !want) {
                report.offending.push_back({coils[i].site_id, sites[j].id});
            }
        }
    }
    double min_sep = infinite_time();
    for (std::size_t j = 1; j < sites.size(); ++j) {
        min_sep = std::min(min_sep, sites[j].center_frequency - sites[j - 1].center_frequency);
    }
    double max_bw = 0.0;
    for (const auto& coil : coils) max_bw = std::max(max_bw, coil.bandwidth);
    report.min_separation = min_sep;
    report.max_bandwidth = max_bw;

    if (!report.offending.empty() || !m.is_identity()) {
        report.grade = SelectivityGrade::Fail;
    } else if (min_sep >= 2.0 * max_bw) {
        report.grade = SelectivityGrade::PassWithMargin;
    } else {
        report.grade = SelectivityGrade::Pass;
    }
    return report;
}

}  // namespace mrq
