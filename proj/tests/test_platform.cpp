#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mrq/platform.hpp"

using namespace mrq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PhysicsConfig gradient_cfg(double gz = 0.01) {
    PhysicsConfig cfg;
    cfg.gamma = to_angular(42.577e6);
    cfg.b0 = 3.0;
    cfg.gz = gz;
    cfg.t1 = 4.0;
    cfg.t2 = 2.0;
    return cfg;
}

}  // namespace

TEST_CASE("assign_sites lays out the gradient-encoded frequencies") {
    const PhysicsConfig cfg = gradient_cfg();

    const auto single = assign_sites(1, 0.001, cfg);
    REQUIRE(single.size() == 1);
    REQUIRE(single[0].z == 0.0);
    REQUIRE(single[0].center_frequency == cfg.gamma * cfg.b0);

    const auto sites = assign_sites(3, 0.001, cfg);
    REQUIRE(sites.size() == 3);
    for (std::size_t i = 1; i < sites.size(); ++i) {
        REQUIRE(sites[i].center_frequency > sites[i - 1].center_frequency);
        const double df = to_hz(sites[i].center_frequency - sites[i - 1].center_frequency);
        REQUIRE_THAT(df, WithinAbs(425.77, 1e-6));
    }
    REQUIRE(sites[0].id == 1);
    REQUIRE(sites[2].id == 3);
}

TEST_CASE("assign_sites rejects degenerate configurations") {
    REQUIRE_THROWS_AS(assign_sites(2, 0.001, gradient_cfg(0.0)), std::invalid_argument);
    REQUIRE_NOTHROW(assign_sites(1, 0.001, gradient_cfg(0.0)));
    REQUIRE_THROWS_AS(assign_sites(0, 0.001, gradient_cfg()), std::invalid_argument);
    REQUIRE_THROWS_AS(assign_sites(2, 0.0, gradient_cfg()), std::invalid_argument);
}

TEST_CASE("default_coils mirrors the site list") {
    const auto sites = assign_sites(3, 0.001, gradient_cfg());
    const auto coils = default_coils(sites, to_angular(200.0));
    REQUIRE(coils.size() == 3);
    for (std::size_t i = 0; i < coils.size(); ++i) {
        REQUIRE(coils[i].site_id == sites[i].id);
        REQUIRE(coils[i].carrier == sites[i].center_frequency);
        REQUIRE(coils[i].bandwidth == to_angular(200.0));
    }
    REQUIRE(default_coils({}, to_angular(200.0)).empty());
    REQUIRE_THROWS_AS(default_coils(sites, 0.0), std::invalid_argument);
}

TEST_CASE("crosstalk matrix against the top-hat predicate") {
    const auto sites = assign_sites(3, 0.001, gradient_cfg());
    const double separation = sites[1].center_frequency - sites[0].center_frequency;

    SECTION("narrow bands give the identity") {
        const auto m = crosstalk_matrix(sites, default_coils(sites, 0.5 * separation));
        REQUIRE(m.is_identity());
    }

    SECTION("a 3x-separation band on the middle coil covers every site") {
        const auto m = crosstalk_matrix(sites, default_coils(sites, 3.0 * separation));
        for (std::size_t j = 0; j < 3; ++j) REQUIRE(m.at(1, j));
        // edge coils still miss the far site: |f3 - f1| = 2*sep > 1.5*sep
        REQUIRE_FALSE(m.at(0, 2));
        REQUIRE_FALSE(m.at(2, 0));
    }

    SECTION("single matched pair") {
        const auto one = assign_sites(1, 0.001, gradient_cfg());
        const auto m = crosstalk_matrix(one, default_coils(one, to_angular(100.0)));
        REQUIRE(m.n_coils == 1);
        REQUIRE(m.at(0, 0));
    }

    REQUIRE_THROWS_AS(crosstalk_matrix({}, default_coils(sites, separation)),
                      std::invalid_argument);
}

TEST_CASE("crosstalk outcome is invariant under joint frequency scaling") {
    const auto sites = assign_sites(4, 0.001, gradient_cfg());
    const auto doubled = assign_sites(4, 0.001, gradient_cfg(0.02));
    const double sep = sites[1].center_frequency - sites[0].center_frequency;
    const double sep2 = doubled[1].center_frequency - doubled[0].center_frequency;
    // separations come from subtracting ~1e9 rad/s carriers, so the doubling
    // identity holds to the cancellation floor rather than to full precision
    REQUIRE_THAT(sep2, WithinRel(2.0 * sep, 1e-9));

    for (double ratio : {0.4, 0.9, 1.1, 2.2, 3.0}) {
        const auto a = crosstalk_matrix(sites, default_coils(sites, ratio * sep));
        const auto b = crosstalk_matrix(doubled, default_coils(doubled, ratio * sep2));
        REQUIRE(a.cells == b.cells);
    }
}

TEST_CASE("crosstalk matrix is deterministic") {
    const auto sites = assign_sites(5, 0.0015, gradient_cfg());
    const auto coils = default_coils(sites, to_angular(300.0));
    const auto a = crosstalk_matrix(sites, coils);
    const auto b = crosstalk_matrix(sites, coils);
    REQUIRE(a.cells == b.cells);
}

TEST_CASE("selectivity report grades and offending pairs") {
    const auto sites = assign_sites(3, 0.001, gradient_cfg());
    const double separation = sites[1].center_frequency - sites[0].center_frequency;

    SECTION("identity with wide margin") {
        const auto report = validate_selectivity(sites, default_coils(sites, 0.45 * separation));
        REQUIRE(report.grade == SelectivityGrade::PassWithMargin);
        REQUIRE(report.offending.empty());
    }

    SECTION("identity without margin") {
        // band below separation but above half of it: still selective
        const auto report = validate_selectivity(sites, default_coils(sites, 1.2 * separation));
        REQUIRE(report.grade == SelectivityGrade::Pass);
        REQUIRE(report.offending.empty());
    }

    SECTION("2.5x separation hits every adjacent neighbor") {
        const auto coils = default_coils(sites, 2.5 * separation);
        const auto report = validate_selectivity(sites, coils);
        REQUIRE(report.grade == SelectivityGrade::Fail);
        REQUIRE(report.offending.size() == 4);  // (1,2),(2,1),(2,3),(3,2)
        for (const auto& pair : report.offending) {
            REQUIRE(std::abs(pair.coil_site_id - pair.site_id) == 1);
        }
        // a matched carrier always keeps its own site, even while leaking
        const auto m = crosstalk_matrix(sites, coils);
        for (std::size_t i = 0; i < 3; ++i) REQUIRE(m.at(i, i));
    }

    SECTION("single site always passes") {
        const auto one = assign_sites(1, 0.001, gradient_cfg());
        const auto report = validate_selectivity(one, default_coils(one, to_angular(1e6)));
        REQUIRE(report.pass());
    }
}
