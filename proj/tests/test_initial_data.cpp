#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "axiswirl/initial_data.hpp"

using namespace axiswirl;

TEST_CASE("make_data: zero amplitudes give zero fields") {
    const auto g = build_grid(64, 64, 4.0, 4.0);
    DataSpec spec;
    spec.r0 = 1.7;
    spec.width = 0.2;
    spec.amp_omega = 0.0;
    spec.amp_swirl = 0.0;
    auto [omega, swirl] = make_data(spec, g);
    for (double v : omega.values) CHECK(v == 0.0);
    for (double v : swirl.values) CHECK(v == 0.0);
}

TEST_CASE("make_data: deterministic and tagged") {
    const auto g = build_grid(48, 48, 4.0, 4.0);
    DataSpec spec;
    spec.r0 = 1.7;
    spec.width = 0.3;
    spec.amp_omega = 0.8;
    spec.amp_swirl = 0.1;
    auto [o1, u1] = make_data(spec, g);
    auto [o2, u2] = make_data(spec, g);
    CHECK(o1.quantity == Quantity::OmegaTheta);
    CHECK(u1.quantity == Quantity::UTheta);
    for (std::size_t k = 0; k < o1.values.size(); ++k) {
        CHECK(o1.values[k] == o2.values[k]);
        CHECK(u1.values[k] == u2.values[k]);
    }
}

TEST_CASE("make_data: vanishes near axis and truncation boundaries") {
    const auto g = build_grid(64, 64, 4.0, 4.0);
    DataSpec spec;
    spec.r0 = 1.7;  // 8.5 widths from the axis
    spec.width = 0.2;
    spec.amp_omega = 3.0;
    spec.amp_swirl = 1.0;
    auto [omega, swirl] = make_data(spec, g);
    const double margin = 3.0 * spec.width;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const bool near_edge = g.r_nodes[i] < margin || g.r_nodes[i] > g.r_max - margin ||
                                   std::abs(g.z_nodes[j]) > g.z_max - margin;
            if (!near_edge) continue;
            CHECK(std::abs(omega.at(i, j)) < 1e-12 * spec.amp_omega);
            CHECK(std::abs(swirl.at(i, j)) < 1e-12 * spec.amp_swirl);
        }
}

TEST_CASE("make_data: even in z about the ring center") {
    const auto g = build_grid(32, 32, 4.0, 4.0);
    DataSpec spec;
    spec.r0 = 1.7;
    spec.width = 0.3;
    spec.amp_swirl = 0.5;
    for (auto profile : {SwirlProfile::Gaussian, SwirlProfile::CompactBump}) {
        spec.swirl_profile = profile;
        auto [omega, swirl] = make_data(spec, g);
        for (int i = 0; i < g.nr; ++i)
            for (int j = 0; j < g.nz; ++j) {
                CHECK(omega.at(i, j) == omega.at(i, g.nz - 1 - j));
                CHECK(swirl.at(i, j) == swirl.at(i, g.nz - 1 - j));
            }
    }
}

TEST_CASE("critical bundle is 1-homogeneous and monotone in amplitudes") {
    const auto g = build_grid(48, 48, 4.0, 4.0);
    DataSpec spec;
    spec.r0 = 1.7;
    spec.width = 0.25;
    spec.amp_omega = 0.4;
    spec.amp_swirl = 0.2;
    auto [o, u] = make_data(spec, g);
    const double b1 = critical_bundle(o, u);

    DataSpec doubled = spec;
    doubled.amp_omega *= 2.0;
    doubled.amp_swirl *= 2.0;
    auto [o2, u2] = make_data(doubled, g);
    CHECK(critical_bundle(o2, u2) == Catch::Approx(2.0 * b1).epsilon(1e-12));

    DataSpec more_swirl = spec;
    more_swirl.amp_swirl *= 3.0;
    auto [o3, u3] = make_data(more_swirl, g);
    CHECK(critical_bundle(o3, u3) > b1);
}

TEST_CASE("calibrate_smallness: fixed point and exact halving") {
    const auto g = build_grid(48, 48, 4.0, 4.0);
    DataSpec spec;
    spec.r0 = 1.7;
    spec.width = 0.25;
    spec.amp_omega = 0.4;
    spec.amp_swirl = 0.2;
    auto [o, u] = make_data(spec, g);
    const double current = critical_bundle(o, u);

    const DataSpec same = calibrate_smallness(spec, g, current);
    CHECK(same.amp_omega == Catch::Approx(spec.amp_omega).epsilon(1e-5));
    CHECK(same.amp_swirl == Catch::Approx(spec.amp_swirl).epsilon(1e-5));

    const DataSpec half = calibrate_smallness(spec, g, 0.5 * current);
    CHECK(half.amp_omega == Catch::Approx(0.5 * spec.amp_omega).epsilon(1e-5));
    CHECK(half.amp_swirl == Catch::Approx(0.5 * spec.amp_swirl).epsilon(1e-5));
}

TEST_CASE("calibrate_smallness: target survives grid refinement") {
    const auto g = build_grid(64, 64, 4.0, 4.0);
    DataSpec spec;
    spec.r0 = 1.7;
    spec.width = 0.25;
    spec.amp_omega = 1.0;
    spec.amp_swirl = 0.3;
    const double target = 1e-3;
    const DataSpec cal = calibrate_smallness(spec, g, target);

    const auto g2 = build_grid(128, 128, 4.0, 4.0);
    auto [o, u] = make_data(cal, g2);
    CHECK(critical_bundle(o, u) == Catch::Approx(target).epsilon(1e-3));
}

TEST_CASE("data spec validation") {
    const auto g = build_grid(16, 16, 4.0, 4.0);  // dr = 0.25
    DataSpec bad_width;
    bad_width.r0 = 2.0;
    bad_width.width = 0.4;  // not > 2*dr
    CHECK_THROWS_AS(make_data(bad_width, g), std::invalid_argument);

    DataSpec bad_center;
    bad_center.r0 = 0.5;
    bad_center.width = 0.6;
    CHECK_THROWS_AS(make_data(bad_center, build_grid(64, 64, 4.0, 4.0)), std::invalid_argument);
}

TEST_CASE("compact bump swirl is compactly supported") {
    const auto g = build_grid(64, 64, 4.0, 4.0);
    DataSpec spec;
    spec.r0 = 1.7;
    spec.width = 0.2;
    spec.amp_swirl = 1.0;
    spec.swirl_profile = SwirlProfile::CompactBump;
    auto [omega, swirl] = make_data(spec, g);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double rho = std::hypot(g.r_nodes[i] - spec.r0, g.z_nodes[j]);
            if (rho > 3.0 * spec.width) CHECK(swirl.at(i, j) == 0.0);
        }
}
