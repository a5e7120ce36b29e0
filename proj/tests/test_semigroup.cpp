#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "axiswirl/semigroup.hpp"
#include "oracle_helpers.hpp"

using namespace axiswirl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScalarField bump(const HalfPlaneGrid& g, double r0, double z0, double w, double amp = 1.0) {
    ScalarField f = make_field(g, Quantity::OmegaTheta);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double d2 = std::pow(g.r_nodes[i] - r0, 2) + std::pow(g.z_nodes[j] - z0, 2);
            f.at(i, j) = amp * std::exp(-d2 / (w * w));
        }
    return f;
}

double rel_l2_diff(const ScalarField& a, const ScalarField& b) {
    return lp_norm_planar(linear_combination(1.0, a, -1.0, b), 2.0) / lp_norm_planar(b, 2.0);
}

} // namespace

TEST_CASE("apply_S: zero data and domain errors") {
    const auto g = build_grid(24, 24, 4.0, 2.0);
    const ScalarField zero = make_field(g);
    for (double t : {1e-3, 0.1, 10.0}) {
        const auto img = apply_S(t, zero);
        for (double v : img.values) CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(apply_S(0.0, zero), std::domain_error);
    CHECK_THROWS_AS(apply_S(-1.0, zero), std::domain_error);
    CHECK_THROWS_AS(apply_S_div(0.0, make_velocity(g)), std::domain_error);
}

TEST_CASE("apply_S: fast path equals the dense oracle path") {
    const auto g = build_grid(64, 64, 8.0, 4.0);
    const auto f = bump(g, 2.0, 0.0, 0.25);
    const auto fast = apply_S(0.25, f, SemigroupPath::Fast);
    const auto dense = apply_S(0.25, f, SemigroupPath::Dense);
    CHECK(rel_l2_diff(fast, dense) < 1e-10);
}

TEST_CASE("semigroup law") {
    const auto g = build_grid(128, 128, 8.0, 4.0);
    const auto f = bump(g, 2.0, 0.0, 0.25);
    const double n0 = lp_norm_planar(f, 2.0);
    {
        const auto two_steps = apply_S(0.1, apply_S(0.1, f));
        const auto one_step = apply_S(0.2, f);
        const double diff =
            lp_norm_planar(linear_combination(1.0, two_steps, -1.0, one_step), 2.0);
        CHECK(diff <= 1e-6 * n0);
    }
    {
        const auto two_steps = apply_S(0.2, apply_S(0.3, f));
        const auto one_step = apply_S(0.5, f);
        const double diff =
            lp_norm_planar(linear_combination(1.0, two_steps, -1.0, one_step), 2.0);
        CHECK(diff <= 1e-6 * n0);
    }
}

TEST_CASE("strong continuity with weights") {
    const auto g = build_grid(96, 96, 8.0, 4.0);
    const auto f = bump(g, 2.0, 0.0, 0.25);
    for (double delta : {-1.0, 0.0, 0.5}) {
        for (double m : {1.0, 2.0}) {
            const auto wf = weighted_field(f, delta);
            const double base = lp_norm_planar(wf, m);
            double prev = std::numeric_limits<double>::infinity();
            double last = 0.0;
            for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
                const auto img = weighted_field(apply_S(t, f), delta);
                last = lp_norm_planar(linear_combination(1.0, img, -1.0, wf), m);
                CHECK(last < prev);
                prev = last;
            }
            CHECK(last < 1e-2 * base);
        }
    }
}

TEST_CASE("apply_S_div: zero data and consistency with differentiation") {
    const auto g = build_grid(64, 64, 8.0, 4.0);
    const VelocityField zero = make_velocity(g);
    const auto img = apply_S_div(0.3, zero);
    for (double v : img.values) CHECK(v == 0.0);

    VelocityField f = make_velocity(g);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double d2 = std::pow(g.r_nodes[i] - 2.0, 2) + std::pow(g.z_nodes[j], 2);
            f.ur[g.index(i, j)] = std::exp(-d2 / 0.25) * (1.0 + 0.3 * g.z_nodes[j]);
            f.uz[g.index(i, j)] = std::exp(-d2 / 0.25) * (0.5 - 0.2 * (g.r_nodes[i] - 2.0));
        }
    const auto lhs = apply_S_div(0.25, f);
    // oracle: 4th-order central div_*, then apply_S
    ScalarField div = make_field(g);
    auto fr = [&](int i, int j) { return (i >= 0 && i < g.nr) ? f.ur[g.index(i, j)] : 0.0; };
    auto fz = [&](int i, int j) { return (j >= 0 && j < g.nz) ? f.uz[g.index(i, j)] : 0.0; };
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            div.at(i, j) =
                (-fr(i + 2, j) + 8 * fr(i + 1, j) - 8 * fr(i - 1, j) + fr(i - 2, j)) / (12 * g.dr) +
                (-fz(i, j + 2) + 8 * fz(i, j + 1) - 8 * fz(i, j - 1) + fz(i, j - 2)) / (12 * g.dz);
    const auto rhs = apply_S(0.25, div);
    CHECK(rel_l2_diff(lhs, rhs) < 1e-3);
}

TEST_CASE("apply_S_weighted: reduction and cone") {
    const auto g = build_grid(32, 32, 4.0, 2.0);
    const auto f = bump(g, 1.5, 0.0, 0.3);
    const auto a = apply_S_weighted(0.2, 0.0, 1.0, f);
    const auto b = apply_S(0.2, f);
    for (std::size_t k = 0; k < a.values.size(); ++k) CHECK(a.values[k] == b.values[k]);

    CHECK_THROWS_AS(apply_S_weighted(0.2, 0.5, 0.8, f), std::domain_error);
    CHECK_THROWS_AS(apply_S_weighted(0.2, -1.5, 0.0, f), std::domain_error);
    CHECK_THROWS_AS(apply_S_weighted(0.2, 0.0, -1.5, f), std::domain_error);
    CHECK_NOTHROW(apply_S_weighted(0.2, -0.3, 1.3, f));
}

TEST_CASE("operator decay: p = q has no forced decay") {
    // a broad smooth field barely changes its L2 norm across the window
    const auto g = build_grid(96, 96, 96.0, 48.0);
    const auto broad = bump(g, 40.0, 0.0, 18.0);
    const auto fit =
        measure_operator_decay(DecayKind::plain(), 2.0, 2.0, broad, dyadic_times(1.0, 4.0));
    CHECK(std::abs(fit.slope - 0.0) <= 0.05);
    CHECK(fit.slope_target == 0.0);
}

TEST_CASE("operator decay: kind/argument mismatches are rejected") {
    const auto g = build_grid(16, 16, 4.0, 2.0);
    const auto f = bump(g, 1.5, 0.0, 0.4);
    CHECK_THROWS_AS(measure_operator_decay(DecayKind::divergence(), 1.0, 1.0, f, {1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        measure_operator_decay(DecayKind::plain(), 1.0, 2.0, make_velocity(g), {1.0, 2.0}),
        std::invalid_argument);
}

TEST_CASE("operator decay: all-underflow input is reported") {
    const auto g = build_grid(16, 16, 4.0, 2.0);
    const auto f = bump(g, 1.5, 0.0, 0.4, 1e-300);
    CHECK_THROWS_AS(
        measure_operator_decay(DecayKind::plain(), 1.0, 2.0, f, std::vector<double>{1.0, 2.0}),
        std::runtime_error);
}

TEST_CASE("Dirichlet compatibility at the axis") {
    // for data away from r = 0 the image at the smallest r node scales ~ r
    double values[2];
    int idx = 0;
    for (int nr : {24, 96}) {
        const auto g = build_grid(nr, 48, 6.0, 3.0);
        const auto f = bump(g, 2.0, 0.0, 0.4);
        const auto img = apply_S(0.25, f);
        double m = 0.0;
        for (int j = 0; j < g.nz; ++j) m = std::max(m, std::abs(img.at(0, j)));
        values[idx++] = m;
    }
    CHECK(values[1] < 0.5 * values[0]);
}

TEST_CASE("kernel weight positivity follows from H >= 0") {
    oracle::rng(0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> co(0.05, 8.0);
    std::uniform_real_distribution<double> ts(1e-4, 10.0);
    for (int k = 0; k < 200; ++k) {
        const double r = co(rng), rb = co(rng), t = ts(rng);
        const double w = std::sqrt(rb / r) * fast_H(t / (r * rb)) / (4.0 * M_PI * t);
        CHECK(w >= 0.0);
    }
}

TEST_CASE("weighted decay fit matches the exponent budget") {
    // alpha = -3/10, beta = 13/10 at (p,q) = (20/13, 2): slope target
    // -(1/2 - (a+b)/2 + 1/p - 1/q) = -3/20
    const auto g = build_grid(96, 96, 48.0, 30.0);
    const auto profile = make_power_profile(g, 20.0, 0.0, 20.0 / 13.0, 0.9, 16.0);
    const auto fit = measure_operator_decay(DecayKind::weighted(-0.3, 1.3), 20.0 / 13.0, 2.0,
                                            profile, dyadic_times(1.0, 16.0));
    CHECK(fit.slope_target == Catch::Approx(-0.15).margin(1e-12));
    CHECK(std::abs(fit.slope - fit.slope_target) <= 0.1);
}
