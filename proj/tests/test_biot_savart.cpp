#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "axiswirl/biot_savart.hpp"
#include "axiswirl/initial_data.hpp"
#include "oracle_helpers.hpp"

using namespace axiswirl;

namespace {

// Pinned by the F/F' oracles: Gr(1,0,1,1) = F'(1)/pi, Gz = (F(1)-2F'(1))/4pi.
constexpr double kGr_1011 = -0.090982075336048544;
constexpr double kGz_1011 = 0.076778921850171231;

ScalarField omega_patch(const HalfPlaneGrid& g, double r0, double z0, double w, double amp = 1.0) {
    ScalarField f = make_field(g, Quantity::OmegaTheta);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double d2 = std::pow(g.r_nodes[i] - r0, 2) + std::pow(g.z_nodes[j] - z0, 2);
            f.at(i, j) = amp * std::exp(-d2 / (w * w));
        }
    return f;
}

} // namespace

TEST_CASE("kernel_G: structural zeros and parity") {
    // factor (z - zb) kills Gr on the z = zb line
    for (double r : {0.5, 1.0, 2.5})
        for (double rb : {0.7, 1.9}) CHECK(kernel_G(r, 0.3, rb, 0.3).Gr == 0.0);

    const auto plus = kernel_G(1.2, 0.4, 0.9, 0.1);
    const auto minus = kernel_G(1.2, -0.2, 0.9, 0.1);  // z-zb = -(0.3)
    CHECK(plus.Gr == Catch::Approx(-minus.Gr).epsilon(1e-13));

    CHECK_THROWS_AS(kernel_G(1.0, 0.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(kernel_G(-1.0, 0.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("kernel_G: pinned values at xi^2 = 1") {
    const auto k = kernel_G(1.0, 0.0, 1.0, 1.0);
    CHECK(k.xi2 == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(k.Gr == Catch::Approx(kGr_1011).epsilon(1e-11));
    CHECK(k.Gz == Catch::Approx(kGz_1011).epsilon(1e-11));
}

TEST_CASE("kernel boundedness audit across the similarity range") {
    // |F'(xi^2)| xi^{2 beta} stays finite for beta in [1, 5/2]
    for (double beta : {1.0, 1.75, 2.5}) {
        double sup = 0.0;
        for (double xi2 = 1e-6; xi2 <= 1e6; xi2 *= 3.7) {
            const double v = std::abs(eval_F_prime(xi2)) * std::pow(xi2, beta);
            CHECK(std::isfinite(v));
            sup = std::max(sup, v);
        }
        CHECK(sup > 0.0);
        CHECK(std::isfinite(sup));
    }
}

TEST_CASE("reconstruct_velocity: zero in, zero out") {
    const auto g = build_grid(24, 32, 4.0, 3.0);
    const ScalarField zero = make_field(g, Quantity::OmegaTheta);
    const auto v = reconstruct_velocity(zero);
    for (double x : v.ur) CHECK(x == 0.0);
    for (double x : v.uz) CHECK(x == 0.0);
}

TEST_CASE("reconstruct_velocity: parity for z-even vorticity") {
    const auto g = build_grid(32, 48, 4.0, 3.0);
    const auto omega = omega_patch(g, 2.0, 0.0, 0.4);
    const auto v = reconstruct_velocity(omega);
    double vmax = 0.0;
    for (double x : v.ur) vmax = std::max(vmax, std::abs(x));
    for (double x : v.uz) vmax = std::max(vmax, std::abs(x));
    double residual = 0.0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const int jm = g.nz - 1 - j;
            residual = std::max(residual, std::abs(v.ur[g.index(i, j)] + v.ur[g.index(i, jm)]));
            residual = std::max(residual, std::abs(v.uz[g.index(i, j)] - v.uz[g.index(i, jm)]));
        }
    CHECK(residual < 1e-12 * vmax);
}

TEST_CASE("reconstruct_velocity: linearity") {
    const auto g = build_grid(20, 24, 4.0, 3.0);
    const auto o1 = omega_patch(g, 1.5, 0.5, 0.4, 1.0);
    const auto o2 = omega_patch(g, 2.5, -0.5, 0.3, -0.7);
    const double a = 1.7, b = -2.3;
    const auto vc = reconstruct_velocity(linear_combination(a, o1, b, o2));
    const auto v1 = reconstruct_velocity(o1);
    const auto v2 = reconstruct_velocity(o2);
    double vmax = 0.0, residual = 0.0;
    for (std::size_t k = 0; k < vc.ur.size(); ++k) {
        vmax = std::max(vmax, std::abs(vc.ur[k]));
        residual = std::max(residual, std::abs(vc.ur[k] - (a * v1.ur[k] + b * v2.ur[k])));
        residual = std::max(residual, std::abs(vc.uz[k] - (a * v1.uz[k] + b * v2.uz[k])));
    }
    CHECK(residual < 1e-12 * vmax);
}

TEST_CASE("reconstruct_velocity: dense and tabulated paths agree") {
    const auto g = build_grid(24, 28, 4.0, 3.0);
    const auto omega = omega_patch(g, 2.0, 0.0, 0.4);
    const auto vd = reconstruct_velocity(omega, ReconstructPath::Dense);
    const auto vt = reconstruct_velocity(omega, ReconstructPath::Tabulated);
    double vmax = 0.0, residual = 0.0;
    for (std::size_t k = 0; k < vd.ur.size(); ++k) {
        vmax = std::max(vmax, std::abs(vd.ur[k]) + std::abs(vd.uz[k]));
        residual = std::max(residual, std::abs(vd.ur[k] - vt.ur[k]));
        residual = std::max(residual, std::abs(vd.uz[k] - vt.uz[k]));
    }
    CHECK(residual < 1e-12 * vmax);
}

TEST_CASE("reconstruct_velocity: far-field decay along rays") {
    const auto g = build_grid(96, 96, 12.0, 12.0);
    const auto omega = omega_patch(g, 2.0, 0.0, 0.3);
    const auto v = reconstruct_velocity(omega);
    auto speed = [&](int i, int j) {
        return std::hypot(v.ur[g.index(i, j)], v.uz[g.index(i, j)]);
    };
    // distance d vs 2d from the patch along +r and +z rays
    const int i_d = static_cast<int>((2.0 + 3.0) / g.dr), i_2d = static_cast<int>((2.0 + 6.0) / g.dr);
    const int j_c = g.nz / 2;
    CHECK(speed(i_2d, j_c) < speed(i_d, j_c));
    const int j_d = static_cast<int>((12.0 + 3.0) / g.dz), j_2d = static_cast<int>((12.0 + 6.0) / g.dz);
    const int i_c = static_cast<int>(2.0 / g.dr);
    CHECK(speed(i_c, j_2d) < speed(i_c, j_d));
}

TEST_CASE("discrete divergence refines at second order") {
    double norms[2];
    int idx = 0;
    for (int n : {32, 64}) {
        const auto g = build_grid(n, 2 * n, 4.0, 3.0);
        const auto omega = omega_patch(g, 2.0, 0.0, 0.35);
        const auto div = weighted_divergence(reconstruct_velocity(omega));
        norms[idx++] = lp_norm_planar(div, 2.0);
    }
    CHECK(norms[0] / norms[1] == Catch::Approx(4.0).margin(1.2));
}

TEST_CASE("ur_over_r_audit: exponent formula and sentinel") {
    const auto g = build_grid(32, 32, 4.0, 4.0);
    const ScalarField zero = make_field(g, Quantity::OmegaTheta);
    const auto z = ur_over_r_audit(zero, 1.5, 6.0);
    CHECK(z.lambda == Catch::Approx(5.0 / 8.0).epsilon(1e-14));
    CHECK_FALSE(z.defined);
    CHECK(z.lhs == 0.0);

    CHECK_THROWS_AS(ur_over_r_audit(zero, 3.5, 6.0), std::domain_error);
    // q must exceed 3p/(3-p) = 3 for p = 3/2
    CHECK_THROWS_AS(ur_over_r_audit(zero, 1.5, 2.9), std::domain_error);

    const auto omega = omega_patch(g, 2.0, 0.0, 0.35);
    const auto a = ur_over_r_audit(omega, 1.5, 6.0);
    CHECK(a.defined);
    CHECK(std::isfinite(a.ratio));
    CHECK(a.ratio > 0.0);
}

TEST_CASE("ur_over_r_audit: ratio invariant under the scaling family") {
    // Both sides share the same scaling dimension, so the Gaussian patch
    // family scaled by lambda keeps the ratio fixed.
    const double p = 1.5, q = 6.0;
    double ratios[3];
    int idx = 0;
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto g = build_grid(64, 96, 6.0 / lambda, 4.0 / lambda);
        ScalarField omega = make_field(g, Quantity::OmegaTheta);
        const double w = 0.35 / lambda, r0 = 2.0 / lambda;
        const double amp = lambda * lambda;  // data scaling for omega
        for (int i = 0; i < g.nr; ++i)
            for (int j = 0; j < g.nz; ++j) {
                const double d2 = std::pow(g.r_nodes[i] - r0, 2) + std::pow(g.z_nodes[j], 2);
                omega.at(i, j) = amp * std::exp(-d2 / (w * w));
            }
        ratios[idx++] = ur_over_r_audit(omega, p, q).ratio;
    }
    CHECK(ratios[0] == Catch::Approx(ratios[1]).epsilon(0.03));
    CHECK(ratios[2] == Catch::Approx(ratios[1]).epsilon(0.03));
}
