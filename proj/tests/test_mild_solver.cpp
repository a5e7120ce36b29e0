#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "axiswirl/initial_data.hpp"
#include "axiswirl/mild_solver.hpp"

using namespace axiswirl;

namespace {

std::pair<ScalarField, ScalarField> small_data(const HalfPlaneGrid& g, double amp_o, double amp_s) {
    DataSpec spec;
    spec.r0 = 2.0;
    spec.width = 0.6;
    spec.amp_omega = amp_o;
    spec.amp_swirl = amp_s;
    return make_data(spec, g);
}

double rel_l2(const ScalarField& a, const ScalarField& b) {
    return lp_norm_planar(linear_combination(1.0, a, -1.0, b), 2.0) / lp_norm_planar(b, 2.0);
}

} // namespace

TEST_CASE("graded time nodes") {
    const auto ts = graded_time_nodes(0.5, 16);
    REQUIRE(ts.size() == 17);
    CHECK(ts.front() == 0.0);
    CHECK(ts.back() == Catch::Approx(0.5));
    for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i] > ts[i - 1]);
    // quadratic grading: first positive node at T/J^2
    CHECK(ts[1] == Catch::Approx(0.5 / 256.0));
    CHECK_THROWS_AS(graded_time_nodes(-1.0, 8), std::invalid_argument);
}

TEST_CASE("xt_norm: zero, homogeneity, empty") {
    const auto g = build_grid(16, 16, 4.0, 2.0);
    Trajectory traj;
    CHECK_THROWS_AS(xt_norm(traj, 1.0), std::invalid_argument);

    auto [o, u] = small_data(g, 0.7, 0.3);
    traj.states.push_back({0.0, make_field(g, Quantity::OmegaTheta), make_field(g, Quantity::UTheta)});
    traj.states.push_back({0.25, o, u});
    traj.states.push_back({0.5, o, u});
    CHECK(xt_norm(traj, 0.5) > 0.0);

    Trajectory zero;
    zero.states.push_back({0.5, make_field(g), make_field(g)});
    CHECK(xt_norm(zero, 0.5) == 0.0);

    Trajectory doubled = traj;
    for (auto& s : doubled.states) {
        s.omega = scaled(s.omega, 2.0);
        s.swirl = scaled(s.swirl, 2.0);
    }
    CHECK(xt_norm(doubled, 0.5) == Catch::Approx(2.0 * xt_norm(traj, 0.5)).epsilon(1e-13));
}

TEST_CASE("heat-only X_T norm vanishes with the window") {
    const auto g = build_grid(32, 32, 6.0, 3.0);
    auto [o, u] = small_data(g, 1.0, 0.3);
    double prev = std::numeric_limits<double>::infinity();
    double first = 0.0, last = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double T = 0.5 / std::pow(16.0, k);
        const auto heat = heat_trajectory(o, u, graded_time_nodes(T, 8));
        const double v = xt_norm(heat, T);
        if (k == 0) first = v;
        last = v;
        CHECK(v < prev);
        prev = v;
    }
    // slowest weight is t^{3/20}: over 16^3 the bound is 4096^{-0.15} ~ 0.29
    CHECK(last < 0.35 * first);
}

TEST_CASE("bilinear_F: zero pairs and bilinearity") {
    const auto g = build_grid(24, 24, 6.0, 3.0);
    const VelocityReconstructor rec(g);

    auto [o1, u1] = small_data(g, 0.8, 0.2);
    auto [o2, u2] = small_data(g, -0.5, 0.4);
    const auto nodes = graded_time_nodes(0.4, 6);

    const auto zeros = PairTrajectory::wrap(
        heat_trajectory(make_field(g, Quantity::OmegaTheta), make_field(g, Quantity::UTheta), nodes),
        rec);
    auto [bz_o, bz_u] = bilinear_F(zeros, zeros, 0.4);
    for (double v : bz_o.values) CHECK(v == 0.0);
    for (double v : bz_u.values) CHECK(v == 0.0);

    const auto P = PairTrajectory::wrap(heat_trajectory(o1, u1, nodes), rec);
    const auto Q = PairTrajectory::wrap(heat_trajectory(o2, u2, nodes), rec);

    const double a = 1.7;
    Trajectory scaled_traj = heat_trajectory(o1, u1, nodes);
    for (auto& s : scaled_traj.states) {
        s.omega = scaled(s.omega, a);
        s.swirl = scaled(s.swirl, a);
    }
    const auto Pa = PairTrajectory::wrap(scaled_traj, rec);

    auto [f1o, f1u] = bilinear_F(P, Q, 0.4);
    auto [f2o, f2u] = bilinear_F(Pa, Q, 0.4);
    double scale = lp_norm_planar(f1o, 2.0) + lp_norm_planar(f1u, 2.0);
    for (std::size_t k = 0; k < f1o.values.size(); ++k) {
        CHECK(std::abs(f2o.values[k] - a * f1o.values[k]) < 1e-12 * a * scale);
        CHECK(std::abs(f2u.values[k] - a * f1u.values[k]) < 1e-12 * a * scale);
    }

    auto [f3o, f3u] = bilinear_F(P, Q, 0.4, BilinearOptions{8});
    (void)f3o;
    (void)f3u;

    CHECK_THROWS_AS(bilinear_F(P, Q, 0.6), std::invalid_argument);
}

TEST_CASE("picard: zero data converges immediately to the zero trajectory") {
    const auto g = build_grid(24, 24, 4.0, 2.0);
    const ScalarField zo = make_field(g, Quantity::OmegaTheta);
    const ScalarField zu = make_field(g, Quantity::UTheta);
    auto [traj, diag] = picard_solve(zo, zu, 1.0, PicardOptions{1e-12, 5, 6, {6}});
    CHECK(diag.converged);
    CHECK(diag.iterations == 1);
    for (const auto& s : traj.states) {
        for (double v : s.omega.values) CHECK(v == 0.0);
        for (double v : s.swirl.values) CHECK(v == 0.0);
    }
}

TEST_CASE("picard: small data sits inside the fixed-point ball") {
    const auto g = build_grid(32, 32, 6.0, 3.0);
    DataSpec spec;
    spec.r0 = 2.0;
    spec.width = 0.6;
    spec.amp_omega = 1.0;
    spec.amp_swirl = 0.3;
    const DataSpec cal = calibrate_smallness(spec, g, 1e-3);
    auto [o, u] = make_data(cal, g);

    PicardOptions opts;
    opts.tol = 1e-10;
    opts.max_iters = 20;
    opts.time_nodes = 12;
    opts.quad.segments_per_side = 8;
    auto [traj, diag] = picard_solve(o, u, 0.5, opts);

    CHECK(diag.converged);
    CHECK(diag.iterations <= 20);
    CHECK(diag.residuals.back() < 1e-8);
    CHECK(diag.contraction_est <= 0.5);
    CHECK(xt_norm(traj, 0.5) <= 2.0 * diag.el_T);

    // residuals decrease monotonically in the contraction regime
    for (std::size_t i = 1; i < diag.residuals.size(); ++i)
        CHECK(diag.residuals[i] < diag.residuals[i - 1]);
}

TEST_CASE("picard: iteration count non-increasing as the data shrinks") {
    const auto g = build_grid(24, 24, 6.0, 3.0);
    PicardOptions opts;
    opts.tol = 1e-9;
    opts.max_iters = 20;
    opts.time_nodes = 8;
    opts.quad.segments_per_side = 6;
    int prev = 100;
    for (double amp : {2.0, 0.5, 0.05}) {
        auto [o, u] = small_data(g, amp, 0.3 * amp);
        auto [traj, diag] = picard_solve(o, u, 0.5, opts);
        CHECK(diag.converged);
        CHECK(diag.iterations <= prev);
        prev = diag.iterations;
    }
}

TEST_CASE("picard: non-convergence produces a divergence report") {
    const auto g = build_grid(24, 24, 6.0, 3.0);
    auto [o, u] = small_data(g, 60.0, 15.0);
    PicardOptions opts;
    opts.tol = 1e-9;
    opts.max_iters = 6;
    opts.time_nodes = 8;
    opts.quad.segments_per_side = 6;
    auto [traj, diag] = picard_solve(o, u, 0.5, opts);
    CHECK_FALSE(diag.converged);
    CHECK(!diag.residuals.empty());
    CHECK(!diag.xt_norms.empty());
}

TEST_CASE("zero swirl stays zero in both solvers") {
    const auto g = build_grid(32, 32, 6.0, 3.0);
    auto [o, u_zero] = small_data(g, 1.0, 0.0);

    PicardOptions opts;
    opts.time_nodes = 8;
    opts.quad.segments_per_side = 6;
    auto [traj, diag] = picard_solve(o, u_zero, 0.3, opts);
    for (const auto& s : traj.states)
        for (double v : s.swirl.values) CHECK(v == 0.0);

    const auto oracle = splitting_oracle_solve(o, u_zero, 0.3, 128);
    for (const auto& s : oracle.trajectory.states)
        for (double v : s.swirl.values) CHECK(v == 0.0);
}

TEST_CASE("oracle: zero data, CFL reporting") {
    const auto g = build_grid(24, 24, 4.0, 2.0);
    const auto res = splitting_oracle_solve(make_field(g, Quantity::OmegaTheta),
                                            make_field(g, Quantity::UTheta), 0.2, 32);
    CHECK(res.max_cfl == 0.0);
    for (const auto& s : res.trajectory.states)
        for (double v : s.omega.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(splitting_oracle_solve(make_field(g), make_field(g), -0.1, 32),
                    std::invalid_argument);
}

TEST_CASE("oracle: first-order self-convergence in the step size") {
    const auto g = build_grid(32, 32, 6.0, 3.0);
    auto [o, u] = small_data(g, 2.0, 0.5);
    const double T = 0.25;
    const auto ref = splitting_oracle_solve(o, u, T, 4096);
    double errs[2];
    int idx = 0;
    for (int steps : {256, 512}) {
        const auto run = splitting_oracle_solve(o, u, T, steps);
        errs[idx++] =
            rel_l2(run.trajectory.states.back().omega, ref.trajectory.states.back().omega);
    }
    CHECK(errs[0] / errs[1] == Catch::Approx(2.0).margin(0.8));
}

TEST_CASE("picard and oracle agree on a moderate run") {
    const auto g = build_grid(48, 48, 6.0, 3.0);
    auto [o, u] = small_data(g, 0.5, 0.1);
    PicardOptions opts;
    opts.time_nodes = 16;
    opts.quad.segments_per_side = 8;
    auto [traj, diag] = picard_solve(o, u, 0.5, opts);
    REQUIRE(diag.converged);
    const auto oracle = splitting_oracle_solve(o, u, 0.5, 256);
    CHECK(rel_l2(traj.states.back().omega, oracle.trajectory.states.back().omega) < 1e-2);
    CHECK(rel_l2(traj.states.back().swirl, oracle.trajectory.states.back().swirl) < 1e-2);
}

TEST_CASE("fix-point bound audit: bilinear image controlled by X_T products") {
    // t^{1-1/p} ||F^omega(t)||_{L^p} <= A (||o1||_X ||o2||_X + ||u1||_X ||u2||_X)
    const auto g = build_grid(24, 24, 6.0, 3.0);
    const VelocityReconstructor rec(g);
    const auto nodes = graded_time_nodes(0.4, 6);
    const double p = 4.0 / 3.0;
    double worst_A = 0.0;
    for (unsigned seed = 1; seed <= 3; ++seed) {
        auto [o1, u1] = small_data(g, 0.4 * seed, 0.1 * seed);
        auto [o2, u2] = small_data(g, 0.7 / seed, 0.2 / seed);
        const auto P = PairTrajectory::wrap(heat_trajectory(o1, u1, nodes), rec);
        const auto Q = PairTrajectory::wrap(heat_trajectory(o2, u2, nodes), rec);
        const auto cp = xt_components(P.traj, 0.4);
        const auto cq = xt_components(Q.traj, 0.4);
        for (double t : {0.1, 0.4}) {
            auto [fo, fu] = bilinear_F(P, Q, t);
            const double lhs = std::pow(t, 1.0 - 1.0 / p) * lp_norm_planar(fo, p);
            const double rhs = cp.omega_part * cq.omega_part + cp.swirl_part * cq.swirl_part;
            REQUIRE(rhs > 0.0);
            worst_A = std::max(worst_A, lhs / rhs);
        }
    }
    CHECK(std::isfinite(worst_A));
    CHECK(worst_A > 0.0);
}
