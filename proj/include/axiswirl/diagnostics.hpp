#pragma once

// Monitored quantities and inequality audits along trajectories:
//   - decay monitors L_p(t) = t^{1-1/p} ||omega||_{L^p(Omega)},
//     M_q(t) = t^{1/2-1/q} ||u^th||_{L^q(Omega)},
//     N_k(t) = t^{13/20-1/k} ||r^{-3/10} u^th||_{L^k(Omega)}
//   - the swirl maximum principle ||r u^th(t)||_{L^p} <= ||r u^th_0||_{L^p}
//   - derived unknowns eta = omega/r, V^eps = u^th/r^{1-eps}, U = u^th/r,
//     W = r^{-7/11} u^th
//   - the closed-form exponent set eps(p) = (-9p^2+21p-4)/(24p-2),
//     (2-eps) q = 3p, alpha(p0), and the weighted energy inequality and
//     smallness conditions built from them.
//
// Unless marked planar, norms here use the volumetric measure r dr dz.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "axiswirl/grid.hpp"
#include "axiswirl/mild_solver.hpp"

namespace axiswirl {

// --- derived fields -----------------------------------------------------------

struct DerivedFields {
    ScalarField eta;     // omega / r
    ScalarField v_eps;   // u^th / r^{1-eps}
    ScalarField u_over_r;
    ScalarField w;       // r^{-7/11} u^th
};

inline DerivedFields derived_fields(const SolverState& state, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("derived_fields: eps must lie in ]0,1[");
    DerivedFields d{weighted_field(state.omega, -1.0), weighted_field(state.swirl, eps - 1.0),
                    weighted_field(state.swirl, -1.0), weighted_field(state.swirl, -7.0 / 11.0)};
    d.eta.quantity = Quantity::Eta;
    d.v_eps.quantity = Quantity::VEps;
    d.u_over_r.quantity = Quantity::U;
    d.w.quantity = Quantity::W;
    return d;
}

// --- decay monitors -------------------------------------------------------------

struct DecayMonitor {
    std::vector<double> times;
    std::vector<double> p_list, q_list, kappa_list;
    // records[t][exponent index]
    std::vector<std::vector<double>> L, M, N;
    std::vector<double> L_sup, M_sup, N_sup;  // running suprema per exponent
};

inline DecayMonitor decay_monitors(const Trajectory& traj, const std::vector<double>& p_list,
                                   const std::vector<double>& q_list,
                                   const std::vector<double>& kappa_list) {
    for (double p : p_list)
        if (!(p >= 1.0)) throw std::domain_error("decay_monitors: p must lie in [1,inf]");
    for (double q : q_list)
        if (!(q >= 2.0)) throw std::domain_error("decay_monitors: q must lie in [2,inf]");
    for (double k : kappa_list)
        if (!(k >= 20.0 / 13.0 - 1e-12))
            throw std::domain_error("decay_monitors: kappa must lie in [20/13,inf]");

    DecayMonitor mon;
    mon.p_list = p_list;
    mon.q_list = q_list;
    mon.kappa_list = kappa_list;
    mon.L_sup.assign(p_list.size(), 0.0);
    mon.M_sup.assign(q_list.size(), 0.0);
    mon.N_sup.assign(kappa_list.size(), 0.0);
    for (const auto& s : traj.states) {
        if (s.t <= 0.0) continue;
        mon.times.push_back(s.t);
        std::vector<double> lrow, mrow, nrow;
        for (std::size_t i = 0; i < p_list.size(); ++i) {
            const double e = std::isinf(p_list[i]) ? 1.0 : 1.0 - 1.0 / p_list[i];
            lrow.push_back(std::pow(s.t, e) * lp_norm_planar(s.omega, p_list[i]));
            mon.L_sup[i] = std::max(mon.L_sup[i], lrow.back());
        }
        for (std::size_t i = 0; i < q_list.size(); ++i) {
            const double e = std::isinf(q_list[i]) ? 0.5 : 0.5 - 1.0 / q_list[i];
            mrow.push_back(std::pow(s.t, e) * lp_norm_planar(s.swirl, q_list[i]));
            mon.M_sup[i] = std::max(mon.M_sup[i], mrow.back());
        }
        const ScalarField wu = weighted_field(s.swirl, -0.3);
        for (std::size_t i = 0; i < kappa_list.size(); ++i) {
            const double e = std::isinf(kappa_list[i]) ? 0.65 : 0.65 - 1.0 / kappa_list[i];
            nrow.push_back(std::pow(s.t, e) * lp_norm_planar(wu, kappa_list[i]));
            mon.N_sup[i] = std::max(mon.N_sup[i], nrow.back());
        }
        mon.L.push_back(std::move(lrow));
        mon.M.push_back(std::move(mrow));
        mon.N.push_back(std::move(nrow));
    }
    return mon;
}

namespace detail {

// sup of a decay monitor over an exponent range [a, b] (log-spaced samples)
// and stored times up to T.
inline double monitor_range_sup(const Trajectory& traj, double T, char which, double a, double b,
                                int samples = 8) {
    double sup = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double e = static_cast<double>(k) / (samples - 1);
        const double p = a * std::pow(b / a, e);
        for (const auto& s : traj.states) {
            if (s.t <= 0.0 || s.t > T * (1 + 1e-12)) continue;
            double v = 0.0;
            if (which == 'L') {
                v = std::pow(s.t, 1.0 - 1.0 / p) * lp_norm_planar(s.omega, p);
            } else if (which == 'M') {
                v = std::pow(s.t, 0.5 - 1.0 / p) * lp_norm_planar(s.swirl, p);
            } else {
                v = std::pow(s.t, 0.65 - 1.0 / p) *
                    lp_norm_planar(weighted_field(s.swirl, -0.3), p);
            }
            sup = std::max(sup, v);
        }
    }
    return sup;
}

// monitor shorthand X + X^s: the linear part dominates for small X,
// the power for large X
inline double plus_power(double x, double s) { return x + std::pow(x, s); }

} // namespace detail

// --- swirl maximum principle ----------------------------------------------------

struct SwirlMaxReport {
    std::vector<double> p_list;
    std::vector<double> times;
    std::vector<std::vector<double>> ratios;  // per time, per p
    std::vector<double> max_ratio;            // per p
    bool vacuous = false;  // 0/0 sentinel: zero initial swirl
    bool violated = false;
    double slack = 1e-3;
};

inline SwirlMaxReport swirl_maximum_check(const Trajectory& traj, const std::vector<double>& p_list,
                                          double slack = 1e-3) {
    for (double p : p_list)
        if (!(p >= 2.0)) throw std::domain_error("swirl_maximum_check: p must lie in [2,inf]");
    SwirlMaxReport rep;
    rep.p_list = p_list;
    rep.slack = slack;
    rep.max_ratio.assign(p_list.size(), 0.0);
    if (traj.states.empty()) return rep;

    const ScalarField ru0 = weighted_field(traj.states.front().swirl, 1.0);
    std::vector<double> base;
    for (double p : p_list) base.push_back(lp_norm_volumetric(ru0, p));
    bool all_zero = true;
    for (double b : base) all_zero = all_zero && b == 0.0;
    if (all_zero) {
        rep.vacuous = true;
        return rep;
    }

    for (const auto& s : traj.states) {
        if (s.t <= 0.0) continue;
        rep.times.push_back(s.t);
        const ScalarField ru = weighted_field(s.swirl, 1.0);
        std::vector<double> row;
        for (std::size_t i = 0; i < p_list.size(); ++i) {
            const double r = base[i] > 0 ? lp_norm_volumetric(ru, p_list[i]) / base[i] : 0.0;
            row.push_back(r);
            rep.max_ratio[i] = std::max(rep.max_ratio[i], r);
            if (r > 1.0 + slack) rep.violated = true;
        }
        rep.ratios.push_back(std::move(row));
    }
    return rep;
}

// --- exponent algebra ------------------------------------------------------------

struct ExponentSet {
    double p = 0.0;
    double eps = 0.0;      // (-9p^2 + 21p - 4) / (24p - 2)
    double q = 0.0;        // 3p / (2 - eps)
    double q_alt = 0.0;    // 2(12p - 1) / (3(p + 3))
    double alpha_p = 0.0;  // 10(12p-1) / (9(p-1)(p+2)(p+3))
};

inline ExponentSet exponents_of_p(double p) {
    if (!(p > 1.0 && p <= 21.0 / 20.0 + 1e-15))
        throw std::domain_error("exponents_of_p: p must lie in ]1, 21/20]");
    ExponentSet e;
    e.p = p;
    e.eps = (-9.0 * p * p + 21.0 * p - 4.0) / (24.0 * p - 2.0);
    e.q = 3.0 * p / (2.0 - e.eps);
    e.q_alt = 2.0 * (12.0 * p - 1.0) / (3.0 * (p + 3.0));
    e.alpha_p = 10.0 * (12.0 * p - 1.0) / (9.0 * (p - 1.0) * (p + 2.0) * (p + 3.0));
    if (std::abs(e.q - e.q_alt) > 1e-12 * e.q)
        throw std::logic_error("exponents_of_p: closed forms for q disagree");
    return e;
}

// --- weighted energy inequality ---------------------------------------------------

struct EnergyReport {
    double p = 0.0, q = 0.0, eps = 0.0;
    double m0 = 0.0;  // ||V_0||_q^q + ||eta_0||_p^p
    std::vector<double> times;
    std::vector<double> energy;       // E(t)
    std::vector<double> lhs;          // E(t) + weighted cumulative dissipation
    std::vector<double> eta_norm;     // ||eta(t)||_p
    double max_lhs_over_2m0 = 0.0;
    bool pass = false;
    double slack = 0.01;
};

namespace detail {

// meridional |grad f|^2 with one-sided second-order stencils at the edges
inline ScalarField gradient_sq(const ScalarField& f) {
    const HalfPlaneGrid& g = f.grid;
    ScalarField out = make_field(g);
    auto diff = [](double fm, double f0, double fp, int pos, int n, double h) {
        if (pos == 0) return (-3.0 * f0 + 4.0 * fp - fm) / (2.0 * h);
        if (pos == n - 1) return (3.0 * f0 - 4.0 * fm + fp) / (2.0 * h);
        return (fp - fm) / (2.0 * h);
    };
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const int im = i == 0 ? 2 : i - 1;
            const int ip = i == g.nr - 1 ? g.nr - 3 : i + 1;
            const int jm = j == 0 ? 2 : j - 1;
            const int jp = j == g.nz - 1 ? g.nz - 3 : j + 1;
            const double gr = diff(f.at(im, j), f.at(i, j), f.at(ip, j), i, g.nr, g.dr);
            const double gz = diff(f.at(i, jm), f.at(i, j), f.at(i, jp), j, g.nz, g.dz);
            out.at(i, j) = gr * gr + gz * gz;
        }
    return out;
}

inline double integral_volumetric(const ScalarField& f) {
    double s = 0.0;
    for (int i = 0; i < f.grid.nr; ++i) {
        double row = 0.0;
        for (int j = 0; j < f.grid.nz; ++j) row += f.at(i, j);
        s += row * f.grid.r_nodes[i];
    }
    return s * f.grid.dr * f.grid.dz;
}

inline ScalarField abs_power(const ScalarField& f, double e) {
    ScalarField out = f;
    out.quantity = Quantity::Generic;
    for (double& v : out.values) v = std::pow(std::abs(v), e);
    return out;
}

} // namespace detail

inline EnergyReport energy_check(const Trajectory& traj, double p, double slack = 0.01) {
    const ExponentSet es = exponents_of_p(p);
    EnergyReport rep;
    rep.p = p;
    rep.q = es.q;
    rep.eps = es.eps;
    rep.slack = slack;
    if (traj.states.size() < 2) throw std::invalid_argument("energy_check: trajectory too short");

    std::vector<double> diss_eta, diss_v, diss_vr;
    for (const auto& s : traj.states) {
        const DerivedFields d = derived_fields(s, es.eps);
        const double e_eta = std::pow(lp_norm_volumetric(d.eta, p), p);
        const double e_v = std::pow(lp_norm_volumetric(d.v_eps, es.q), es.q);
        rep.times.push_back(s.t);
        rep.energy.push_back(e_eta + e_v);
        rep.eta_norm.push_back(std::pow(e_eta, 1.0 / p));
        diss_eta.push_back(detail::integral_volumetric(
            detail::gradient_sq(detail::abs_power(d.eta, 0.5 * p))));
        diss_v.push_back(detail::integral_volumetric(
            detail::gradient_sq(detail::abs_power(d.v_eps, 0.5 * es.q))));
        diss_vr.push_back(detail::integral_volumetric(
            weighted_field(detail::abs_power(d.v_eps, es.q), -2.0)));
    }
    rep.m0 = rep.energy.front();

    // density check: adjacent stored energies must not jump too much
    for (std::size_t i = 1; i < rep.energy.size(); ++i) {
        const double lo = std::min(rep.energy[i - 1], rep.energy[i]);
        const double hi = std::max(rep.energy[i - 1], rep.energy[i]);
        if (lo > 0 && hi / lo > 4.0)
            throw std::runtime_error(
                "energy_check: trajectory too sparse (adjacent energies differ by >4x; store at "
                "least twice as many nodes)");
    }

    double acc_eta = 0, acc_v = 0, acc_vr = 0;
    rep.lhs.push_back(rep.energy.front());
    for (std::size_t i = 1; i < rep.times.size(); ++i) {
        const double dt = rep.times[i] - rep.times[i - 1];
        acc_eta += 0.5 * dt * (diss_eta[i] + diss_eta[i - 1]);
        acc_v += 0.5 * dt * (diss_v[i] + diss_v[i - 1]);
        acc_vr += 0.5 * dt * (diss_vr[i] + diss_vr[i - 1]);
        rep.lhs.push_back(rep.energy[i] + 0.5 * (p - 1.0) * acc_eta + 0.5 * (acc_v + acc_vr));
    }
    for (double l : rep.lhs)
        rep.max_lhs_over_2m0 = std::max(rep.max_lhs_over_2m0, rep.m0 > 0 ? l / (2.0 * rep.m0) : 0.0);
    rep.pass = rep.max_lhs_over_2m0 <= 1.0 + slack;
    return rep;
}

// --- smallness report --------------------------------------------------------------

struct ConditionStatus {
    double lhs = 0.0;
    double threshold = 0.0;
    double margin = 0.0;  // lhs / threshold
    bool satisfied = false;
    bool evaluated = false;          // false when a trajectory was required but absent
    bool truncation_dominated = false;  // >1% of an exotic-norm integrand at the boundary
};

struct SmallnessReport {
    double p0 = 0.0, c0 = 0.0, A = 0.0, t0 = 0.0;
    double eps0 = 0.0, q0 = 0.0, alpha_p0 = 0.0;
    double m0 = 0.0;  // from the data
    double m1 = 0.0;  // from the trajectory at t0 (when available)
    // near_global: the almost-critical smallness gate on the data;
    // handoff:     sup-norm gate ensuring the state at t0 re-enters it;
    // w_step:      gate for the W-norm continuation (two parts);
    // w_step_data: data-only sufficient bound for the second w_step part;
    // u_step:      gate for the U-norm continuation.
    ConditionStatus near_global, handoff, w_step, w_step_data, u_step;
};

namespace detail {

inline double band_fraction_volumetric(const ScalarField& f, double power) {
    const HalfPlaneGrid& g = f.grid;
    double total = 0.0, outer = 0.0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double m = std::pow(std::abs(f.at(i, j)), power) * g.r_nodes[i];
            total += m;
            if (g.r_nodes[i] > 0.9 * g.r_max || std::abs(g.z_nodes[j]) > 0.9 * g.z_max) outer += m;
        }
    return total > 0 ? outer / total : 0.0;
}

inline const SolverState& state_nearest(const Trajectory& traj, double t) {
    const SolverState* best = &traj.states.front();
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.states) {
        const double d = std::abs(s.t - t);
        if (d < dist) {
            dist = d;
            best = &s;
        }
    }
    return *best;
}

} // namespace detail

// The near-global smallness gate alone (valid on the closed interval
// p in ]1, 21/20]): lhs, threshold c0 (p-1), and their ratio.
struct NearGlobalCondition {
    double m0 = 0.0;
    double lhs = 0.0;
    double threshold = 0.0;
    double margin = 0.0;
    bool satisfied = false;
};

inline NearGlobalCondition near_global_margin(const ScalarField& omega0, const ScalarField& u0, double p,
                                      double c0) {
    const ExponentSet es = exponents_of_p(p);
    NearGlobalCondition out;
    SolverState data{0.0, omega0, u0};
    const DerivedFields d0 = derived_fields(data, es.eps);
    out.m0 = std::pow(lp_norm_volumetric(d0.v_eps, es.q), es.q) +
             std::pow(lp_norm_volumetric(d0.eta, p), p);
    const ScalarField ru0 = weighted_field(u0, 1.0);
    const double exotic = 2.0 / (3.0 * (p - 1.0) * (p - 1.0));
    const double e1 = 3.0 * (p + 2.0) / (p * (3.0 * p + 11.0));
    const double e2 = 10.0 * (12.0 * p - 1.0) / (3.0 * p * (p + 3.0) * (3.0 * p + 11.0));
    const double e3 = (p - 1.0) / (4.0 * p);
    const double e4 = 1.0 / (6.0 * p);
    out.lhs = std::pow(2.0 * out.m0, e1) * std::pow(lp_norm_volumetric(ru0, es.alpha_p), e2) +
              std::pow(2.0 * out.m0, e3) * std::pow(lp_norm_volumetric(ru0, exotic), e4);
    out.threshold = c0 * (p - 1.0);
    out.margin = out.threshold > 0 ? out.lhs / out.threshold : 0.0;
    out.satisfied = out.margin <= 1.0;
    return out;
}

inline SmallnessReport smallness_report(const ScalarField& omega0, const ScalarField& u0, double p0,
                                        double c0, double A, double t0,
                                        const Trajectory* traj = nullptr) {
    if (!(A > 0)) throw std::domain_error("smallness_report: A must be positive");
    const double p_hi = std::min(1.0 + 1.0 / (10.0 * A), 21.0 / 20.0);
    if (!(p0 > 1.0 && p0 < p_hi))
        throw std::domain_error("smallness_report: p0 must lie in ]1, min(1+1/(10A), 21/20)[");
    if (!(c0 > 0) || !(t0 > 0)) throw std::domain_error("smallness_report: c0, t0 must be positive");

    const ExponentSet es = exponents_of_p(p0);
    SmallnessReport rep;
    rep.p0 = p0;
    rep.c0 = c0;
    rep.A = A;
    rep.t0 = t0;
    rep.eps0 = es.eps;
    rep.q0 = es.q;
    rep.alpha_p0 = es.alpha_p;

    SolverState data{0.0, omega0, u0};
    const DerivedFields d0 = derived_fields(data, es.eps);
    rep.m0 = std::pow(lp_norm_volumetric(d0.v_eps, es.q), es.q) +
             std::pow(lp_norm_volumetric(d0.eta, p0), p0);

    const ScalarField ru0 = weighted_field(u0, 1.0);
    const double ru_inf = lp_norm_volumetric(ru0, std::numeric_limits<double>::infinity());
    const double exotic1 = 2.0 / (3.0 * (p0 - 1.0) * (p0 - 1.0));
    const double ru_A = lp_norm_volumetric(ru0, A);

    const bool trunc_alpha = detail::band_fraction_volumetric(ru0, es.alpha_p) > 0.01;
    const bool trunc_exotic = detail::band_fraction_volumetric(ru0, exotic1) > 0.01;

    // the near-global gate is data-only:
    {
        const NearGlobalCondition ng = near_global_margin(omega0, u0, p0, c0);
        ConditionStatus& c = rep.near_global;
        c.lhs = ng.lhs;
        c.threshold = ng.threshold;
        c.margin = ng.margin;
        c.satisfied = ng.satisfied;
        c.evaluated = true;
        c.truncation_dominated = trunc_alpha || trunc_exotic;
    }
    // first part of the W-step gate is data-only: ||r u0||_inf^{1/6} <= c0
    {
        ConditionStatus& c = rep.w_step;
        c.lhs = std::pow(ru_inf, 1.0 / 6.0);
        c.threshold = c0;
        c.margin = c.lhs / c.threshold;
        c.evaluated = false;  // part (b) still needs the trajectory
    }

    if (traj && traj->states.size() >= 2) {
        const double T = 2.0 * t0;  // suprema window for the abbreviated monitors
        const double L = detail::monitor_range_sup(*traj, T, 'L', 1.0, 20.0 / 3.0);
        const double M2 = detail::monitor_range_sup(*traj, T, 'M', 2.0, 2.0, 2);
        const double N = detail::monitor_range_sup(*traj, T, 'N', 20.0 / 13.0, 20.0);

        const SolverState& st0 = detail::state_nearest(*traj, t0);
        const DerivedFields dt0 = derived_fields(st0, es.eps);
        rep.m1 = std::pow(lp_norm_volumetric(dt0.v_eps, es.q), es.q) +
                 std::pow(lp_norm_volumetric(dt0.eta, p0), p0);

        // hand-off gate
        {
            ConditionStatus& c = rep.handoff;
            const double denom = detail::plus_power(L, 6.0) + detail::plus_power(M2, 4.0) +
                                 detail::plus_power(N, 6.0);
            const double base = std::pow(t0, 1.5) * std::pow(ru_A, -A);
            const double t1e = (p0 - 1.0) * (p0 - 1.0) / (4.0 * p0);
            const double t1x = 12.0 * p0 / (2.0 - 3.0 * A * (p0 - 1.0) * (p0 - 1.0));
            const double t2e = 3.0 * (p0 - 1.0) * (p0 + 2.0) / (p0 * (3.0 * p0 + 11.0));
            const double t2x = 3.0 * p0 * (p0 + 3.0) * (3.0 * p0 + 11.0) /
                               (10.0 * (12.0 * p0 - 1.0) -
                                9.0 * A * (p0 - 1.0) * (p0 + 2.0) * (p0 + 3.0));
            const double t1 = std::pow((p0 - 1.0) * std::pow(base, t1e), t1x);
            const double t2 = std::pow((p0 - 1.0) * std::pow(base, t2e), t2x);
            c.lhs = ru_inf;
            c.threshold = c0 / denom * std::min(t1, t2);
            c.margin = c.threshold > 0 ? c.lhs / c.threshold : 0.0;
            c.satisfied = c.margin <= 1.0;
            c.evaluated = true;
            c.truncation_dominated = detail::band_fraction_volumetric(ru0, A) > 0.01;
        }
        // W-step gate, second part (needs the t0 state)
        {
            ConditionStatus& c = rep.w_step;
            const double margin_a = c.margin;
            const double exo = 11.0 * p0 / (30.0 * (p0 - 1.0));
            const double w_l2 = std::pow(lp_norm_volumetric(dt0.w, 11.0 / 6.0), 11.0 / 12.0);
            const double eta_p0 = lp_norm_volumetric(dt0.eta, p0);
            const double lhs_b = std::pow(lp_norm_volumetric(ru0, exo), 11.0 / 30.0) *
                                 std::pow(w_l2, 3.0 / p0 - 43.0 / 20.0) *
                                 std::pow(eta_p0, 7.0 * p0 / 8.0 - 0.5);
            const double margin_b = lhs_b / (c0 * (p0 - 1.0));
            if (margin_b > margin_a) {
                c.lhs = lhs_b;
                c.threshold = c0 * (p0 - 1.0);
                c.margin = margin_b;
            }
            c.satisfied = std::max(margin_a, margin_b) <= 1.0;
            c.evaluated = true;
            c.truncation_dominated = detail::band_fraction_volumetric(ru0, exo) > 0.01;
        }
        // data-only sufficient bound for the second W-step part
        {
            ConditionStatus& c = rep.w_step_data;
            const double denom = detail::plus_power(L, 6.0) + detail::plus_power(M2, 2.0) +
                                 detail::plus_power(N, 6.0);
            const double base = std::pow(t0, 21.0 / 16.0 * p0 - 0.75) * std::pow(ru_A, -A);
            const double expo = 240.0 * p0 / (300.0 - 127.0 * p0 - 240.0 * A * (p0 - 1.0));
            c.lhs = ru_inf;
            c.threshold = c0 / denom * std::pow((p0 - 1.0) * std::pow(base, (p0 - 1.0) / p0), expo);
            c.margin = c.threshold > 0 ? c.lhs / c.threshold : 0.0;
            c.satisfied = c.margin <= 1.0;
            c.evaluated = true;
        }
        // U-step gate
        {
            ConditionStatus& c = rep.u_step;
            const double denom = detail::plus_power(L, 20.0) + detail::plus_power(M2, 12.0) +
                                 detail::plus_power(N, 20.0);
            const double base = std::pow(t0, 21.0 / 16.0 * p0 - 0.75) * std::pow(ru_A, -A);
            const double expo = 5.0 * p0 / (p0 - 5.0 * A * (p0 - 1.0));
            c.lhs = ru_inf;
            c.threshold = c0 / denom * std::pow((p0 - 1.0) * std::pow(base, (p0 - 1.0) / p0), expo);
            c.margin = c.threshold > 0 ? c.lhs / c.threshold : 0.0;
            c.satisfied = c.margin <= 1.0;
            c.evaluated = true;
        }
    }
    return rep;
}

// --- corollary bound audits ----------------------------------------------------------

struct CorollaryAudit {
    std::vector<double> times;
    std::vector<double> lhs, rhs, ratio;
    double sup_ratio = 0.0;
    bool defined = false;  // false marks the 0/0 sentinel
};

// ||r^{-delta} u^th(t)||_{L^q1(Omega)} against the monitor/data combination.
inline CorollaryAudit corollary_swirl_audit(const Trajectory& traj, double delta, double gamma,
                                            double q1, double q2) {
    if (!(0.0 <= gamma && gamma <= delta && delta <= 1.0))
        throw std::domain_error("corollary_swirl_audit: need 0 <= gamma <= delta <= 1");
    if (!(1.0 <= q2 && q2 <= q1))
        throw std::domain_error("corollary_swirl_audit: need 1 <= q2 <= q1");
    CorollaryAudit a;
    if (traj.states.size() < 2) return a;
    const double T = traj.final_time();
    const double L = detail::monitor_range_sup(traj, T, 'L', 20.0 / 17.0, 2.0);
    const double N = detail::monitor_range_sup(traj, T, 'N', 20.0 / 13.0, 20.0);
    const double data_norm =
        lp_norm_planar(weighted_field(traj.states.front().swirl, -gamma), q2);
    const double iq1 = std::isinf(q1) ? 0.0 : 1.0 / q1;
    const double iq2 = std::isinf(q2) ? 0.0 : 1.0 / q2;
    for (const auto& s : traj.states) {
        if (s.t <= 0.0) continue;
        const double lhs = lp_norm_planar(weighted_field(s.swirl, -delta), q1);
        const double rhs = L * N / std::pow(s.t, 0.5 + 0.5 * delta - iq1) +
                           data_norm / std::pow(s.t, 0.5 * (delta - gamma) + iq2 - iq1);
        a.times.push_back(s.t);
        a.lhs.push_back(lhs);
        a.rhs.push_back(rhs);
        const double r = rhs > 0 ? lhs / rhs : 0.0;
        a.ratio.push_back(r);
        a.sup_ratio = std::max(a.sup_ratio, r);
        a.defined = a.defined || rhs > 0;
    }
    return a;
}

// ||r^{-delta} omega(t)||_{L^p(Omega)} against the monitor combination.
inline CorollaryAudit corollary_vorticity_audit(const Trajectory& traj, double delta, double p) {
    if (!(0.0 <= delta && delta <= 1.0))
        throw std::domain_error("corollary_vorticity_audit: need 0 <= delta <= 1");
    if (!(p >= 1.0)) throw std::domain_error("corollary_vorticity_audit: need p >= 1");
    CorollaryAudit a;
    if (traj.states.size() < 2) return a;
    const double T = traj.final_time();
    const double L = detail::monitor_range_sup(traj, T, 'L', 1.0, 20.0 / 3.0);
    const double M2 = detail::monitor_range_sup(traj, T, 'M', 2.0, 2.0, 2);
    const double N = detail::monitor_range_sup(traj, T, 'N', 20.0 / 13.0, 20.0);
    const double numer =
        detail::plus_power(L, 5.0) + detail::plus_power(M2, 3.0) + detail::plus_power(N, 5.0);
    const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
    for (const auto& s : traj.states) {
        if (s.t <= 0.0) continue;
        const double lhs = lp_norm_planar(weighted_field(s.omega, -delta), p);
        const double rhs = numer / std::pow(s.t, 1.0 + 0.5 * delta - ip);
        a.times.push_back(s.t);
        a.lhs.push_back(lhs);
        a.rhs.push_back(rhs);
        const double r = rhs > 0 ? lhs / rhs : 0.0;
        a.ratio.push_back(r);
        a.sup_ratio = std::max(a.sup_ratio, r);
        a.defined = a.defined || (rhs > 0 && lhs > 0);
    }
    return a;
}

} // namespace axiswirl
