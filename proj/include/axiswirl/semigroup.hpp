#pragma once

// Solution operator S(t) of the linearized azimuthal-vorticity equation with
// Dirichlet condition at r = 0:
//
//   (S(t) g)(r,z) = 1/(4 pi t) int sqrt(rb/r) H(t/(r rb))
//                     exp(-((r-rb)^2+(z-zb)^2)/4t) g(rb,zb) drb dzb
//
// The kernel is exactly (Gaussian in z) x (r-coupled factor), so the fast
// path convolves in z and does dense quadrature in r: O(nr^2 nz + nr nz^2)
// instead of O(N^2).
//
// Quadrature model: per source cell the field is reconstructed quadratically
// from its node samples and integrated against exact Gaussian cell moments
// (erf/exp closed forms). This keeps S(t) an approximate identity even when
// sqrt(t) drops below the cell size and makes the discrete operators compose
// to ~1e-7, versus ~1e-4 for plain midpoint sampling.
//
// S(t) div_* f uses the integrated-by-parts kernels
//   A_r = (t/(r rb^2)) H'(t/(r rb)) - (1/(2 rb) + (r-rb)/(2t)) H(t/(r rb))
//   A_z = -((z-zb)/(2t)) H(t/(r rb))
// so no numerical derivative of f is ever taken; the (r-rb)/(2t) and
// (z-zb)/(2t) pieces times the Gaussian are handled by the derivative-kernel
// moments below.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "axiswirl/grid.hpp"
#include "axiswirl/parallel.hpp"
#include "axiswirl/special_functions.hpp"

namespace axiswirl {

namespace detail {

// Exact moments over one cell [c-h/2, c+h/2] for a target at x0 = c + a:
//   p_k = int (x-c)^k exp(-(x0-x)^2/4t) dx,          k = 0,1,2
//   d_k = int (x-c)^k (-(x0-x)/2t) exp(-(x0-x)^2/4t) dx
struct GaussCellMoments {
    double p0 = 0, p1 = 0, p2 = 0;
    double d0 = 0, d1 = 0, d2 = 0;
};

inline GaussCellMoments gauss_cell_moments(double a, double h, double t) {
    GaussCellMoments m;
    const double lo = -0.5 * h - a;  // lo - x0
    const double hi = 0.5 * h - a;   // hi - x0
    const double s = 2.0 * std::sqrt(t);
    const double e_lo = std::exp(-lo * lo / (4 * t));
    const double e_hi = std::exp(-hi * hi / (4 * t));
    m.p0 = std::sqrt(M_PI * t) * (std::erf(hi / s) - std::erf(lo / s));
    const double i1 = -2 * t * (e_hi - e_lo);             // int (x-x0) e
    const double i2 = -2 * t * (hi * e_hi - lo * e_lo) + 2 * t * m.p0;  // int (x-x0)^2 e
    const double i3 = -2 * t * (hi * hi * e_hi - lo * lo * e_lo) + 4 * t * i1;  // int (x-x0)^3 e
    m.p1 = i1 + a * m.p0;
    m.p2 = i2 + 2 * a * i1 + a * a * m.p0;
    m.d0 = i1 / (2 * t);
    m.d1 = (i2 + a * i1) / (2 * t);
    m.d2 = (i3 + 2 * a * i2 + a * a * i1) / (2 * t);
    return m;
}



// Effective z kernels: regrouping of the quadratic reconstruction
//   int_cell psi(x) K(x) dx ~= psi_l P0 + psi'_l P1 + psi''_l/2 P2
// with central differences of psi, collected per sample in offset space
// (offset m = j - l, so the neighbor shift flips sign).
inline void z_effective_kernels(const HalfPlaneGrid& g, double t, std::vector<double>& plain,
                                std::vector<double>& deriv) {
    const int noff = 2 * g.nz - 1;
    std::vector<GaussCellMoments> mom(noff);
    const double reach = 13.0 * std::sqrt(2.0 * t) + 2.5 * g.dz;
    for (int m = 0; m < noff; ++m) {
        const double a = (m - (g.nz - 1)) * g.dz;  // x0 - c
        if (std::abs(a) > reach) continue;          // erf saturated, moments ~ 0
        mom[m] = gauss_cell_moments(a, g.dz, t);
    }
    plain.assign(noff, 0.0);
    deriv.assign(noff, 0.0);
    auto at = [&](int m) -> const GaussCellMoments& {
        static const GaussCellMoments zero{};
        return (m < 0 || m >= noff) ? zero : mom[m];
    };
    const double h = g.dz;
    for (int m = 0; m < noff; ++m) {
        plain[m] = at(m).p0 + (at(m + 1).p1 - at(m - 1).p1) / (2 * h) +
                   (at(m + 1).p2 - 2 * at(m).p2 + at(m - 1).p2) / (2 * h * h);
        deriv[m] = at(m).d0 + (at(m + 1).d1 - at(m - 1).d1) / (2 * h) +
                   (at(m + 1).d2 - 2 * at(m).d2 + at(m - 1).d2) / (2 * h * h);
    }
}

// r-direction weight rows. For each target r the radial integrand is
// phi(rb) * field(rb) * Gauss(rb); the field is reconstructed quadratically
// from its node samples while phi is the analytic kernel factor. Away from
// the axis phi is absorbed into the sample product (psi = phi * field) and
// reconstructed with it; in the first cells phi varies too fast for the
// 3-node model (H(t/(r rb)) transitions and sqrt(rb) vanishes), so there phi
// is evaluated on sub-cells while the field keeps its node model. Both paths
// accumulate coefficients of the field samples, so downstream code sees one
// weight row per target.
//
// RowAccum: out(i,j) = sum_k row[k] * C(k,j), C = z-correlated field.
struct RadialRows {
    std::vector<double> plain;  // multiplies the z-mass correlation
    std::vector<double> deriv;  // multiplies the z-derivative correlation (div form)
};

inline constexpr int kAxisZoneCells = 3;
inline constexpr int kAxisSubCells = 24;

// phi_plain: factor against the plain Gaussian; phi_deriv: factor against the
// derivative kernel (zero when unused).
template <class PhiPlain, class PhiDeriv>
RadialRows radial_weight_rows(const HalfPlaneGrid& g, double t, double r_target,
                              const PhiPlain& phi_plain, const PhiDeriv& phi_deriv,
                              bool want_deriv) {
    const int nr = g.nr;
    RadialRows rows;
    rows.plain.assign(nr, 0.0);
    rows.deriv.assign(nr, 0.0);
    const double h = g.dr;
    const double reach = 13.0 * std::sqrt(2.0 * t) + 2.5 * h;

    auto add = [&](std::vector<double>& row, int k, double v) {
        if (k >= 0 && k < nr) row[k] += v;
    };

    for (int k = 0; k < nr; ++k) {
        const double rc = g.r_nodes[k];
        if (std::abs(r_target - rc) > reach) continue;
        if (k >= kAxisZoneCells) {
            // psi-model: moments of this cell weighted by phi at the
            // neighboring samples (quadratic model of phi * field).
            const GaussCellMoments m = gauss_cell_moments(r_target - rc, h, t);
            add(rows.plain, k, phi_plain(rc) * m.p0);
            add(rows.plain, k + 1, phi_plain(g.r_nodes[std::min(k + 1, nr - 1)]) *
                                       (m.p1 / (2 * h) + m.p2 / (2 * h * h)));
            add(rows.plain, k - 1, phi_plain(g.r_nodes[std::max(k - 1, 0)]) *
                                       (-m.p1 / (2 * h) + m.p2 / (2 * h * h)));
            add(rows.plain, k, -phi_plain(rc) * m.p2 / (h * h));
            if (want_deriv) {
                add(rows.deriv, k, phi_deriv(rc) * m.d0);
                add(rows.deriv, k + 1, phi_deriv(g.r_nodes[std::min(k + 1, nr - 1)]) *
                                           (m.d1 / (2 * h) + m.d2 / (2 * h * h)));
                add(rows.deriv, k - 1, phi_deriv(g.r_nodes[std::max(k - 1, 0)]) *
                                           (-m.d1 / (2 * h) + m.d2 / (2 * h * h)));
                add(rows.deriv, k, -phi_deriv(rc) * m.d2 / (h * h));
            }
        } else {
            // axis zone: phi sampled on sub-cells, field keeps the quadratic
            // node model around rc.
            double A0 = 0, A1 = 0, A2 = 0, B0 = 0, B1 = 0, B2 = 0;
            const double hs = h / kAxisSubCells;
            for (int q = 0; q < kAxisSubCells; ++q) {
                const double rcs = rc - 0.5 * h + (q + 0.5) * hs;
                const double off = rcs - rc;
                const GaussCellMoments ms = gauss_cell_moments(r_target - rcs, hs, t);
                // shift moments from the sub-cell center to the parent center
                const double p1k = ms.p1 + off * ms.p0;
                const double p2k = ms.p2 + 2 * off * ms.p1 + off * off * ms.p0;
                const double fp = phi_plain(rcs);
                A0 += fp * ms.p0;
                A1 += fp * p1k;
                A2 += fp * p2k;
                if (want_deriv) {
                    const double d1k = ms.d1 + off * ms.d0;
                    const double d2k = ms.d2 + 2 * off * ms.d1 + off * off * ms.d0;
                    const double fd = phi_deriv(rcs);
                    B0 += fd * ms.d0;
                    B1 += fd * d1k;
                    B2 += fd * d2k;
                }
            }
            add(rows.plain, k, A0 - A2 / (h * h));
            add(rows.plain, k + 1, A1 / (2 * h) + A2 / (2 * h * h));
            add(rows.plain, k - 1, -A1 / (2 * h) + A2 / (2 * h * h));
            if (want_deriv) {
                add(rows.deriv, k, B0 - B2 / (h * h));
                add(rows.deriv, k + 1, B1 / (2 * h) + B2 / (2 * h * h));
                add(rows.deriv, k - 1, -B1 / (2 * h) + B2 / (2 * h * h));
            }
        }
    }
    return rows;
}

} // namespace detail

enum class SemigroupPath { Fast, Dense };

inline ScalarField apply_S(double t, const ScalarField& g, SemigroupPath path = SemigroupPath::Fast) {
    if (!(t > 0)) throw std::domain_error("apply_S: t must be positive");
    const HalfPlaneGrid& gr = g.grid;
    ScalarField out = make_field(gr, g.quantity);

    std::vector<double> ize, dze;
    detail::z_effective_kernels(gr, t, ize, dze);

    // r weights: phi = sqrt(rb/r) H(t/(r rb)) against the plain Gaussian
    std::vector<double> w(static_cast<std::size_t>(gr.nr) * gr.nr);
    parallel_for(static_cast<std::size_t>(gr.nr), [&](std::size_t ti) {
        const int i = static_cast<int>(ti);
        const double r = gr.r_nodes[i];
        auto phi = [&](double rb) { return std::sqrt(rb / r) * fast_H(t / (r * rb)); };
        auto none = [](double) { return 0.0; };
        const auto rows = detail::radial_weight_rows(gr, t, r, phi, none, false);
        for (int k = 0; k < gr.nr; ++k) w[ti * gr.nr + k] = rows.plain[k] / (4.0 * M_PI * t);
    });

    if (path == SemigroupPath::Fast) {
        std::vector<double> corr(gr.size());
        parallel_for(static_cast<std::size_t>(gr.nr), [&](std::size_t k) {
            for (int j = 0; j < gr.nz; ++j) {
                double acc = 0.0;
                const int mbase = j + gr.nz - 1;
                for (int l = 0; l < gr.nz; ++l) acc += ize[mbase - l] * g.values[k * gr.nz + l];
                corr[k * gr.nz + j] = acc;
            }
        });
        parallel_for(static_cast<std::size_t>(gr.nr), [&](std::size_t ti) {
            const int i = static_cast<int>(ti);
            for (int j = 0; j < gr.nz; ++j) {
                double acc = 0.0;
                for (int k = 0; k < gr.nr; ++k)
                    acc += w[ti * gr.nr + k] * corr[static_cast<std::size_t>(k) * gr.nz + j];
                out.at(i, j) = acc;
            }
        });
    } else {
        parallel_for(static_cast<std::size_t>(gr.nr), [&](std::size_t ti) {
            const int i = static_cast<int>(ti);
            for (int j = 0; j < gr.nz; ++j) {
                double acc = 0.0;
                for (int k = 0; k < gr.nr; ++k) {
                    double zacc = 0.0;
                    const int mbase = j + gr.nz - 1;
                    for (int l = 0; l < gr.nz; ++l) zacc += ize[mbase - l] * g.at(k, l);
                    acc += w[ti * gr.nr + k] * zacc;
                }
                out.at(i, j) = acc;
            }
        });
    }
    return out;
}

inline ScalarField apply_S_div(double t, const VelocityField& f) {
    if (!(t > 0)) throw std::domain_error("apply_S_div: t must be positive");
    const HalfPlaneGrid& gr = f.grid;
    ScalarField out = make_field(gr);

    std::vector<double> ize, dze;
    detail::z_effective_kernels(gr, t, ize, dze);

    // wr multiplies the z-mass correlation of f^r, wz the z-derivative
    // correlation of f^z.
    std::vector<double> wr(static_cast<std::size_t>(gr.nr) * gr.nr);
    std::vector<double> wz(static_cast<std::size_t>(gr.nr) * gr.nr);
    parallel_for(static_cast<std::size_t>(gr.nr), [&](std::size_t ti) {
        const int i = static_cast<int>(ti);
        const double r = gr.r_nodes[i];
        auto phi_smooth = [&](double rb) {
            const double tau = t / (r * rb);
            return std::sqrt(rb / r) *
                   ((t / (r * rb * rb)) * fast_H_prime(tau) - fast_H(tau) / (2.0 * rb));
        };
        auto phi_h = [&](double rb) { return std::sqrt(rb / r) * fast_H(t / (r * rb)); };
        auto none = [](double) { return 0.0; };
        // A_r: smooth part against the plain Gaussian plus H against the
        // derivative kernel; A_z: H against the plain Gaussian (the
        // z-derivative lives in the z correlation).
        const auto rows_a = detail::radial_weight_rows(gr, t, r, phi_smooth, phi_h, true);
        const auto rows_b = detail::radial_weight_rows(gr, t, r, phi_h, none, false);
        for (int k = 0; k < gr.nr; ++k) {
            wr[ti * gr.nr + k] = (rows_a.plain[k] + rows_a.deriv[k]) / (4.0 * M_PI * t);
            wz[ti * gr.nr + k] = rows_b.plain[k] / (4.0 * M_PI * t);
        }
    });

    std::vector<double> corr_r(gr.size()), corr_z(gr.size());
    parallel_for(static_cast<std::size_t>(gr.nr), [&](std::size_t k) {
        for (int j = 0; j < gr.nz; ++j) {
            double ar = 0.0, az = 0.0;
            const int mbase = j + gr.nz - 1;
            for (int l = 0; l < gr.nz; ++l) {
                ar += ize[mbase - l] * f.ur[k * gr.nz + l];
                az += dze[mbase - l] * f.uz[k * gr.nz + l];
            }
            corr_r[k * gr.nz + j] = ar;
            corr_z[k * gr.nz + j] = az;
        }
    });
    parallel_for(static_cast<std::size_t>(gr.nr), [&](std::size_t ti) {
        const int i = static_cast<int>(ti);
        for (int j = 0; j < gr.nz; ++j) {
            double acc = 0.0;
            for (int k = 0; k < gr.nr; ++k)
                acc += wr[ti * gr.nr + k] * corr_r[static_cast<std::size_t>(k) * gr.nz + j] +
                       wz[ti * gr.nr + k] * corr_z[static_cast<std::size_t>(k) * gr.nz + j];
            out.at(i, j) = acc;
        }
    });
    return out;
}

// r^alpha S(t) (r^{beta-1} g) inside the admissible cone.
inline ScalarField apply_S_weighted(double t, double alpha, double beta, const ScalarField& g) {
    if (!(alpha + beta <= 1.0 + 1e-12) || !(alpha >= -1.0 - 1e-12) || !(beta >= -1.0 - 1e-12))
        throw std::domain_error("apply_S_weighted: (alpha,beta) outside the admissible cone");
    return weighted_field(apply_S(t, weighted_field(g, beta - 1.0)), alpha);
}

// --- operator-decay fits -------------------------------------------------------

struct DecayKind {
    enum Type { Plain, Div, Weighted } type = Plain;
    double alpha = 0.0, beta = 0.0;

    static DecayKind plain() { return {Plain, 0.0, 0.0}; }
    static DecayKind divergence() { return {Div, 0.0, 0.0}; }
    static DecayKind weighted(double a, double b) { return {Weighted, a, b}; }

    std::string name() const {
        switch (type) {
            case Plain: return "plain";
            case Div: return "div";
            case Weighted: return "weighted";
        }
        return "?";
    }

    double slope_target(double p, double q) const {
        const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
        const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
        switch (type) {
            case Plain: return -(ip - iq);
            case Div: return -(0.5 + ip - iq);
            case Weighted: return -(0.5 - 0.5 * (alpha + beta) + ip - iq);
        }
        return 0.0;
    }
};

struct DecayFit {
    double p = 0.0, q = 0.0;
    DecayKind kind;
    std::vector<double> times, norms;
    double slope = 0.0;
    double slope_target = 0.0;
    double residual = 0.0;
    bool underflow_dropped = false;
};

namespace detail {

inline void decay_fit_finish(DecayFit& fit) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < fit.times.size(); ++i) {
        if (fit.norms[i] < 1e-14) {
            fit.underflow_dropped = true;
            continue;
        }
        const double x = std::log(fit.times[i]), y = std::log(fit.norms[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::runtime_error("measure_operator_decay: fewer than 2 usable points");
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - fit.slope * sx) / n;
    for (std::size_t i = 0; i < fit.times.size(); ++i) {
        if (fit.norms[i] < 1e-14) continue;
        const double pred = intercept + fit.slope * std::log(fit.times[i]);
        fit.residual = std::max(fit.residual, std::abs(pred - std::log(fit.norms[i])));
    }
}

} // namespace detail

inline DecayFit measure_operator_decay(const DecayKind& kind, double p, double q,
                                       const ScalarField& g, const std::vector<double>& times) {
    if (kind.type == DecayKind::Div)
        throw std::invalid_argument("measure_operator_decay: div kind takes a VelocityField");
    DecayFit fit;
    fit.p = p;
    fit.q = q;
    fit.kind = kind;
    fit.slope_target = kind.slope_target(p, q);
    for (double t : times) {
        const ScalarField img = kind.type == DecayKind::Plain
                                    ? apply_S(t, g)
                                    : apply_S_weighted(t, kind.alpha, kind.beta, g);
        fit.times.push_back(t);
        fit.norms.push_back(lp_norm_planar(img, q));
    }
    detail::decay_fit_finish(fit);
    return fit;
}

inline DecayFit measure_operator_decay(const DecayKind& kind, double p, double q,
                                       const VelocityField& f, const std::vector<double>& times) {
    if (kind.type != DecayKind::Div)
        throw std::invalid_argument("measure_operator_decay: VelocityField input is for the div kind");
    DecayFit fit;
    fit.p = p;
    fit.q = q;
    fit.kind = kind;
    fit.slope_target = kind.slope_target(p, q);
    for (double t : times) {
        const ScalarField img = apply_S_div(t, f);
        fit.times.push_back(t);
        fit.norms.push_back(lp_norm_planar(img, q));
    }
    detail::decay_fit_finish(fit);
    return fit;
}

inline std::vector<double> dyadic_times(double lo, double hi) {
    std::vector<double> ts;
    for (double t = lo; t <= hi * (1 + 1e-12); t *= 2.0) ts.push_back(t);
    return ts;
}

// Radial power-law profile min(w^{-2/p}, rho^{-2/p}) truncated at rho = outer,
// centered at (r0, z0). Saturates the L^p -> L^q operator decay across the
// fit window, which a fixed smooth bump cannot do for p > 1.
inline ScalarField make_power_profile(const HalfPlaneGrid& g, double r0, double z0, double p,
                                      double inner, double outer) {
    ScalarField f = make_field(g);
    const double expo = -2.0 / p;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double rho = std::hypot(g.r_nodes[i] - r0, g.z_nodes[j] - z0);
            if (rho > outer) continue;
            f.at(i, j) = std::pow(std::max(rho, inner), expo);
        }
    return f;
}

} // namespace axiswirl
