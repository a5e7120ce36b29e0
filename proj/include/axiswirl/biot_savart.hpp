#pragma once

// Axisymmetric Biot-Savart law: the meridional velocity (u^r, u^z) is
// recovered from the azimuthal vorticity by integrating the explicit kernels
//
//   G_r = -(1/pi) (z-zb) r^{-3/2} rb^{-1/2} F'(xi^2)
//   G_z =  (1/pi) (r-rb) r^{-3/2} rb^{-1/2} F'(xi^2)
//         + (1/4pi) rb^{1/2} r^{-3/2} (F(xi^2) - 2 xi^2 F'(xi^2))
//
// with xi^2 = ((r-rb)^2 + (z-zb)^2) / (r rb). The cell containing the target
// is integrated by nested 2x2 subdivision that excludes the sub-cell touching
// the singular point (the kernel is integrable there, |G| ~ 1/distance).
//
// Two evaluation paths share the contract: a per-pair dense sum and a
// tabulated path that precomputes the kernel on the (r_i, r_k, dz offset)
// lattice once per grid and reuses it across reconstructions. Both use the
// same kernel values; they agree to rounding.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "axiswirl/grid.hpp"
#include "axiswirl/parallel.hpp"
#include "axiswirl/special_functions.hpp"

namespace axiswirl {

struct KernelSample {
    double Gr = 0.0, Gz = 0.0, xi2 = 0.0;
};

namespace detail {

// Kernel via the fast tabulated F, F' (used in quadrature loops).
inline KernelSample kernel_G_fast(double r, double z, double rb, double zb) {
    KernelSample k;
    const double dr = r - rb, dz = z - zb;
    k.xi2 = (dr * dr + dz * dz) / (r * rb);
    const double fp = fast_F_prime(k.xi2);
    const double f = fast_F(k.xi2);
    const double r32 = std::pow(r, 1.5);
    const double pref = 1.0 / (M_PI * r32 * std::sqrt(rb));
    k.Gr = -pref * dz * fp;
    k.Gz = pref * dr * fp + std::sqrt(rb) / (4.0 * M_PI * r32) * (f - 2.0 * k.xi2 * fp);
    return k;
}

} // namespace detail

inline KernelSample kernel_G(double r, double z, double rb, double zb) {
    if (!(r > 0) || !(rb > 0)) throw std::domain_error("kernel_G: radial coordinates must be positive");
    if (r == rb && z == zb) throw std::domain_error("kernel_G: coincident source and target");
    KernelSample k;
    const double dr = r - rb, dz = z - zb;
    k.xi2 = (dr * dr + dz * dz) / (r * rb);
    const double fp = eval_F_prime(k.xi2);
    const double f = eval_F(k.xi2);
    const double pref = 1.0 / (M_PI * std::pow(r, 1.5) * std::sqrt(rb));
    k.Gr = -pref * dz * fp;
    k.Gz = pref * dr * fp + std::sqrt(rb) / (4.0 * M_PI * std::pow(r, 1.5)) * (f - 2.0 * k.xi2 * fp);
    return k;
}

namespace detail {

// Self-cell contribution: 2x2 subdivision excluding the sub-cell containing
// the target, iterated twice; the innermost excluded patch is dropped.
inline void self_cell_sum(double r0, double z0, double rc, double zc, double hr, double hz,
                          int depth, double& gr, double& gz) {
    const bool contains =
        std::abs(r0 - rc) <= 0.5 * hr + 1e-14 * hr && std::abs(z0 - zc) <= 0.5 * hz + 1e-14 * hz;
    if (!contains) {
        const KernelSample k = kernel_G_fast(r0, z0, rc, zc);
        gr += k.Gr * hr * hz;
        gz += k.Gz * hr * hz;
        return;
    }
    if (depth >= 2) return;  // dropped innermost patch
    for (int a = -1; a <= 1; a += 2)
        for (int b = -1; b <= 1; b += 2)
            self_cell_sum(r0, z0, rc + 0.25 * a * hr, zc + 0.25 * b * hz, 0.5 * hr, 0.5 * hz,
                          depth + 1, gr, gz);
}

} // namespace detail

// Reusable reconstruction engine; building one precomputes the kernel table
// for the grid (skipped when the table would be oversized).
class VelocityReconstructor {
  public:
    explicit VelocityReconstructor(const HalfPlaneGrid& g, bool allow_table = true) : grid_(g) {
        const std::size_t entries =
            static_cast<std::size_t>(g.nr) * g.nr * (2 * static_cast<std::size_t>(g.nz) - 1);
        use_table_ = allow_table && entries * 2 * sizeof(double) <= (3ull << 30);
        if (!use_table_) return;
        gr_tab_.resize(entries);
        gz_tab_.resize(entries);
        const int noff = 2 * g.nz - 1;
        parallel_for(static_cast<std::size_t>(g.nr), [&](std::size_t ti) {
            const int i = static_cast<int>(ti);
            const double r = g.r_nodes[i];
            for (int k = 0; k < g.nr; ++k) {
                const double rb = g.r_nodes[k];
                const std::size_t base = (static_cast<std::size_t>(i) * g.nr + k) * noff;
                for (int m = 0; m < noff; ++m) {
                    const double dz = (m - (g.nz - 1)) * g.dz;
                    if (i == k && m == g.nz - 1) {
                        gr_tab_[base + m] = 0.0;  // self pair handled by subdivision
                        gz_tab_[base + m] = 0.0;
                        continue;
                    }
                    const KernelSample s = detail::kernel_G_fast(r, 0.0, rb, -dz);
                    gr_tab_[base + m] = s.Gr;
                    gz_tab_[base + m] = s.Gz;
                }
            }
        });
    }

    const HalfPlaneGrid& grid() const { return grid_; }
    bool tabulated() const { return use_table_; }

    VelocityField reconstruct(const ScalarField& omega) const {
        if (!omega.grid.same_shape(grid_)) throw std::invalid_argument("reconstruct: grid mismatch");
        VelocityField v = make_velocity(grid_);
        const HalfPlaneGrid& g = grid_;
        const double cell = g.dr * g.dz;
        const int noff = 2 * g.nz - 1;
        parallel_for(static_cast<std::size_t>(g.nr), [&](std::size_t ti) {
            const int i = static_cast<int>(ti);
            const double r = g.r_nodes[i];
            for (int j = 0; j < g.nz; ++j) {
                double ur = 0.0, uz = 0.0;
                for (int k = 0; k < g.nr; ++k) {
                    const double rb = g.r_nodes[k];
                    if (use_table_) {
                        const double* grow =
                            &gr_tab_[(static_cast<std::size_t>(i) * g.nr + k) * noff];
                        const double* gzrow =
                            &gz_tab_[(static_cast<std::size_t>(i) * g.nr + k) * noff];
                        const int mbase = j + g.nz - 1;
                        for (int l = 0; l < g.nz; ++l) {
                            const double w = omega.at(k, l);
                            ur += grow[mbase - l] * w;
                            uz += gzrow[mbase - l] * w;
                        }
                    } else {
                        for (int l = 0; l < g.nz; ++l) {
                            if (k == i && l == j) continue;
                            const KernelSample s =
                                detail::kernel_G_fast(r, g.z_nodes[j], rb, g.z_nodes[l]);
                            const double w = omega.at(k, l);
                            ur += s.Gr * w;
                            uz += s.Gz * w;
                        }
                    }
                }
                ur *= cell;
                uz *= cell;
                // desingularized self cell
                double sgr = 0.0, sgz = 0.0;
                detail::self_cell_sum(r, g.z_nodes[j], r, g.z_nodes[j], g.dr, g.dz, 0, sgr, sgz);
                ur += sgr * omega.at(i, j);
                uz += sgz * omega.at(i, j);
                v.ur[g.index(i, j)] = ur;
                v.uz[g.index(i, j)] = uz;
            }
        });
        return v;
    }

  private:
    HalfPlaneGrid grid_;
    bool use_table_ = false;
    std::vector<double> gr_tab_, gz_tab_;
};

enum class ReconstructPath { Auto, Dense, Tabulated };

inline VelocityField reconstruct_velocity(const ScalarField& omega,
                                          ReconstructPath path = ReconstructPath::Auto) {
    if (omega.quantity != Quantity::OmegaTheta && omega.quantity != Quantity::Generic)
        throw std::invalid_argument("reconstruct_velocity: field is not a vorticity");
    if (!all_finite(omega.values)) throw std::invalid_argument("reconstruct_velocity: non-finite input");
    const bool table = path != ReconstructPath::Dense;
    VelocityReconstructor rec(omega.grid, table);
    return rec.reconstruct(omega);
}

// --- u^r / r audit -----------------------------------------------------------

struct UrOverRAudit {
    double p = 0.0, q = 0.0, lambda = 0.0;
    double lhs = 0.0;          // || u^r / r ||_{L^q} (volumetric)
    double rhs_product = 0.0;  // ||eta||_{L^p}^lambda ||eta||_{L^{3p}}^{1-lambda}
    double ratio = 0.0;
    bool defined = false;  // false marks the 0/0 sentinel
};

inline UrOverRAudit ur_over_r_audit(const ScalarField& omega, double p, double q) {
    if (!(p > 1.0 && p < 3.0)) throw std::domain_error("ur_over_r_audit: p must lie in ]1,3[");
    const double q_lo = 3.0 * p / (3.0 - p);
    if (!(q > q_lo)) throw std::domain_error("ur_over_r_audit: q must exceed 3p/(3-p)");
    UrOverRAudit a;
    a.p = p;
    a.q = q;
    a.lambda = 0.5 * (p - 1.0) + (std::isinf(q) ? 0.0 : 1.5 * p / q);

    const VelocityField v = reconstruct_velocity(omega);
    ScalarField ur_over_r = make_field(omega.grid);
    for (int i = 0; i < omega.grid.nr; ++i)
        for (int j = 0; j < omega.grid.nz; ++j)
            ur_over_r.at(i, j) = v.ur[omega.grid.index(i, j)] / omega.grid.r_nodes[i];
    const ScalarField eta = weighted_field(omega, -1.0);

    a.lhs = lp_norm_volumetric(ur_over_r, q);
    const double np = lp_norm_volumetric(eta, p);
    const double n3p = lp_norm_volumetric(eta, 3.0 * p);
    a.rhs_product = std::pow(np, a.lambda) * std::pow(n3p, 1.0 - a.lambda);
    a.defined = a.rhs_product > 0.0;
    a.ratio = a.defined ? a.lhs / a.rhs_product : 0.0;
    return a;
}

} // namespace axiswirl
