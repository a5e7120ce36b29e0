#pragma once

// Reproducible initial data families: a vortex-ring-like Gaussian vorticity
// patch and a compact swirl profile, with amplitudes calibrated against the
// critical-norm bundle ||omega0||_L1 + ||u0||_L2 + ||r^{-3/10} u0||_L20/13.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "axiswirl/grid.hpp"

namespace axiswirl {

enum class SwirlProfile { Gaussian, CompactBump };

inline const char* to_string(SwirlProfile p) {
    return p == SwirlProfile::Gaussian ? "gaussian" : "compact_bump";
}

inline SwirlProfile swirl_profile_from_string(const std::string& s) {
    if (s == "gaussian") return SwirlProfile::Gaussian;
    if (s == "compact_bump") return SwirlProfile::CompactBump;
    throw std::invalid_argument("unknown swirl profile: " + s);
}

struct DataSpec {
    double r0 = 2.0, z0 = 0.0;
    double width = 0.25;
    double amp_omega = 1.0;
    double amp_swirl = 0.0;
    SwirlProfile swirl_profile = SwirlProfile::Gaussian;
};

inline void validate_data_spec(const DataSpec& spec, const HalfPlaneGrid& g) {
    if (!(spec.width > 0)) throw std::invalid_argument("data spec: width must be positive");
    if (!(spec.r0 > 3.0 * spec.width))
        throw std::invalid_argument("data spec: ring center must satisfy r0 > 3*width");
    if (!(spec.width > 2.0 * g.dr))
        throw std::invalid_argument("data spec: width unresolved (must exceed 2*dr)");
}

inline std::pair<ScalarField, ScalarField> make_data(const DataSpec& spec, const HalfPlaneGrid& g) {
    validate_data_spec(spec, g);
    ScalarField omega = make_field(g, Quantity::OmegaTheta);
    ScalarField swirl = make_field(g, Quantity::UTheta);
    const double w2 = spec.width * spec.width;
    // CompactBump support radius: 3*width keeps the bump inside r > 0.
    const double rcut = 3.0 * spec.width;
    for (int i = 0; i < g.nr; ++i) {
        const double dr0 = g.r_nodes[i] - spec.r0;
        for (int j = 0; j < g.nz; ++j) {
            const double dz0 = g.z_nodes[j] - spec.z0;
            const double rho2 = dr0 * dr0 + dz0 * dz0;
            omega.at(i, j) = spec.amp_omega * std::exp(-rho2 / w2);
            if (spec.swirl_profile == SwirlProfile::Gaussian) {
                swirl.at(i, j) = spec.amp_swirl * std::exp(-rho2 / w2);
            } else {
                const double q = rho2 / (rcut * rcut);
                swirl.at(i, j) = q < 1.0 ? spec.amp_swirl * std::pow(1.0 - q, 3) : 0.0;
            }
        }
    }
    return {std::move(omega), std::move(swirl)};
}

// The critical-norm bundle of the data.
inline double critical_bundle(const ScalarField& omega0, const ScalarField& u0) {
    return lp_norm_planar(omega0, 1.0) + lp_norm_planar(u0, 2.0) +
           lp_norm_planar(weighted_field(u0, -0.3), 20.0 / 13.0);
}

// Scales both amplitudes by a common factor so the critical bundle matches
// the target (bisection; the bundle is 1-homogeneous in the common factor).
inline DataSpec calibrate_smallness(const DataSpec& spec, const HalfPlaneGrid& g, double target) {
    if (!(target > 0)) throw std::invalid_argument("calibrate_smallness: target must be positive");
    auto bundle_at = [&](double scale) {
        DataSpec s = spec;
        s.amp_omega *= scale;
        s.amp_swirl *= scale;
        auto [o, u] = make_data(s, g);
        return critical_bundle(o, u);
    };
    const double base = bundle_at(1.0);
    if (!(base > 0))
        throw std::invalid_argument("calibrate_smallness: zero-amplitude data cannot reach a positive target");
    double lo = 0.0, hi = target / base;
    while (bundle_at(hi) < target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double b = bundle_at(mid);
        if (std::abs(b - target) <= 1e-6 * target) {
            lo = hi = mid;
            break;
        }
        (b < target ? lo : hi) = mid;
    }
    DataSpec out = spec;
    const double scale = 0.5 * (lo + hi);
    out.amp_omega *= scale;
    out.amp_swirl *= scale;
    return out;
}

} // namespace axiswirl
