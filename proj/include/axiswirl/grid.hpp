#pragma once

// Discretization of the half-plane {r > 0, z in R}, truncated to
// (0, r_max] x [-z_max, z_max]. Nodes are half-cell offset: r_i = (i+1/2) dr,
// so r = 0 is never sampled and every r^kappa weight stays finite. All norms
// are midpoint quadratures; the planar norm uses the measure dr dz and the
// volumetric norm uses r dr dz (no 2*pi factor).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace axiswirl {

struct HalfPlaneGrid {
    int nr = 0, nz = 0;
    double dr = 0.0, dz = 0.0;
    double r_max = 0.0, z_max = 0.0;
    std::vector<double> r_nodes, z_nodes;

    std::size_t size() const { return static_cast<std::size_t>(nr) * nz; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nz + j; }

    bool same_shape(const HalfPlaneGrid& o) const {
        return nr == o.nr && nz == o.nz && r_max == o.r_max && z_max == o.z_max;
    }
};

inline HalfPlaneGrid build_grid(int nr, int nz, double r_max, double z_max) {
    if (nr < 1 || nz < 1) throw std::invalid_argument("build_grid: grid dimensions must be positive");
    if (!(r_max > 0) || !(z_max > 0)) throw std::invalid_argument("build_grid: truncation radii must be positive");
    HalfPlaneGrid g;
    g.nr = nr;
    g.nz = nz;
    g.r_max = r_max;
    g.z_max = z_max;
    g.dr = r_max / nr;
    g.dz = 2.0 * z_max / nz;
    g.r_nodes.resize(nr);
    g.z_nodes.resize(nz);
    for (int i = 0; i < nr; ++i) g.r_nodes[i] = (i + 0.5) * g.dr;
    for (int j = 0; j < nz; ++j) g.z_nodes[j] = -z_max + (j + 0.5) * g.dz;
    return g;
}

enum class Quantity { OmegaTheta, UTheta, Eta, VEps, U, W, Generic };

inline const char* to_string(Quantity q) {
    switch (q) {
        case Quantity::OmegaTheta: return "omega_theta";
        case Quantity::UTheta: return "u_theta";
        case Quantity::Eta: return "eta";
        case Quantity::VEps: return "V_eps";
        case Quantity::U: return "U";
        case Quantity::W: return "W";
        case Quantity::Generic: return "generic";
    }
    return "generic";
}

inline Quantity quantity_from_string(const std::string& s) {
    if (s == "omega_theta") return Quantity::OmegaTheta;
    if (s == "u_theta") return Quantity::UTheta;
    if (s == "eta") return Quantity::Eta;
    if (s == "V_eps") return Quantity::VEps;
    if (s == "U") return Quantity::U;
    if (s == "W") return Quantity::W;
    if (s == "generic") return Quantity::Generic;
    throw std::invalid_argument("unknown quantity tag: " + s);
}

struct ScalarField {
    HalfPlaneGrid grid;
    std::vector<double> values;
    Quantity quantity = Quantity::Generic;

    double& at(int i, int j) { return values[grid.index(i, j)]; }
    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

inline ScalarField make_field(const HalfPlaneGrid& g, Quantity q = Quantity::Generic) {
    ScalarField f;
    f.grid = g;
    f.values.assign(g.size(), 0.0);
    f.quantity = q;
    return f;
}

struct VelocityField {
    HalfPlaneGrid grid;
    std::vector<double> ur, uz;
};

inline VelocityField make_velocity(const HalfPlaneGrid& g) {
    VelocityField v;
    v.grid = g;
    v.ur.assign(g.size(), 0.0);
    v.uz.assign(g.size(), 0.0);
    return v;
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// --- field algebra -----------------------------------------------------------

inline ScalarField scaled(const ScalarField& f, double c) {
    ScalarField out = f;
    for (double& v : out.values) v *= c;
    return out;
}

inline ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g) {
    if (!f.grid.same_shape(g.grid)) throw std::invalid_argument("linear_combination: grid mismatch");
    ScalarField out = f;
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = a * f.values[k] + b * g.values[k];
    return out;
}

inline ScalarField pointwise_product(const ScalarField& f, const ScalarField& g) {
    if (!f.grid.same_shape(g.grid)) throw std::invalid_argument("pointwise_product: grid mismatch");
    ScalarField out = f;
    out.quantity = Quantity::Generic;
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = f.values[k] * g.values[k];
    return out;
}

// --- norms -------------------------------------------------------------------

namespace detail {

// Accumulates (sum_k w_k |v_k|^p)^{1/p} in log space so exotic exponents
// (p of order several hundred) cannot overflow.
inline double lp_accumulate(const std::vector<double>& vals, const std::vector<double>& logw,
                            double p) {
    double m = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(vals.size());
    for (std::size_t k = 0; k < vals.size(); ++k) {
        const double a = std::abs(vals[k]);
        if (a == 0.0) continue;
        const double t = p * std::log(a) + logw[k];
        terms.push_back(t);
        if (t > m) m = t;
    }
    if (terms.empty()) return 0.0;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return std::exp((m + std::log(s)) / p);
}

} // namespace detail

inline double lp_norm_planar(const ScalarField& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw std::domain_error("lp_norm_planar: p must be >= 1 or infinity");
    const double cellw = f.grid.dr * f.grid.dz;
    if (p <= 32.0) {
        double s = 0.0;
        for (double v : f.values) s += std::pow(std::abs(v), p);
        return std::pow(s * cellw, 1.0 / p);
    }
    std::vector<double> logw(f.values.size(), std::log(cellw));
    return detail::lp_accumulate(f.values, logw, p);
}

inline double lp_norm_volumetric(const ScalarField& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw std::domain_error("lp_norm_volumetric: p must be >= 1 or infinity");
    const double cellw = f.grid.dr * f.grid.dz;
    if (p <= 32.0) {
        double s = 0.0;
        for (int i = 0; i < f.grid.nr; ++i) {
            double row = 0.0;
            for (int j = 0; j < f.grid.nz; ++j) row += std::pow(std::abs(f.at(i, j)), p);
            s += row * f.grid.r_nodes[i];
        }
        return std::pow(s * cellw, 1.0 / p);
    }
    std::vector<double> logw(f.values.size());
    for (int i = 0; i < f.grid.nr; ++i)
        for (int j = 0; j < f.grid.nz; ++j)
            logw[f.grid.index(i, j)] = std::log(cellw * f.grid.r_nodes[i]);
    return detail::lp_accumulate(f.values, logw, p);
}

// --- r^kappa weights ---------------------------------------------------------

inline ScalarField weighted_field(const ScalarField& f, double kappa) {
    if (!std::isfinite(kappa)) throw std::invalid_argument("weighted_field: weight exponent must be finite");
    ScalarField out = f;
    out.quantity = Quantity::Generic;
    for (int i = 0; i < f.grid.nr; ++i) {
        const double w = std::pow(f.grid.r_nodes[i], kappa);
        for (int j = 0; j < f.grid.nz; ++j) out.at(i, j) = f.at(i, j) * w;
    }
    return out;
}

// --- scaling transformation --------------------------------------------------

// Scaling weight of the initial data under v -> lambda v(lambda^2 t, lambda x):
// omega scales with lambda^2, the swirl with lambda^1, and derived quantities
// with the matching power of their r-weight.
inline double scaling_exponent(Quantity q) {
    switch (q) {
        case Quantity::OmegaTheta: return 2.0;
        case Quantity::UTheta: return 1.0;
        case Quantity::Eta: return 3.0;
        case Quantity::U: return 2.0;
        case Quantity::W: return 1.0 + 7.0 / 11.0;
        default:
            throw std::invalid_argument(
                "rescale_data: no canonical scaling exponent for this quantity tag; pass sigma");
    }
}

inline double bilinear_sample(const ScalarField& f, double r, double z, bool& outside) {
    const HalfPlaneGrid& g = f.grid;
    outside = r <= 0.0 || r > g.r_max || z < -g.z_max || z > g.z_max;
    if (outside) return 0.0;
    double gi = r / g.dr - 0.5;
    double gj = (z + g.z_max) / g.dz - 0.5;
    // Clamp to the node hull; by construction the sample is inside the domain.
    gi = std::min(std::max(gi, 0.0), static_cast<double>(g.nr - 1));
    gj = std::min(std::max(gj, 0.0), static_cast<double>(g.nz - 1));
    int i0 = std::min(static_cast<int>(gi), g.nr - 2);
    int j0 = std::min(static_cast<int>(gj), g.nz - 2);
    if (g.nr == 1) i0 = 0;
    if (g.nz == 1) j0 = 0;
    const double fi = gi - i0, fj = gj - j0;
    const int i1 = std::min(i0 + 1, g.nr - 1), j1 = std::min(j0 + 1, g.nz - 1);
    return (1 - fi) * (1 - fj) * f.at(i0, j0) + fi * (1 - fj) * f.at(i1, j0) +
           (1 - fi) * fj * f.at(i0, j1) + fi * fj * f.at(i1, j1);
}

struct RescaledField {
    ScalarField field;
    double clipped_mass_fraction = 0.0;
};

inline RescaledField rescale_data(const ScalarField& f, double lambda, double sigma,
                                  const HalfPlaneGrid* target = nullptr) {
    if (!(lambda > 0)) throw std::invalid_argument("rescale_data: lambda must be positive");
    const HalfPlaneGrid tg =
        target ? *target : build_grid(f.grid.nr, f.grid.nz, f.grid.r_max / lambda, f.grid.z_max / lambda);
    RescaledField out;
    out.field = make_field(tg, f.quantity);
    const double amp = std::pow(lambda, sigma);
    bool any_outside = false;
    for (int i = 0; i < tg.nr; ++i)
        for (int j = 0; j < tg.nz; ++j) {
            bool outside = false;
            out.field.at(i, j) = amp * bilinear_sample(f, lambda * tg.r_nodes[i], lambda * tg.z_nodes[j], outside);
            any_outside = any_outside || outside;
        }
    // Clipped mass: |f| mass outside the box swept by the sample points.
    const double r_hi = lambda * tg.r_nodes[tg.nr - 1];
    const double z_lo = lambda * tg.z_nodes[0], z_hi = lambda * tg.z_nodes[tg.nz - 1];
    double total = 0.0, kept = 0.0;
    for (int i = 0; i < f.grid.nr; ++i)
        for (int j = 0; j < f.grid.nz; ++j) {
            const double m = std::abs(f.at(i, j));
            total += m;
            if (f.grid.r_nodes[i] <= r_hi && f.grid.z_nodes[j] >= z_lo && f.grid.z_nodes[j] <= z_hi)
                kept += m;
        }
    out.clipped_mass_fraction = total > 0 ? (total - kept) / total : 0.0;
    (void)any_outside;
    return out;
}

inline RescaledField rescale_data(const ScalarField& f, double lambda) {
    return rescale_data(f, lambda, scaling_exponent(f.quantity));
}

// --- discrete divergence -----------------------------------------------------

// D = d/dr (r u^r) + d/dz (r u^z); the continuous field satisfies D = 0
// (incompressibility in cylindrical coordinates). Central differences in the
// interior, second-order one-sided stencils at the truncation edges (the far
// field does not vanish there, so zero ghosts would pollute the edge rows).
inline ScalarField weighted_divergence(const VelocityField& v) {
    const HalfPlaneGrid& g = v.grid;
    ScalarField d = make_field(g);
    auto diff = [](double fm, double f0, double fp, int pos, int n, double h) {
        if (pos == 0) return (-3.0 * f0 + 4.0 * fp - fm) / (2.0 * h);      // fm holds f(pos+2)
        if (pos == n - 1) return (3.0 * f0 - 4.0 * fm + fp) / (2.0 * h);   // fp holds f(pos-2)
        return (fp - fm) / (2.0 * h);
    };
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const int im = i == 0 ? 2 : i - 1;
            const int ip = i == g.nr - 1 ? g.nr - 3 : i + 1;
            const int jm = j == 0 ? 2 : j - 1;
            const int jp = j == g.nz - 1 ? g.nz - 3 : j + 1;
            const double ddr = diff(g.r_nodes[im] * v.ur[g.index(im, j)],
                                    g.r_nodes[i] * v.ur[g.index(i, j)],
                                    g.r_nodes[ip] * v.ur[g.index(ip, j)], i, g.nr, g.dr);
            const double ddz = diff(g.r_nodes[i] * v.uz[g.index(i, jm)],
                                    g.r_nodes[i] * v.uz[g.index(i, j)],
                                    g.r_nodes[i] * v.uz[g.index(i, jp)], j, g.nz, g.dz);
            d.at(i, j) = ddr + ddz;
        }
    return d;
}

// Fraction of the |f| mass lying in the outer 10% band next to the truncation
// boundaries (truncation diagnostic).
inline double boundary_mass_fraction(const ScalarField& f) {
    const HalfPlaneGrid& g = f.grid;
    double total = 0.0, outer = 0.0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double m = std::abs(f.at(i, j));
            total += m;
            if (g.r_nodes[i] > 0.9 * g.r_max || std::abs(g.z_nodes[j]) > 0.9 * g.z_max) outer += m;
        }
    return total > 0 ? outer / total : 0.0;
}

// --- snapshot files ----------------------------------------------------------

// One ASCII header line "nr nz dr dz r_max z_max quantity" followed by
// row-major 64-bit floats. Round-trips bit-exactly.
inline void write_snapshot(const std::string& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
    char header[256];
    std::snprintf(header, sizeof(header), "%d %d %.17g %.17g %.17g %.17g %s\n", f.grid.nr, f.grid.nz,
                  f.grid.dr, f.grid.dz, f.grid.r_max, f.grid.z_max, to_string(f.quantity));
    out << header;
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_snapshot: write failed for " + path);
}

inline ScalarField read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    std::string header;
    std::getline(in, header);
    int nr, nz;
    double dr, dz, r_max, z_max;
    char qbuf[64];
    if (std::sscanf(header.c_str(), "%d %d %lg %lg %lg %lg %63s", &nr, &nz, &dr, &dz, &r_max, &z_max,
                    qbuf) != 7)
        throw std::runtime_error("read_snapshot: malformed header in " + path);
    ScalarField f = make_field(build_grid(nr, nz, r_max, z_max), quantity_from_string(qbuf));
    if (std::abs(f.grid.dr - dr) > 1e-12 * dr || std::abs(f.grid.dz - dz) > 1e-12 * dz)
        throw std::runtime_error("read_snapshot: inconsistent spacings in " + path);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(double)))
        throw std::runtime_error("read_snapshot: truncated payload in " + path);
    return f;
}

} // namespace axiswirl
