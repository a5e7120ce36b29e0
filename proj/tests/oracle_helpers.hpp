#pragma once

// Test-only oracles, coded independently of the production quadrature:
//  - composite Gauss-Legendre with panel doubling (no shared code with the
//    adaptive G7/K15 machinery),
//  - the complete-elliptic-integral closed form of F,
//  - Richardson central differences.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace oracle {

// 10-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<std::array<double, 2>, 10> kGL10 = {{
    {-0.97390652851717174, 0.06667134430868807},
    {-0.86506336668898454, 0.14945134915058036},
    {-0.67940956829902444, 0.21908636251598201},
    {-0.43339539412924721, 0.26926671930999674},
    {-0.14887433898163122, 0.29552422471475287},
    {0.14887433898163122, 0.29552422471475287},
    {0.43339539412924721, 0.26926671930999674},
    {0.67940956829902444, 0.21908636251598201},
    {0.86506336668898454, 0.14945134915058036},
    {0.97390652851717174, 0.06667134430868807},
}};

inline double composite_gl(const std::function<double(double)>& f, double a, double b, int panels) {
    double total = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double s = 0.0;
        for (const auto& nw : kGL10) s += nw[1] * f(mid + 0.5 * h * nw[0]);
        total += 0.5 * h * s;
    }
    return total;
}

inline double quad(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
    int panels = 16;
    double prev = composite_gl(f, a, b, panels);
    for (int it = 0; it < 12; ++it) {
        panels *= 2;
        const double cur = composite_gl(f, a, b, panels);
        if (std::abs(cur - prev) < tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

// F(s) = -k K(k) + (2/k)(K(k) - E(k)) with k = 2/sqrt(4+s).
inline double F_elliptic(double s) {
    const double k = 2.0 / std::sqrt(4.0 + s);
    const double K = std::comp_ellint_1(k);
    const double E = std::comp_ellint_2(k);
    return -k * K + (2.0 / k) * (K - E);
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Smooth pseudo-random field values for property tests.
inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

} // namespace oracle
