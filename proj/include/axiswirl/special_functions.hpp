#pragma once

// Kernel profile functions for the axisymmetric Biot-Savart law and the
// linearized solution operator:
//
//   F(s) = int_0^{pi/2} cos(2p) / sqrt(sin^2 p + s/4) dp
//   H(t) = 1/sqrt(pi t) * int_{-pi/2}^{pi/2} exp(-sin^2 p / t) cos(2p) dp
//
// F'(s) and H'(t) are evaluated by differentiating under the integral sign.
// The evaluators use adaptive panel quadrature at an absolute tolerance of
// 1e-12 and switch to validated series expansions at the extreme arguments
// where quadrature would lose accuracy to cancellation.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "axiswirl/quadrature.hpp"

namespace axiswirl {

inline constexpr double kSpecialFnTol = 1e-12;

// Switch-over thresholds (calibrated so the series error stays below the
// quadrature tolerance on the far side of each threshold).
inline constexpr double kHSeriesSmallT = 1e-5;
inline constexpr double kHPrimeSeriesSmallT = 1e-4;
inline constexpr double kHSeriesLargeT = 1e8;
inline constexpr double kFSeriesLargeS = 1e10;

namespace detail {

inline double sqrt_pi() { return std::sqrt(M_PI); }

// H(t) = 1 - 3t/4 - 15t^2/32 - 105t^3/128 - 4725t^4/2048 + O(t^5)
inline double h_series_small(double t) {
    return 1.0 + t * (-0.75 + t * (-15.0 / 32.0 + t * (-105.0 / 128.0 + t * (-4725.0 / 2048.0))));
}

inline double hp_series_small(double t) {
    return -0.75 + t * (-15.0 / 16.0 + t * (-315.0 / 128.0 + t * (-4725.0 / 512.0)));
}

// H(t) = sqrt(pi)/4 t^{-3/2} - sqrt(pi)/8 t^{-5/2} + 5 sqrt(pi)/128 t^{-7/2} + ...
inline double h_series_large(double t) {
    const double u = 1.0 / t;
    return sqrt_pi() * std::pow(t, -1.5) * (0.25 + u * (-0.125 + u * (5.0 / 128.0)));
}

inline double hp_series_large(double t) {
    const double u = 1.0 / t;
    return sqrt_pi() * std::pow(t, -2.5) * (-3.0 / 8.0 + u * (5.0 / 16.0 + u * (-35.0 / 256.0)));
}

// F(s) = pi/2 s^{-3/2} - 3pi/2 s^{-5/2} + 75pi/16 s^{-7/2} + ...
inline double f_series_large(double s) {
    const double u = 1.0 / s;
    return M_PI * std::pow(s, -1.5) * (0.5 + u * (-1.5 + u * (75.0 / 16.0)));
}

inline double fp_series_large(double s) {
    const double u = 1.0 / s;
    return M_PI * std::pow(s, -2.5) * (-0.75 + u * (15.0 / 4.0 + u * (-525.0 / 32.0)));
}

} // namespace detail

inline double eval_F(double s, double tol = kSpecialFnTol) {
    if (!(s > 0)) throw std::domain_error("eval_F: argument must be positive");
    if (s > kFSeriesLargeS) return detail::f_series_large(s);
    return adaptive_quad(
        [s](double p) {
            const double sp = std::sin(p);
            return std::cos(2 * p) / std::sqrt(sp * sp + 0.25 * s);
        },
        0.0, M_PI / 2, tol);
}

inline double eval_F_prime(double s, double tol = kSpecialFnTol) {
    if (!(s > 0)) throw std::domain_error("eval_F_prime: argument must be positive");
    if (s > kFSeriesLargeS) return detail::fp_series_large(s);
    return -0.125 * adaptive_quad(
                        [s](double p) {
                            const double sp = std::sin(p);
                            return std::cos(2 * p) * std::pow(sp * sp + 0.25 * s, -1.5);
                        },
                        0.0, M_PI / 2, tol);
}

inline double eval_H(double t, double tol = kSpecialFnTol) {
    if (!(t > 0)) throw std::domain_error("eval_H: argument must be positive");
    if (t < kHSeriesSmallT) return detail::h_series_small(t);
    if (t > kHSeriesLargeT) return detail::h_series_large(t);
    const double scale = std::sqrt(M_PI * t);
    const double integral = adaptive_quad(
        [t](double p) {
            const double sp = std::sin(p);
            return std::exp(-sp * sp / t) * std::cos(2 * p);
        },
        -M_PI / 2, M_PI / 2, tol * scale);
    return integral / scale;
}

inline double eval_H_prime(double t, double tol = kSpecialFnTol) {
    if (!(t > 0)) throw std::domain_error("eval_H_prime: argument must be positive");
    if (t < kHPrimeSeriesSmallT) return detail::hp_series_small(t);
    if (t > kHSeriesLargeT) return detail::hp_series_large(t);
    // d/dt [ t^{-1/2} e^{-sin^2/t} ] = t^{-1/2} e^{-sin^2/t} (sin^2/t^2 - 1/(2t))
    const double scale = std::sqrt(M_PI * t);
    const double integral = adaptive_quad(
        [t](double p) {
            const double sp2 = std::sin(p) * std::sin(p);
            return std::exp(-sp2 / t) * std::cos(2 * p) * (sp2 / (t * t) - 0.5 / t);
        },
        -M_PI / 2, M_PI / 2, tol * scale);
    return integral / scale;
}

enum class SpecialFn { F, Fprime, H, Hprime };

inline const char* to_string(SpecialFn fn) {
    switch (fn) {
        case SpecialFn::F: return "F";
        case SpecialFn::Fprime: return "Fp";
        case SpecialFn::H: return "H";
        case SpecialFn::Hprime: return "Hp";
    }
    return "?";
}

inline double eval_special(SpecialFn fn, double x) {
    switch (fn) {
        case SpecialFn::F: return eval_F(x);
        case SpecialFn::Fprime: return eval_F_prime(x);
        case SpecialFn::H: return eval_H(x);
        case SpecialFn::Hprime: return eval_H_prime(x);
    }
    throw std::logic_error("eval_special: bad tag");
}

struct AsymptoticReport {
    double exponent_fit = 0.0;  // tail slope of log|fn| vs log t
    double t_lo = 0.0, t_hi = 0.0;
    double max_deviation = 0.0;  // max residual of the tail fit
    int samples = 0;
    double sup_value = 0.0;  // sup of t^exponent * |fn(t)| over the scan
    double sup_at = 0.0;     // argument attaining the sup
};

// Admissible power intervals for the boundedness scans: s^a F and s^b F' are
// bounded for a in ]0,3/2], b in [1,5/2]; t^a H and t^b H' for a in [0,3/2],
// b in [0,5/2].
inline void check_power_admissible(SpecialFn fn, double exponent) {
    bool ok = false;
    switch (fn) {
        case SpecialFn::F: ok = exponent > 0.0 && exponent <= 1.5; break;
        case SpecialFn::Fprime: ok = exponent >= 1.0 && exponent <= 2.5; break;
        case SpecialFn::H: ok = exponent >= 0.0 && exponent <= 1.5; break;
        case SpecialFn::Hprime: ok = exponent >= 0.0 && exponent <= 2.5; break;
    }
    if (!ok)
        throw std::domain_error(std::string("bounded_power_scan: exponent ") +
                                std::to_string(exponent) + " outside the admissible interval for " +
                                to_string(fn));
}

inline AsymptoticReport bounded_power_scan(SpecialFn fn, double exponent, double t_lo, double t_hi,
                                           int samples = 121) {
    if (!(t_lo > 0 && t_hi > t_lo)) throw std::domain_error("bounded_power_scan: bad range");
    if (samples < 8) throw std::domain_error("bounded_power_scan: need at least 8 samples");
    check_power_admissible(fn, exponent);

    AsymptoticReport rep;
    rep.t_lo = t_lo;
    rep.t_hi = t_hi;
    rep.samples = samples;

    std::vector<double> ts(samples), vals(samples);
    const double la = std::log(t_lo), lb = std::log(t_hi);
    for (int i = 0; i < samples; ++i) {
        ts[i] = std::exp(la + (lb - la) * i / (samples - 1));
        vals[i] = eval_special(fn, ts[i]);
        const double powered = std::pow(ts[i], exponent) * std::abs(vals[i]);
        if (powered > rep.sup_value) {
            rep.sup_value = powered;
            rep.sup_at = ts[i];
        }
    }

    // Tail slope: least squares on log|fn| vs log t over the last decade.
    double cut = t_hi / 10.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = 0; i < samples; ++i) {
        if (ts[i] < cut || std::abs(vals[i]) <= 0.0) continue;
        const double x = std::log(ts[i]), y = std::log(std::abs(vals[i]));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n >= 2) {
        const double denom = n * sxx - sx * sx;
        rep.exponent_fit = (n * sxy - sx * sy) / denom;
        const double intercept = (sy - rep.exponent_fit * sx) / n;
        for (int i = 0; i < samples; ++i) {
            if (ts[i] < cut || std::abs(vals[i]) <= 0.0) continue;
            const double pred = intercept + rep.exponent_fit * std::log(ts[i]);
            rep.max_deviation = std::max(rep.max_deviation, std::abs(pred - std::log(std::abs(vals[i]))));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Fast tabulated evaluators. Kernel assembly in the Biot-Savart and semigroup
// modules calls F, F', H, H' millions of times per grid; a piecewise
// Chebyshev interpolant in log-argument reproduces the quadrature values to
// ~1e-12 at ~20ns per call. Outside the tabulated range the series branches
// of the direct evaluators take over.

namespace detail {

class LogChebTable {
  public:
    LogChebTable(const std::function<double(double)>& f, double x_lo, double x_hi,
                 int degree = 16, double panels_per_decade = 2.0)
        : theta_lo_(std::log(x_lo)), theta_hi_(std::log(x_hi)), degree_(degree) {
        const double decades = (theta_hi_ - theta_lo_) / std::log(10.0);
        npanels_ = std::max(1, static_cast<int>(std::ceil(decades * panels_per_decade)));
        width_ = (theta_hi_ - theta_lo_) / npanels_;
        coef_.assign(static_cast<std::size_t>(npanels_) * (degree_ + 1), 0.0);
        std::vector<double> fv(degree_ + 1);
        for (int p = 0; p < npanels_; ++p) {
            const double a = theta_lo_ + p * width_;
            const double b = a + width_;
            for (int j = 0; j <= degree_; ++j) {
                const double xi = std::cos(M_PI * (j + 0.5) / (degree_ + 1));
                fv[j] = f(std::exp(0.5 * (a + b) + 0.5 * (b - a) * xi));
            }
            for (int k = 0; k <= degree_; ++k) {
                double acc = 0.0;
                for (int j = 0; j <= degree_; ++j)
                    acc += fv[j] * std::cos(M_PI * k * (j + 0.5) / (degree_ + 1));
                coef_[static_cast<std::size_t>(p) * (degree_ + 1) + k] =
                    acc * 2.0 / (degree_ + 1);
            }
        }
    }

    bool covers(double x) const {
        const double th = std::log(x);
        return th >= theta_lo_ && th <= theta_hi_;
    }

    double operator()(double x) const {
        const double th = std::log(x);
        int p = static_cast<int>((th - theta_lo_) / width_);
        if (p < 0) p = 0;
        if (p >= npanels_) p = npanels_ - 1;
        const double a = theta_lo_ + p * width_;
        const double u = 2.0 * (th - a) / width_ - 1.0;  // in [-1, 1]
        const double* c = &coef_[static_cast<std::size_t>(p) * (degree_ + 1)];
        // Clenshaw recurrence
        double b1 = 0.0, b2 = 0.0;
        for (int k = degree_; k >= 1; --k) {
            const double b0 = 2.0 * u * b1 - b2 + c[k];
            b2 = b1;
            b1 = b0;
        }
        return u * b1 - b2 + 0.5 * c[0];
    }

  private:
    double theta_lo_, theta_hi_, width_;
    int degree_, npanels_;
    std::vector<double> coef_;
};

inline constexpr double kTableLo = 1e-13;
inline constexpr double kTableHi = 1e12;

} // namespace detail

inline double fast_F(double s) {
    static const detail::LogChebTable table([](double x) { return eval_F(x, 1e-13); },
                                            detail::kTableLo, detail::kTableHi);
    if (s >= detail::kTableLo && s <= detail::kTableHi) return table(s);
    if (s > detail::kTableHi) return detail::f_series_large(s);
    // s below the table: logarithmic regime, F(s) = -ln(s)/2 + 3 ln 2 - 2 + O(s ln s)
    return -0.5 * std::log(s) + 3.0 * std::log(2.0) - 2.0;
}

inline double fast_F_prime(double s) {
    static const detail::LogChebTable table(
        [](double x) { return x * eval_F_prime(x, 1e-13); }, detail::kTableLo, detail::kTableHi);
    if (s >= detail::kTableLo && s <= detail::kTableHi) return table(s) / s;
    if (s > detail::kTableHi) return detail::fp_series_large(s);
    return -0.5 / s;
}

inline double fast_H(double t) {
    static const detail::LogChebTable table([](double x) { return eval_H(x, 1e-13); },
                                            detail::kTableLo, detail::kTableHi);
    if (t < kHSeriesSmallT) return detail::h_series_small(t);
    if (t > kHSeriesLargeT) return detail::h_series_large(t);
    return table(t);
}

inline double fast_H_prime(double t) {
    static const detail::LogChebTable table([](double x) { return eval_H_prime(x, 1e-13); },
                                            detail::kTableLo, detail::kTableHi);
    if (t < kHPrimeSeriesSmallT) return detail::hp_series_small(t);
    if (t > kHSeriesLargeT) return detail::hp_series_large(t);
    return table(t);
}

} // namespace axiswirl
