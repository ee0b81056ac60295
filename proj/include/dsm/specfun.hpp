#pragma once
/**
 * @file specfun.hpp
 * @brief Real Bessel functions of the first kind, orders 0 and 1.
 *
 * Three regimes, each accurate to a few ulps of 1e-16 in absolute terms:
 *   |x| < 8        truncated power series
 *   8 <= |x| < 25  Miller backward recurrence normalized by J0 + 2 sum J2k = 1
 *   |x| >= 25      Hankel large-argument expansion
 *
 * bessel_jn_oracle evaluates the integral representation
 *   J_n(x) = (1/pi) int_0^pi cos(n tau - x sin tau) dtau
 * with the trapezoid rule. The integrand extends to a smooth 2 pi-periodic
 * even function, so the rule converges spectrally; it shares no code with the
 * fast path and is used as the reference in tests.
 */

#include <array>
#include <cmath>
#include <numbers>

#include "dsm/errors.hpp"

namespace dsm {

enum class BesselMethod { series, backward_recurrence, asymptotic, oracle_quadrature };

struct BesselEvaluation {
    double argument = 0.0;
    double value = 0.0;
    BesselMethod method = BesselMethod::series;
};

/// Argument of the global maximum of J1, to the four decimals commonly quoted.
inline constexpr double kJ1PeakArgument = 1.8412;

namespace detail {

inline constexpr double kSeriesLimit = 8.0;
inline constexpr double kAsymptoticLimit = 25.0;

// sum_k (-1)^k (x/2)^(2k+order) / (k! (k+order)!), order in {0, 1}, x >= 0
inline double bessel_series(int order, double x) noexcept {
    const double half = 0.5 * x;
    const double q = -half * half;
    double term = order == 0 ? 1.0 : half;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Both orders at once; x > 0.
inline std::array<double, 2> bessel_miller(double x) noexcept {
    const int start = 2 * (static_cast<int>(x + 60.0) / 2);
    double above = 0.0;  // J_{n+1}, unnormalized
    double current = 1e-30;
    double even_sum = 0.0;
    double j0 = 0.0;
    double j1 = 0.0;
    for (int n = start; n > 0; --n) {
        const double below = 2.0 * n / x * current - above;
        above = current;
        current = below;
        // current now holds J_{n-1}
        if (n - 1 == 1) j1 = current;
        if (n - 1 == 0) j0 = current;
        if ((n - 1) % 2 == 0 && n - 1 > 0) even_sum += current;
        if (std::abs(current) > 1e250) {
            current *= 1e-250;
            above *= 1e-250;
            even_sum *= 1e-250;
            j0 *= 1e-250;
            j1 *= 1e-250;
        }
    }
    const double normalizer = j0 + 2.0 * even_sum;
    return {j0 / normalizer, j1 / normalizer};
}

// Hankel expansion for order 0 or 1; x >= kAsymptoticLimit.
inline double bessel_asymptotic(int order, double x) noexcept {
    const double mu = 4.0 * order * order;
    double p = 1.0;
    double q = 0.0;
    double coeff = 1.0;  // a_k(order) / x^k
    double previous = 1.0;
    for (int k = 1; k < 120; ++k) {
        const double odd = 2.0 * k - 1.0;
        coeff *= (mu - odd * odd) / (8.0 * k * x);
        const double magnitude = std::abs(coeff);
        if (magnitude > previous) break;  // series started diverging
        // P takes even k with sign (-1)^(k/2); Q takes odd k with sign (-1)^((k-1)/2)
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0)
            p += sign * coeff;
        else
            q += sign * coeff;
        if (magnitude < 1e-18) break;
        previous = magnitude;
    }
    const double c = std::cos(x);
    const double s = std::sin(x);
    constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    double cos_phase;
    double sin_phase;
    if (order == 0) {
        // phase x - pi/4
        cos_phase = (c + s) * inv_sqrt2;
        sin_phase = (s - c) * inv_sqrt2;
    } else {
        // phase x - 3 pi/4
        cos_phase = (s - c) * inv_sqrt2;
        sin_phase = -(s + c) * inv_sqrt2;
    }
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_phase - q * sin_phase);
}

inline void require_finite(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("Bessel argument must be finite");
}

inline BesselEvaluation evaluate_nonnegative(int order, double ax) noexcept {
    if (ax < kSeriesLimit) return {ax, bessel_series(order, ax), BesselMethod::series};
    if (ax < kAsymptoticLimit) return {ax, bessel_miller(ax)[order], BesselMethod::backward_recurrence};
    return {ax, bessel_asymptotic(order, ax), BesselMethod::asymptotic};
}

} // namespace detail

inline BesselEvaluation evaluate_bessel_j0(double x) {
    detail::require_finite(x);
    auto e = detail::evaluate_nonnegative(0, std::abs(x));
    e.argument = x;
    return e;
}

inline BesselEvaluation evaluate_bessel_j1(double x) {
    detail::require_finite(x);
    auto e = detail::evaluate_nonnegative(1, std::abs(x));
    e.argument = x;
    if (x < 0.0) e.value = -e.value;
    return e;
}

inline double bessel_j0(double x) { return evaluate_bessel_j0(x).value; }

inline double bessel_j1(double x) { return evaluate_bessel_j1(x).value; }

/// Trapezoid-rule quadrature of (1/pi) int_0^pi cos(n tau - x sin tau) dtau.
inline double bessel_jn_oracle(int order, double x, int panels) {
    if (panels < 64) throw InvalidArgument("oracle needs at least 64 panels");
    detail::require_finite(x);
    const double h = std::numbers::pi / panels;
    auto integrand = [&](double tau) { return std::cos(order * tau - x * std::sin(tau)); };
    double sum = 0.5 * (integrand(0.0) + integrand(std::numbers::pi));
    for (int i = 1; i < panels; ++i) sum += integrand(i * h);
    return sum / panels;
}

inline double bessel_j1_oracle(double x, int panels) { return bessel_jn_oracle(1, x, panels); }

inline BesselEvaluation evaluate_bessel_j1_oracle(double x, int panels) {
    return {x, bessel_j1_oracle(x, panels), BesselMethod::oracle_quadrature};
}

} // namespace dsm
