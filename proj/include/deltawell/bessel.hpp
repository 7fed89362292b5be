#pragma once

// Modified Bessel functions I_0, I_1, K_0, K_1 in double precision.
//
// Branches:
//   I:  power series for x <= 25, asymptotic expansion beyond.
//   K:  logarithmic small-argument series for x <= 2, Steed's continued
//       fraction (Temme's method) on (2, 25], asymptotic expansion beyond.
//
// The scaled variants return e^{-x} I(x) and e^{x} K(x) and stay finite for
// arguments where the unscaled values would overflow or underflow.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace deltawell {

/// Order of a modified Bessel function. Only 0 and 1 are representable.
class BesselOrder {
public:
    constexpr explicit BesselOrder(int order) : order_(order)
    {
        if (order != 0 && order != 1) {
            throw std::invalid_argument("BesselOrder: only orders 0 and 1 are supported, got " +
                                        std::to_string(order));
        }
    }

    constexpr int value() const noexcept { return order_; }
    constexpr bool operator==(const BesselOrder&) const = default;

private:
    int order_;
};

inline constexpr BesselOrder kOrder0{0};
inline constexpr BesselOrder kOrder1{1};

/// Smallest argument accepted by the K functions.
inline constexpr double kBesselKMinArg = 1e-8;

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kSeriesToAsymptotic = 25.0;
inline constexpr double kKSeriesToFraction = 2.0;
// e^{x} overflows (and e^{-x} leaves the normal range) a little above 709.
inline constexpr double kExpLimit = 700.0;

inline void require_finite_nonnegative(double x, const char* who)
{
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::domain_error(std::string(who) + ": argument must be finite and >= 0");
    }
}

inline void require_k_domain(double x, const char* who)
{
    if (!(x >= kBesselKMinArg)) {
        throw std::domain_error(std::string(who) +
                                ": argument must be >= 1e-8 (K diverges at the origin)");
    }
}

/// sum_k (x/2)^{2k+nu} / (k! (k+nu)!)
inline double i_series(int nu, double x)
{
    const double q = 0.25 * x * x;
    double term = nu == 0 ? 1.0 : 0.5 * x;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
        sum += term;
        if (term < kEps * 0.25 * sum) break;
    }
    return sum;
}

/// Hankel expansion for e^{-x} I_nu(x), valid for large x.
inline double i_asymptotic_scaled(int nu, double x)
{
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) > std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < kEps * 0.25 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

/// Hankel expansion for e^{x} K_nu(x), valid for large x.
inline double k_asymptotic_scaled(int nu, double x)
{
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) > std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < kEps * 0.25 * std::abs(sum)) break;
    }
    return sum * std::sqrt(std::numbers::pi / (2.0 * x));
}

/// K_0 and K_1 from the logarithmic series; accurate for 0 < x <= 2.
inline void k_series(double x, double& k0, double& k1)
{
    const double q = 0.25 * x * x;
    const double log_half = std::log(0.5 * x);
    const double i0 = i_series(0, x);
    const double i1 = i_series(1, x);

    // K_0: -(ln(x/2) + gamma) I_0 + sum_k H_k q^k / (k!)^2
    double t0 = 1.0;
    double harmonic = 0.0;
    double s0 = 0.0;
    // K_1 tail: sum_k [psi(k+1) + psi(k+2)] q^k / (k! (k+1)!)
    double t1 = 1.0;
    double psi_k1 = -std::numbers::egamma;       // psi(1)
    double psi_k2 = 1.0 - std::numbers::egamma;  // psi(2)
    double s1 = psi_k1 + psi_k2;
    for (int k = 1; k < 200; ++k) {
        const double dk = k;
        t0 *= q / (dk * dk);
        harmonic += 1.0 / dk;
        s0 += t0 * harmonic;

        t1 *= q / (dk * (dk + 1.0));
        psi_k1 += 1.0 / dk;
        psi_k2 += 1.0 / (dk + 1.0);
        const double d1 = t1 * (psi_k1 + psi_k2);
        s1 += d1;
        if (t0 * harmonic < kEps * 0.25 * std::abs(s0) && std::abs(d1) < kEps * 0.25 * std::abs(s1)) {
            break;
        }
    }
    k0 = -(log_half + std::numbers::egamma) * i0 + s0;
    k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
}

/// e^{x} K_0 and e^{x} K_1 from Steed's continued fraction; accurate for x >= 2.
inline void k_fraction_scaled(double x, double& k0s, double& k1s)
{
    // Order-zero specialisation of Temme's CF2 evaluation.
    const double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 10000; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps * 0.5) break;
    }
    h *= a1;
    k0s = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
    k1s = k0s * (x + 0.5 - h) / x;
}

inline double i_scaled(int nu, double x)
{
    if (x > kSeriesToAsymptotic) return i_asymptotic_scaled(nu, x);
    return i_series(nu, x) * std::exp(-x);
}

inline double k_scaled(int nu, double x)
{
    if (x > kSeriesToAsymptotic) return k_asymptotic_scaled(nu, x);
    double k0 = 0.0;
    double k1 = 0.0;
    if (x <= kKSeriesToFraction) {
        k_series(x, k0, k1);
        const double e = std::exp(x);
        return (nu == 0 ? k0 : k1) * e;
    }
    k_fraction_scaled(x, k0, k1);
    return nu == 0 ? k0 : k1;
}

}  // namespace detail

/// I_order(x) for x >= 0. Throws std::overflow_error when e^x is not representable;
/// use bessel_i_scaled there.
inline double bessel_i(BesselOrder order, double x)
{
    detail::require_finite_nonnegative(x, "bessel_i");
    if (x > detail::kExpLimit) {
        throw std::overflow_error("bessel_i: result overflows for x > 700; use bessel_i_scaled");
    }
    if (x <= detail::kSeriesToAsymptotic) return detail::i_series(order.value(), x);
    return detail::i_asymptotic_scaled(order.value(), x) * std::exp(x);
}

/// e^{-x} I_order(x) for x >= 0.
inline double bessel_i_scaled(BesselOrder order, double x)
{
    detail::require_finite_nonnegative(x, "bessel_i_scaled");
    if (std::isinf(x)) return 0.0;
    return detail::i_scaled(order.value(), x);
}

/// K_order(x) for x >= 1e-8. Throws std::underflow_error when the value leaves the
/// normal double range; use bessel_k_scaled there.
inline double bessel_k(BesselOrder order, double x)
{
    detail::require_finite_nonnegative(x, "bessel_k");
    detail::require_k_domain(x, "bessel_k");
    if (x > detail::kExpLimit) {
        throw std::underflow_error("bessel_k: result underflows for x > 700; use bessel_k_scaled");
    }
    if (x <= detail::kKSeriesToFraction) {
        double k0 = 0.0;
        double k1 = 0.0;
        detail::k_series(x, k0, k1);
        return order.value() == 0 ? k0 : k1;
    }
    return detail::k_scaled(order.value(), x) * std::exp(-x);
}

/// e^{x} K_order(x) for x >= 1e-8.
inline double bessel_k_scaled(BesselOrder order, double x)
{
    detail::require_k_domain(x, "bessel_k_scaled");
    if (std::isinf(x)) return 0.0;
    return detail::k_scaled(order.value(), x);
}

/// I_0(x) K_1(x) + I_1(x) K_0(x) - 1/x, which vanishes identically.
/// Evaluated through the scaled forms so it stays finite for large x.
inline double wronskian_defect(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::domain_error("wronskian_defect: argument must be finite and > 0");
    }
    const double i0 = bessel_i_scaled(kOrder0, x);
    const double i1 = bessel_i_scaled(kOrder1, x);
    const double k0 = bessel_k_scaled(kOrder0, x);
    const double k1 = bessel_k_scaled(kOrder1, x);
    return i0 * k1 + i1 * k0 - 1.0 / x;
}

}  // namespace deltawell
