#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "deltawell/bessel.hpp"

namespace deltawell {

template <class F>
concept ScalarFunction = requires(const F& f, double x) {
    { f(x) } -> std::convertible_to<double>;
};

/// An interval [lo, hi] over which f changes sign.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;

    /// Throws std::invalid_argument unless lo < hi and f_lo * f_hi < 0
    /// (a zero at either end is also accepted).
    void validate() const
    {
        if (!(lo < hi)) throw std::invalid_argument("Bracket: requires lo < hi");
        if (std::isnan(f_lo) || std::isnan(f_hi)) {
            throw std::invalid_argument("Bracket: function value is NaN");
        }
        if (f_lo * f_hi > 0.0 || (f_lo == 0.0 && f_hi == 0.0)) {
            throw std::invalid_argument("Bracket: f(lo) and f(hi) must have opposite signs");
        }
    }
};

template <ScalarFunction F>
Bracket make_bracket(const F& f, double lo, double hi)
{
    Bracket b{lo, hi, static_cast<double>(f(lo)), static_cast<double>(f(hi))};
    b.validate();
    return b;
}

/// Grows [x0, x0 * factor] geometrically in both directions until f changes
/// sign between neighbouring samples. Intended for functions of a positive
/// scale parameter; the bracket returned is the one nearest x0.
template <ScalarFunction F>
Bracket expand_bracket(const F& f, double x0, double factor = 4.0, int max_steps = 60)
{
    if (!(x0 > 0.0) || !(factor > 1.0)) {
        throw std::invalid_argument("expand_bracket: requires x0 > 0 and factor > 1");
    }
    double lo = x0;
    double hi = x0 * factor;
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo * f_hi <= 0.0) return make_bracket(f, lo, hi);
    for (int i = 0; i < max_steps; ++i) {
        const double below = lo / factor;
        const double f_below = f(below);
        if (f_below * f_lo <= 0.0) return make_bracket(f, below, lo);
        lo = below;
        f_lo = f_below;

        const double above = hi * factor;
        const double f_above = f(above);
        if (f_hi * f_above <= 0.0) return make_bracket(f, hi, above);
        hi = above;
        f_hi = f_above;
    }
    throw std::runtime_error("expand_bracket: no sign change found");
}

/// Brent's method. Returns a point inside the bracket; the final enclosing
/// interval is no wider than tol (or cannot be narrowed further in double
/// precision).
template <ScalarFunction F>
double find_root(const F& f, const Bracket& bracket, double tol, int max_iter = 200)
{
    bracket.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("find_root: tolerance must be positive");

    double a = bracket.lo;
    double b = bracket.hi;
    double fa = bracket.f_lo;
    double fb = bracket.f_hi;
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = std::max(0.5 * tol - eps * std::abs(b), eps * std::abs(b));
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p = 0.0;
            double q = 0.0;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw std::runtime_error("find_root: iteration limit reached");
}

/// Number of sign changes of f over n uniformly spaced samples of [lo, hi].
/// Samples that are exactly zero count as a change at that point.
template <ScalarFunction F>
std::vector<double> sign_change_locations(const F& f, double lo, double hi, std::size_t n)
{
    if (n < 2 || !(lo < hi)) throw std::invalid_argument("sign_change_locations: bad grid");
    std::vector<double> where;
    double x_prev = lo;
    double f_prev = f(lo);
    if (f_prev == 0.0) where.push_back(lo);
    for (std::size_t i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double fx = f(x);
        if (fx == 0.0) {
            where.push_back(x);
        } else if (f_prev != 0.0 && (fx > 0.0) != (f_prev > 0.0)) {
            where.push_back(0.5 * (x_prev + x));
        }
        x_prev = x;
        f_prev = fx;
    }
    return where;
}

/// Strictly increasing on every consecutive pair of n uniform samples.
template <ScalarFunction F>
bool strictly_increasing_on_grid(const F& f, double lo, double hi, std::size_t n)
{
    double prev = f(lo);
    for (std::size_t i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double fx = f(x);
        if (!(fx > prev)) return false;
        prev = fx;
    }
    return true;
}

/// The unique positive solution of I_0(r) = K_0(r), located inside [lo, hi].
/// Uniqueness is asserted by a 1000-point monotonicity scan of I_0 - K_0.
inline double crossing_u0(double tol, double lo = 0.1, double hi = 1.0)
{
    if (!(tol > 0.0)) throw std::invalid_argument("crossing_u0: tolerance must be positive");
    auto diff = [](double r) { return bessel_i(kOrder0, r) - bessel_k(kOrder0, r); };
    if (!strictly_increasing_on_grid(diff, 1e-3, 10.0, 1000)) {
        throw std::logic_error("crossing_u0: I0 - K0 is not strictly increasing on the scan grid");
    }
    return find_root(diff, make_bracket(diff, lo, hi), tol);
}

/// u_0 to the limit of double precision; computed once.
inline double u0()
{
    static const double value = crossing_u0(1e-15);
    return value;
}

/// Raised when a pole scan does not see exactly one sign change.
class PoleScanError : public std::runtime_error {
public:
    PoleScanError(const std::string& what, std::vector<double> changes)
        : std::runtime_error(what), changes_(std::move(changes))
    {
    }
    const std::vector<double>& sign_changes() const noexcept { return changes_; }

private:
    std::vector<double> changes_;
};

/// Locates the zero of a resolvent denominator on [lo, hi]. The denominator must
/// change sign exactly once across a 512-sample scan.
template <ScalarFunction F>
double pole_scan(const F& denominator, double lo, double hi, double tol, std::size_t samples = 512)
{
    const auto changes = sign_change_locations(denominator, lo, hi, samples);
    if (changes.size() != 1) {
        std::ostringstream msg;
        msg << "pole_scan: expected exactly one sign change of the denominator on [" << lo << ", "
            << hi << "], found " << changes.size();
        if (!changes.empty()) {
            msg << " near";
            for (double c : changes) msg << ' ' << c;
        }
        throw PoleScanError(msg.str(), changes);
    }
    const double step = (hi - lo) / static_cast<double>(samples - 1);
    const double a = std::max(lo, changes.front() - step);
    const double b = std::min(hi, changes.front() + step);
    auto fa = static_cast<double>(denominator(a));
    auto fb = static_cast<double>(denominator(b));
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    return find_root(denominator, Bracket{a, b, fa, fb}, tol);
}

}  // namespace deltawell
