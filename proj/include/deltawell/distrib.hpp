#pragma once

// Numerical distributions on the line and on radially symmetric functions in
// the plane: piecewise-smooth regular parts plus delta atoms, distributional
// second derivatives and Laplacians obtained from derivative jumps, Schwartz
// brackets against compactly supported bump test functions, and mollifier
// sequences.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "deltawell/bessel.hpp"
#include "deltawell/quad.hpp"

namespace deltawell {

template <int Dim>
using Point = std::array<double, Dim>;

// ---------------------------------------------------------------------------
// Test functions
// ---------------------------------------------------------------------------

/// Smooth radial bump centred at `center` and supported in the closed ball of
/// the given radius.
///
/// With plateau == 0 the profile is the canonical e * exp(-1 / (1 - |u|^2)),
/// u = |x - c| / radius, normalised so that the value at the centre equals the
/// amplitude. With 0 < plateau < radius the function equals the amplitude on
/// the ball of radius `plateau` and falls to zero through the standard smooth
/// step on the annulus (plateau, radius). Both profiles are C-infinity.
template <int Dim>
class BumpTestFunction {
    static_assert(Dim == 1 || Dim == 2);

public:
    BumpTestFunction(Point<Dim> center, double radius, double amplitude = 1.0, double plateau = 0.0)
        : center_(center), radius_(radius), amplitude_(amplitude), plateau_(plateau)
    {
        if (!(radius > 0.0) || !std::isfinite(radius)) {
            throw std::invalid_argument("BumpTestFunction: radius must be positive");
        }
        if (!(plateau >= 0.0) || !(plateau < radius)) {
            throw std::invalid_argument("BumpTestFunction: plateau must lie in [0, radius)");
        }
        if (!std::isfinite(amplitude)) {
            throw std::invalid_argument("BumpTestFunction: amplitude must be finite");
        }
    }

    const Point<Dim>& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    double amplitude() const noexcept { return amplitude_; }
    double plateau() const noexcept { return plateau_; }

    double center_distance_from_origin() const noexcept
    {
        double s = 0.0;
        for (double c : center_) s += c * c;
        return std::sqrt(s);
    }

    /// Profile and its first two derivatives as functions of s = |x - center|.
    double profile(double s) const { return amplitude_ * shape(s).value; }
    double profile_d1(double s) const { return amplitude_ * shape(s).d1; }
    double profile_d2(double s) const { return amplitude_ * shape(s).d2; }

    double value(const Point<Dim>& x) const { return profile(distance(x)); }

    Point<Dim> gradient(const Point<Dim>& x) const
    {
        Point<Dim> g{};
        const double s = distance(x);
        if (s == 0.0) return g;
        const double scale = profile_d1(s) / s;
        for (int i = 0; i < Dim; ++i) g[i] = scale * (x[i] - center_[i]);
        return g;
    }

    double laplacian(const Point<Dim>& x) const { return radial_laplacian(distance(x)); }

    /// Laplacian expressed through s = |x - center|.
    double radial_laplacian(double s) const
    {
        if (s >= radius_) return 0.0;
        if (plateau_ == 0.0) {
            // Written in v = s^2 / radius^2 so that s = 0 needs no special case.
            const double rho2 = radius_ * radius_;
            const double v = s * s / rho2;
            const double w = 1.0 - v;
            const double g = std::exp(1.0 - 1.0 / w);
            const double g1 = -g / (w * w);
            const double g2 = g * (1.0 / (w * w * w * w) - 2.0 / (w * w * w));
            return amplitude_ * (g2 * 4.0 * s * s / (rho2 * rho2) + g1 * 2.0 * Dim / rho2);
        }
        if (s <= plateau_) return 0.0;
        const auto p = shape(s);
        return amplitude_ * (p.d2 + (Dim - 1) * p.d1 / s);
    }

    double value(double x) const
        requires(Dim == 1)
    {
        return value(Point<1>{x});
    }
    double second_derivative(double x) const
        requires(Dim == 1)
    {
        return laplacian(Point<1>{x});
    }

private:
    struct Shape {
        double value = 0.0;
        double d1 = 0.0;
        double d2 = 0.0;
    };

    double distance(const Point<Dim>& x) const
    {
        double s = 0.0;
        for (int i = 0; i < Dim; ++i) s += (x[i] - center_[i]) * (x[i] - center_[i]);
        return std::sqrt(s);
    }

    Shape shape(double s) const
    {
        s = std::abs(s);
        if (s >= radius_) return {};
        if (plateau_ == 0.0) {
            // G(v) = exp(1 - 1/(1 - v)) with v = s^2 / radius^2.
            const double rho2 = radius_ * radius_;
            const double w = 1.0 - s * s / rho2;
            const double g = std::exp(1.0 - 1.0 / w);
            const double g1 = -g / (w * w);
            const double g2 = g * (1.0 / (w * w * w * w) - 2.0 / (w * w * w));
            const double dv = 2.0 * s / rho2;
            return {g, g1 * dv, g2 * dv * dv + g1 * 2.0 / rho2};
        }
        if (s <= plateau_) return {1.0, 0.0, 0.0};
        const double width = radius_ - plateau_;
        const auto st = smooth_step((s - plateau_) / width);
        return {1.0 - st.value, -st.d1 / width, -st.d2 / (width * width)};
    }

    // g(t) = h(t) / (h(t) + h(1 - t)), h(t) = exp(-1/t): 0 at t <= 0, 1 at t >= 1.
    static Shape smooth_step(double t)
    {
        if (t <= 0.0) return {0.0, 0.0, 0.0};
        if (t >= 1.0) return {1.0, 0.0, 0.0};
        const auto h = [](double x) { return std::exp(-1.0 / x); };
        const auto h1 = [&](double x) { return h(x) / (x * x); };
        const auto h2 = [&](double x) { return h(x) * (1.0 / (x * x * x * x) - 2.0 / (x * x * x)); };
        const double p = h(t);
        const double q = h(1.0 - t);
        const double p1 = h1(t);
        const double q1 = -h1(1.0 - t);
        const double p2 = h2(t);
        const double q2 = h2(1.0 - t);
        const double sum = p + q;
        const double num = p1 * q - p * q1;
        const double num1 = p2 * q - p * q2;
        const double value = p / sum;
        const double d1 = num / (sum * sum);
        const double d2 = num1 / (sum * sum) - 2.0 * num * (p1 + q1) / (sum * sum * sum);
        return {value, d1, d2};
    }

    Point<Dim> center_;
    double radius_;
    double amplitude_;
    double plateau_;
};

using Bump1D = BumpTestFunction<1>;
using Bump2D = BumpTestFunction<2>;

// ---------------------------------------------------------------------------
// Piecewise-smooth functions
// ---------------------------------------------------------------------------

/// One smooth piece. Derivatives may be left empty when unknown; operations
/// that need them then fall back to one-sided finite differences.
struct SmoothPiece {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

enum class Axis { line, radial };

/// A function on the real line (Axis::line) or of radius on [0, inf)
/// (Axis::radial), smooth between ascending breakpoints. Piece i covers
/// [breakpoint[i-1], breakpoint[i]).
template <Axis A>
class Piecewise {
public:
    Piecewise(std::vector<double> breakpoints, std::vector<SmoothPiece> pieces)
        : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces))
    {
        if (pieces_.size() != breakpoints_.size() + 1) {
            throw std::invalid_argument("Piecewise: need exactly one more piece than breakpoints");
        }
        for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
            if (!std::isfinite(breakpoints_[i])) {
                throw std::invalid_argument("Piecewise: breakpoints must be finite");
            }
            if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1])) {
                throw std::invalid_argument("Piecewise: breakpoints must be strictly increasing");
            }
        }
        if (A == Axis::radial && !breakpoints_.empty() && breakpoints_.front() < 0.0) {
            throw std::invalid_argument("Piecewise: radial breakpoints must be >= 0");
        }
        for (const auto& p : pieces_) {
            if (!p.value) throw std::invalid_argument("Piecewise: every piece needs a value function");
        }
    }

    static Piecewise smooth(SmoothPiece piece) { return Piecewise({}, {std::move(piece)}); }

    static Piecewise zero()
    {
        auto z = [](double) { return 0.0; };
        return smooth({z, z, z});
    }

    static constexpr double lower_limit()
    {
        return A == Axis::line ? -std::numeric_limits<double>::infinity() : 0.0;
    }

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<SmoothPiece>& pieces() const noexcept { return pieces_; }

    std::size_t piece_index(double x) const
    {
        return static_cast<std::size_t>(
            std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin());
    }

    double operator()(double x) const { return pieces_[piece_index(x)].value(x); }

    double d1(double x) const
    {
        const auto& p = pieces_[piece_index(x)];
        if (!p.d1) throw std::logic_error("Piecewise: piece has no first derivative");
        return p.d1(x);
    }

    double d2(double x) const
    {
        const auto& p = pieces_[piece_index(x)];
        if (!p.d2) throw std::logic_error("Piecewise: piece has no second derivative");
        return p.d2(x);
    }

    Piecewise scaled(double c) const
    {
        std::vector<SmoothPiece> out;
        for (const auto& p : pieces_) {
            SmoothPiece q;
            q.value = [v = p.value, c](double x) { return c * v(x); };
            if (p.d1) q.d1 = [d = p.d1, c](double x) { return c * d(x); };
            if (p.d2) q.d2 = [d = p.d2, c](double x) { return c * d(x); };
            out.push_back(std::move(q));
        }
        return Piecewise(breakpoints_, std::move(out));
    }

    /// a * f + b * g on the merged breakpoint set.
    static Piecewise linear_combination(double a, const Piecewise& f, double b, const Piecewise& g)
    {
        std::vector<double> merged = f.breakpoints_;
        merged.insert(merged.end(), g.breakpoints_.begin(), g.breakpoints_.end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        std::vector<SmoothPiece> out;
        for (std::size_t k = 0; k <= merged.size(); ++k) {
            // A representative point strictly inside sub-interval k selects the pieces.
            double probe = 0.0;
            if (merged.empty()) {
                probe = 0.0;
            } else if (k == 0) {
                probe = merged.front() - 1.0;
            } else if (k == merged.size()) {
                probe = merged.back() + 1.0;
            } else {
                probe = 0.5 * (merged[k - 1] + merged[k]);
            }
            const SmoothPiece& pf = f.pieces_[f.piece_index(probe)];
            const SmoothPiece& pg = g.pieces_[g.piece_index(probe)];
            SmoothPiece q;
            q.value = [a, b, fv = pf.value, gv = pg.value](double x) { return a * fv(x) + b * gv(x); };
            if (pf.d1 && pg.d1) {
                q.d1 = [a, b, fd = pf.d1, gd = pg.d1](double x) { return a * fd(x) + b * gd(x); };
            }
            if (pf.d2 && pg.d2) {
                q.d2 = [a, b, fd = pf.d2, gd = pg.d2](double x) { return a * fd(x) + b * gd(x); };
            }
            out.push_back(std::move(q));
        }
        return Piecewise(std::move(merged), std::move(out));
    }

private:
    std::vector<double> breakpoints_;
    std::vector<SmoothPiece> pieces_;
};

using Piecewise1D = Piecewise<Axis::line>;
using RadialPiecewise = Piecewise<Axis::radial>;

// ---------------------------------------------------------------------------
// Delta atoms and distribution sums
// ---------------------------------------------------------------------------

enum class AtomKind {
    point,  ///< delta at `location` (on the line) or at the origin (radial)
    circle  ///< uniform line measure on the circle r = location
};

struct DeltaAtom {
    AtomKind kind = AtomKind::point;
    double location = 0.0;
    double weight = 0.0;
};

/// Regular part plus a finite list of delta atoms with distinct (kind, location).
template <Axis A>
class DistributionSum {
public:
    DistributionSum() : regular_(Piecewise<A>::zero()) {}
    explicit DistributionSum(Piecewise<A> regular, std::vector<DeltaAtom> atoms = {})
        : regular_(std::move(regular))
    {
        for (const auto& atom : atoms) add_atom(atom);
    }

    const Piecewise<A>& regular() const noexcept { return regular_; }
    const std::vector<DeltaAtom>& atoms() const noexcept { return atoms_; }

    /// Adds an atom, merging weights with an existing atom at the same place.
    void add_atom(const DeltaAtom& atom)
    {
        if (!std::isfinite(atom.location) || !std::isfinite(atom.weight)) {
            throw std::invalid_argument("DeltaAtom: location and weight must be finite");
        }
        if constexpr (A == Axis::line) {
            if (atom.kind != AtomKind::point) {
                throw std::invalid_argument("DeltaAtom: only point atoms exist on the line");
            }
        } else {
            if (atom.kind == AtomKind::point && atom.location != 0.0) {
                throw std::invalid_argument("DeltaAtom: radial point atoms sit at the origin");
            }
            if (atom.kind == AtomKind::circle && !(atom.location > 0.0)) {
                throw std::invalid_argument("DeltaAtom: circle-layer radius must be positive");
            }
        }
        for (auto& existing : atoms_) {
            if (existing.kind == atom.kind && existing.location == atom.location) {
                existing.weight += atom.weight;
                return;
            }
        }
        atoms_.push_back(atom);
    }

    const DeltaAtom* find_atom(AtomKind kind, double location) const
    {
        for (const auto& a : atoms_) {
            if (a.kind == kind && a.location == location) return &a;
        }
        return nullptr;
    }

    DistributionSum scaled(double c) const
    {
        DistributionSum out(regular_.scaled(c));
        for (auto a : atoms_) {
            a.weight *= c;
            out.add_atom(a);
        }
        return out;
    }

    /// this + c * f, with f a regular function.
    DistributionSum plus_regular(double c, const Piecewise<A>& f) const
    {
        DistributionSum out(Piecewise<A>::linear_combination(1.0, regular_, c, f));
        for (const auto& a : atoms_) out.add_atom(a);
        return out;
    }

    friend DistributionSum operator+(const DistributionSum& l, const DistributionSum& r)
    {
        DistributionSum out(Piecewise<A>::linear_combination(1.0, l.regular_, 1.0, r.regular_));
        for (const auto& a : l.atoms_) out.add_atom(a);
        for (const auto& a : r.atoms_) out.add_atom(a);
        return out;
    }

private:
    Piecewise<A> regular_;
    std::vector<DeltaAtom> atoms_;
};

using Distribution1D = DistributionSum<Axis::line>;
using RadialDistribution = DistributionSum<Axis::radial>;

// ---------------------------------------------------------------------------
// Derivative jumps
// ---------------------------------------------------------------------------

/// Derivative jump f'(x+) - f'(x-) at one breakpoint, from the pieces' analytic
/// derivatives and from one-sided finite differences.
struct JumpEstimate {
    double location = 0.0;
    double analytic = 0.0;
    double finite_difference = 0.0;
};

namespace detail {

/// One-sided O(h^4) derivative from samples at x0 + {0,1,2,3,4} * h (h may be
/// negative for a left-sided stencil).
inline double one_sided_derivative(const std::function<double(double)>& f, double x0, double h)
{
    const double f0 = f(x0);
    const double f1 = f(x0 + h);
    const double f2 = f(x0 + 2.0 * h);
    const double f3 = f(x0 + 3.0 * h);
    const double f4 = f(x0 + 4.0 * h);
    return (-25.0 * f0 + 48.0 * f1 - 36.0 * f2 + 16.0 * f3 - 3.0 * f4) / (12.0 * h);
}

inline constexpr double kJumpAgreement = 1e-6;
inline constexpr double kContinuityTolerance = 1e-10;
inline constexpr int kFiniteDifferenceRefinements = 3;

template <Axis A>
std::vector<JumpEstimate> audit_jumps(const Piecewise<A>& f, const char* who)
{
    std::vector<JumpEstimate> out;
    const auto& bps = f.breakpoints();
    for (std::size_t i = 0; i < bps.size(); ++i) {
        const double x = bps[i];
        const SmoothPiece& left = f.pieces()[i];
        const SmoothPiece& right = f.pieces()[i + 1];
        const double vl = left.value(x);
        const double vr = right.value(x);
        if (std::abs(vl - vr) > kContinuityTolerance * std::max({1.0, std::abs(vl), std::abs(vr)})) {
            throw std::invalid_argument(std::string(who) +
                                        ": function is discontinuous at breakpoint " +
                                        std::to_string(x) + " (dipole atoms are not supported)");
        }
        const double scale = x != 0.0 ? std::abs(x) : 1.0;
        auto fd_jump = [&](double h) {
            return one_sided_derivative(right.value, x, h) - one_sided_derivative(left.value, x, -h);
        };
        JumpEstimate j{x, 0.0, fd_jump(1e-3 * scale)};
        if (left.d1 && right.d1) {
            const double dl = left.d1(x);
            const double dr = right.d1(x);
            j.analytic = dr - dl;
            const double ref = std::max({std::abs(dl), std::abs(dr), std::abs(j.analytic),
                                         std::numeric_limits<double>::min()});
            // Pieces varying on a scale much shorter than `scale` need a finer stencil.
            double h = 1e-3 * scale;
            for (int k = 0; k < kFiniteDifferenceRefinements &&
                            std::abs(j.analytic - j.finite_difference) > kJumpAgreement * ref;
                 ++k) {
                h *= 0.25;
                j.finite_difference = fd_jump(h);
            }
            if (std::abs(j.analytic - j.finite_difference) > kJumpAgreement * ref) {
                throw std::logic_error(std::string(who) + ": analytic derivative jump " +
                                       std::to_string(j.analytic) + " at " + std::to_string(x) +
                                       " disagrees with finite differences " +
                                       std::to_string(j.finite_difference));
            }
        } else {
            j.analytic = j.finite_difference;
        }
        out.push_back(j);
    }
    return out;
}

}  // namespace detail

/// Jumps of f' at every breakpoint of f. Rejects value-discontinuous f.
template <Axis A>
std::vector<JumpEstimate> derivative_jumps(const Piecewise<A>& f)
{
    return detail::audit_jumps(f, "derivative_jumps");
}

/// f'' in the sense of distributions: the classical second derivative off the
/// breakpoints plus a point atom of weight f'(x+) - f'(x-) at each breakpoint.
inline Distribution1D distributional_second_derivative_1d(const Piecewise1D& f)
{
    const auto jumps = detail::audit_jumps(f, "distributional_second_derivative_1d");
    std::vector<SmoothPiece> regular;
    for (const auto& p : f.pieces()) {
        if (!p.d2) {
            throw std::invalid_argument(
                "distributional_second_derivative_1d: every piece needs a second derivative");
        }
        regular.push_back({p.d2, {}, {}});
    }
    Distribution1D out(Piecewise1D(f.breakpoints(), std::move(regular)));
    for (const auto& j : jumps) out.add_atom({AtomKind::point, j.location, j.analytic});
    return out;
}

/// Laplacian in the plane of a radial piecewise function: f'' + f'/r off the
/// breakpoints plus a circle-layer atom of weight f'(R+) - f'(R-) at each
/// breakpoint R. Pieces must be regular at the origin.
inline RadialDistribution distributional_laplacian_radial(const RadialPiecewise& f)
{
    for (double r : f.breakpoints()) {
        if (!(r > 0.0)) {
            throw std::invalid_argument("distributional_laplacian_radial: breakpoint at r = 0");
        }
    }
    const auto jumps = detail::audit_jumps(f, "distributional_laplacian_radial");
    std::vector<SmoothPiece> regular;
    for (const auto& p : f.pieces()) {
        if (!p.d1 || !p.d2) {
            throw std::invalid_argument(
                "distributional_laplacian_radial: every piece needs two derivatives");
        }
        regular.push_back({[d1 = p.d1, d2 = p.d2](double r) {
                               return r > 0.0 ? d2(r) + d1(r) / r : 2.0 * d2(r);
                           },
                           {},
                           {}});
    }
    RadialDistribution out(RadialPiecewise(f.breakpoints(), std::move(regular)));
    for (const auto& j : jumps) out.add_atom({AtomKind::circle, j.location, j.analytic});
    return out;
}

// ---------------------------------------------------------------------------
// Brackets
// ---------------------------------------------------------------------------

/// <T, g> on the line for an arbitrary function g supported in [lo, hi].
/// Atoms outside [lo, hi] contribute nothing.
template <class G>
double pair_with_function(const Distribution1D& t, const G& g, double lo, double hi, double tol,
                          std::span<const double> extra_breakpoints = {})
{
    std::vector<double> hints = t.regular().breakpoints();
    hints.insert(hints.end(), extra_breakpoints.begin(), extra_breakpoints.end());
    const auto& reg = t.regular();
    double total = integrate_finite([&](double x) { return reg(x) * g(x); }, lo, hi, tol, hints).value;
    for (const auto& a : t.atoms()) {
        if (a.location >= lo && a.location <= hi) total += a.weight * g(a.location);
    }
    return total;
}

/// Schwartz bracket <T, phi> on the line.
inline double bracket(const Distribution1D& t, const Bump1D& phi, double tol)
{
    const double c = phi.center()[0];
    const double rho = phi.radius();
    std::vector<double> hints;
    if (phi.plateau() > 0.0) hints = {c - phi.plateau(), c + phi.plateau()};
    return pair_with_function(
        t, [&](double x) { return phi.value(x); }, c - rho, c + rho, tol, hints);
}

namespace detail {

/// int_0^{2 pi} g(r cos t, r sin t) dt for a function g supported in the disk
/// |x - c| <= rho. `g` takes the distance s = |x - c|.
template <class G>
double angular_integral(const G& profile_of_distance, double r, double d, double theta_c, double rho,
                        double tol)
{
    if (r == 0.0) return 2.0 * std::numbers::pi * profile_of_distance(d);
    double half_width = std::numbers::pi;
    if (d > 0.0) {
        if (r >= d + rho || r <= d - rho) return 0.0;
        if (r > rho - d) {
            const double c = (r * r + d * d - rho * rho) / (2.0 * r * d);
            half_width = std::acos(std::clamp(c, -1.0, 1.0));
        }
    }
    auto integrand = [&](double t) {
        const double s2 = r * r + d * d - 2.0 * r * d * std::cos(t - theta_c);
        return profile_of_distance(std::sqrt(std::max(s2, 0.0)));
    };
    if (half_width <= 0.0) return 0.0;
    return integrate_finite(integrand, theta_c - half_width, theta_c + half_width, tol).value;
}

}  // namespace detail

/// Integral over the plane of f(|x|) * phi(x) dx for a radial function f and a
/// (not necessarily origin-centred) bump.
template <class F>
double integrate_radial_against_bump(const F& f, const Bump2D& phi, double tol,
                                     std::span<const double> breakpoints = {})
{
    const double d = phi.center_distance_from_origin();
    const double rho = phi.radius();
    std::vector<double> hints(breakpoints.begin(), breakpoints.end());
    if (d == 0.0) {
        if (phi.plateau() > 0.0) hints.push_back(phi.plateau());
        return integrate_finite(
                   [&](double r) { return 2.0 * std::numbers::pi * f(r) * phi.profile(r) * r; }, 0.0,
                   rho, tol, hints)
            .value;
    }
    const double theta_c = std::atan2(phi.center()[1], phi.center()[0]);
    const double lo = std::max(0.0, d - rho);
    const double hi = d + rho;
    if (rho > d) hints.push_back(rho - d);
    auto profile = [&](double s) { return phi.profile(s); };
    return integrate_finite(
               [&](double r) {
                   return f(r) * detail::angular_integral(profile, r, d, theta_c, rho, 0.1 * tol) * r;
               },
               lo, hi, tol, hints)
        .value;
}

/// Schwartz bracket <T, phi> in the plane. A point atom contributes
/// weight * phi(0); a circle-layer atom at R contributes weight times the line
/// integral of phi over the circle |x| = R (2 pi R phi(R) for radial phi).
inline double bracket(const RadialDistribution& t, const Bump2D& phi, double tol)
{
    const auto& reg = t.regular();
    double total = integrate_radial_against_bump([&](double r) { return reg(r); }, phi, tol,
                                                 reg.breakpoints());
    const double d = phi.center_distance_from_origin();
    const double theta_c = d > 0.0 ? std::atan2(phi.center()[1], phi.center()[0]) : 0.0;
    auto profile = [&](double s) { return phi.profile(s); };
    for (const auto& a : t.atoms()) {
        if (a.kind == AtomKind::point) {
            total += a.weight * phi.value(Point<2>{0.0, 0.0});
        } else {
            const double around =
                d == 0.0 ? 2.0 * std::numbers::pi * phi.profile(a.location)
                         : detail::angular_integral(profile, a.location, d, theta_c, phi.radius(),
                                                    0.1 * tol);
            total += a.weight * a.location * around;
        }
    }
    return total;
}

/// Weight a circle-layer atom would carry under the radial-density convention
/// (total mass equal to the weight), given its weight under the line-measure
/// convention used by `bracket` (total mass 2 pi R times the weight).
inline double radial_density_weight(const DeltaAtom& circle)
{
    return 2.0 * std::numbers::pi * circle.location * circle.weight;
}

// ---------------------------------------------------------------------------
// Fundamental solution and mollifiers
// ---------------------------------------------------------------------------

/// Normalisation of K_0(b|x|) as the fundamental solution of -Laplacian + b^2
/// in the plane.
inline constexpr double kFundamentalSolutionConstant = 1.0 / (2.0 * std::numbers::pi);

namespace detail {

/// K_0 for the quadrature integrand; below the kernel's domain the two leading
/// terms of the small-argument expansion are exact to double precision.
inline double k0_for_integrand(double x)
{
    if (x < kBesselKMinArg) return -(std::log(0.5 * x) + std::numbers::egamma);
    return bessel_k_scaled(kOrder0, x) * std::exp(-x);
}

}  // namespace detail

/// < c K_0(b|x|), (-Laplacian + b^2) phi > with c = 1 / (2 pi); equals phi(0).
inline double fundamental_solution_check(double b, const Bump2D& phi, double tol = 1e-10)
{
    if (!(b > 0.0)) throw std::invalid_argument("fundamental_solution_check: b must be positive");
    const double d = phi.center_distance_from_origin();
    const double rho = phi.radius();
    auto operator_applied = [&](double s) {
        return -phi.radial_laplacian(s) + b * b * phi.profile(s);
    };
    std::vector<double> hints;
    if (phi.plateau() > 0.0) hints.push_back(phi.plateau());
    if (d == 0.0) {
        return integrate_finite(
                   [&](double r) { return detail::k0_for_integrand(b * r) * operator_applied(r) * r; },
                   0.0, rho, tol, hints)
            .value;
    }
    const double theta_c = std::atan2(phi.center()[1], phi.center()[0]);
    if (rho > d) hints.push_back(rho - d);
    return integrate_finite(
               [&](double r) {
                   return kFundamentalSolutionConstant * detail::k0_for_integrand(b * r) *
                          detail::angular_integral(operator_applied, r, d, theta_c, rho, 0.1 * tol) *
                          r;
               },
               std::max(0.0, d - rho), d + rho, tol, hints)
        .value;
}

namespace detail {

/// 2 pi int_0^1 exp(-1/(1-u^2)) u du
inline double mollifier_mass()
{
    static const double mass =
        integrate_finite(
            [](double u) { return 2.0 * std::numbers::pi * std::exp(-1.0 / (1.0 - u * u)) * u; },
            0.0, 1.0, 1e-15)
            .value;
    return mass;
}

}  // namespace detail

/// Unit-mass radial mollifier in the plane with support radius eps.
inline double mollifier(double s, double eps)
{
    const double u = s / eps;
    if (u >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u)) / (detail::mollifier_mass() * eps * eps);
}

/// L^2 distances || phi_n - psi || for phi_n = (psi restricted to |x| < n)
/// convolved with the mollifier of width 1/n.
inline std::vector<double> mollifier_sequence_check(const RadialPiecewise& psi,
                                                    std::span<const double> n_values,
                                                    double tol = 1e-10)
{
    std::vector<double> distances;
    for (double n : n_values) {
        if (!(n > 0.0)) throw std::invalid_argument("mollifier_sequence_check: n must be positive");
        const double eps = 1.0 / n;
        auto truncated = [&](double s) { return s < n ? psi(s) : 0.0; };

        std::vector<double> kinks = psi.breakpoints();
        kinks.push_back(n);

        // (truncated * eta)(r) = int_0^eps eta(s) s int_0^{2 pi} g(|x - y|) dtheta ds
        auto smoothed = [&](double r) {
            auto over_s = [&](double s) {
                if (r == 0.0 || s == 0.0) {
                    return mollifier(s, eps) * s * 2.0 * std::numbers::pi * truncated(std::max(r, s));
                }
                std::vector<double> angles;
                for (double k : kinks) {
                    const double c = (r * r + s * s - k * k) / (2.0 * r * s);
                    if (c > -1.0 && c < 1.0) angles.push_back(std::acos(c));
                }
                auto over_theta = [&](double t) {
                    const double dist2 = r * r + s * s - 2.0 * r * s * std::cos(t);
                    return truncated(std::sqrt(std::max(dist2, 0.0)));
                };
                const double inner =
                    2.0 * integrate_finite(over_theta, 0.0, std::numbers::pi, 0.01 * tol, angles).value;
                return mollifier(s, eps) * s * inner;
            };
            std::vector<double> s_hints;
            for (double k : kinks) {
                if (std::abs(r - k) < eps) s_hints.push_back(std::abs(r - k));
            }
            return integrate_finite(over_s, 0.0, eps, 0.01 * tol, s_hints).value;
        };

        std::vector<double> r_hints;
        for (double k : kinks) {
            r_hints.push_back(k);
            if (k - eps > 0.0) r_hints.push_back(k - eps);
            r_hints.push_back(k + eps);
        }
        const double outer = n + eps;
        const double inside =
            integrate_finite(
                [&](double r) {
                    const double diff = smoothed(r) - psi(r);
                    return 2.0 * std::numbers::pi * diff * diff * r;
                },
                0.0, outer, tol, r_hints)
                .value;
        const double tail =
            integrate_semiinfinite(
                [&](double r) {
                    const double v = psi(r);
                    return 2.0 * std::numbers::pi * v * v * r;
                },
                outer, tol)
                .value;
        distances.push_back(std::sqrt(std::max(inside + tail, 0.0)));
    }
    return distances;
}

}  // namespace deltawell
