#pragma once

// The delta well in the plane. The bound state is the continuous radial function
//
//   psi_c(r) = N I_0(b r)   for r <= R,
//   psi_c(r) = N K_0(b r)   for r >= R,
//
// matched at b R = u_0, the unique positive root of I_0 = K_0, with
// N = 1 / (sqrt(pi) R beta) and beta^2 = K_1(u_0)^2 - I_1(u_0)^2. The cutoff
// radius R is the free length scale; b and N follow from it.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "deltawell/bessel.hpp"
#include "deltawell/distrib.hpp"
#include "deltawell/quad.hpp"
#include "deltawell/roots.hpp"

namespace deltawell {

class Params2D {
public:
    Params2D(double hbar, double mass, double alpha, double radius)
        : hbar_(hbar), mass_(mass), alpha_(alpha), radius_(radius)
    {
        if (!(hbar > 0.0) || !(mass > 0.0) || !(radius > 0.0) || !std::isfinite(hbar) ||
            !std::isfinite(mass) || !std::isfinite(radius)) {
            throw std::invalid_argument("Params2D: hbar, mass and R must be finite and positive");
        }
        if (alpha == 0.0 || !std::isfinite(alpha)) {
            throw std::invalid_argument("Params2D: alpha must be finite and nonzero");
        }
    }

    double hbar() const noexcept { return hbar_; }
    double mass() const noexcept { return mass_; }
    double alpha() const noexcept { return alpha_; }
    double radius() const noexcept { return radius_; }
    double kinetic_scale() const noexcept { return hbar_ * hbar_ / (2.0 * mass_); }

    /// b = u_0 / R
    double b() const { return u0() / radius_; }

private:
    double hbar_;
    double mass_;
    double alpha_;
    double radius_;
};

/// K_1(u)^2 - I_1(u)^2
inline double beta_sq(double u)
{
    if (!(u > 0.0)) throw std::invalid_argument("beta_sq: argument must be positive");
    const double k1 = bessel_k(kOrder1, u);
    const double i1 = bessel_i(kOrder1, u);
    return k1 * k1 - i1 * i1;
}

/// beta at the matching point u_0.
inline double matching_beta()
{
    static const double value = std::sqrt(beta_sq(u0()));
    return value;
}

/// N = b / (sqrt(pi) u_0 beta) = 1 / (sqrt(pi) R beta)
inline double norm_constant(const Params2D& p)
{
    return 1.0 / (std::sqrt(std::numbers::pi) * p.radius() * matching_beta());
}

struct Psi2D {
    Params2D params;
    double u0 = 0.0;
    double beta = 0.0;
    double b = 0.0;
    double norm = 0.0;
    RadialPiecewise representation;
};

/// psi_c with its two analytic pieces and the single breakpoint r = R.
inline Psi2D make_psi2d(const Params2D& p)
{
    const double b = p.b();
    const double n = norm_constant(p);
    SmoothPiece inside{
        [n, b](double r) { return n * bessel_i(kOrder0, b * r); },
        [n, b](double r) { return n * b * bessel_i(kOrder1, b * r); },
        [n, b](double r) {
            // I_1'(x) = I_0(x) - I_1(x) / x, with I_1(x) / x -> 1/2 at 0.
            const double x = b * r;
            const double ratio = x > 0.0 ? bessel_i(kOrder1, x) / x : 0.5;
            return n * b * b * (bessel_i(kOrder0, x) - ratio);
        }};
    SmoothPiece outside{
        [n, b](double r) { return n * bessel_k_scaled(kOrder0, b * r) * std::exp(-b * r); },
        [n, b](double r) { return -n * b * bessel_k_scaled(kOrder1, b * r) * std::exp(-b * r); },
        [n, b](double r) {
            // K_1'(x) = -K_0(x) - K_1(x) / x
            const double x = b * r;
            const double e = std::exp(-x);
            return n * b * b *
                   (bessel_k_scaled(kOrder0, x) + bessel_k_scaled(kOrder1, x) / x) * e;
        }};
    return Psi2D{p, u0(), matching_beta(), b, n,
                 RadialPiecewise({p.radius()}, {std::move(inside), std::move(outside)})};
}

inline double psi_c_radial(const Params2D& p, double r)
{
    if (!(r >= 0.0)) throw std::invalid_argument("psi_c_radial: radius must be >= 0");
    const double b = p.b();
    const double n = norm_constant(p);
    if (r <= p.radius()) return n * bessel_i(kOrder0, b * r);
    return n * bessel_k_scaled(kOrder0, b * r) * std::exp(-b * r);
}

inline double psi_c(const Params2D& p, const Point<2>& x)
{
    return psi_c_radial(p, std::hypot(x[0], x[1]));
}

/// 2 pi [ int_0^R I_0(b r)^2 r dr + int_R^inf K_0(b r)^2 r dr ], which equals
/// pi R^2 beta^2 because I_0(u_0) = K_0(u_0).
inline double bessel_square_integral(const Params2D& p, double tol = 1e-12)
{
    const double b = p.b();
    const double radius = p.radius();
    const double inner =
        integrate_finite(
            [b](double r) {
                const double v = bessel_i(kOrder0, b * r);
                return 2.0 * std::numbers::pi * v * v * r;
            },
            0.0, radius, 0.5 * tol * radius * radius)
            .value;
    const double outer =
        integrate_semiinfinite(
            [b](double r) {
                const double v = bessel_k_scaled(kOrder0, b * r) * std::exp(-b * r);
                return 2.0 * std::numbers::pi * v * v * r;
            },
            radius, 0.5 * tol * radius * radius)
            .value;
    return inner + outer;
}

/// || psi_c ||^2 by radial quadrature; equals 1.
inline double norm_check(const Params2D& p, double tol = 1e-12)
{
    const auto psi = make_psi2d(p);
    const std::array<double, 1> kink{p.radius()};
    return integrate_radial2d(
               [&](double r) {
                   const double v = psi.representation(r);
                   return v * v;
               },
               kink, tol)
        .value;
}

/// Guard band around r = 0 and r = R, in units of R.
inline constexpr double kHelmholtzGuard = 1e-3;

/// (-psi'' - psi'/r + b^2 psi) / max(|b^2 psi|, 1) at each radius, with the
/// derivatives taken by 5-point central differences on psi_c itself.
inline std::vector<double> helmholtz_residual(const Params2D& p, std::span<const double> radii)
{
    const double radius = p.radius();
    const double b = p.b();
    std::vector<double> out;
    for (double r : radii) {
        const double to_circle = std::abs(r - radius);
        if (!(r >= kHelmholtzGuard * radius) || to_circle < kHelmholtzGuard * radius) {
            throw std::invalid_argument("helmholtz_residual: radius " + std::to_string(r) +
                                        " lies inside a guard band");
        }
        const double h = std::min({1e-2 * radius, 0.25 * to_circle, 0.25 * r});
        auto f = [&](double x) { return psi_c_radial(p, x); };
        const double fm2 = f(r - 2.0 * h);
        const double fm1 = f(r - h);
        const double f0 = f(r);
        const double fp1 = f(r + h);
        const double fp2 = f(r + 2.0 * h);
        const double d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        const double d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        const double source = b * b * f0;
        out.push_back((-d2 - d1 / r + source) / std::max(std::abs(source), 1.0));
    }
    return out;
}

/// `count` log-spaced radii in [0.05 R, 10 R], minus any that fall inside the
/// guard band around R.
inline std::vector<double> helmholtz_sample_radii(double radius, int count = 50)
{
    std::vector<double> out;
    const double lo = std::log(0.05);
    const double hi = std::log(10.0);
    for (int i = 0; i < count; ++i) {
        const double r = radius * std::exp(lo + (hi - lo) * i / (count - 1));
        if (std::abs(r - radius) > kHelmholtzGuard * radius) out.push_back(r);
    }
    return out;
}

/// Derivative jump of psi_c across r = R, three ways.
struct JumpWeights {
    /// psi'(R+) - psi'(R-) = N b (-K_1(u_0) - I_1(u_0)) from I_0' = I_1, K_0' = -K_1
    double analytic = 0.0;
    /// the same jump from one-sided finite differences of the pieces
    double finite_difference = 0.0;
    /// N b (K_1(u_0) - I_1(u_0)), the combination that multiplies
    /// (hbar^2 / 2m) delta(r - R) in the closed-form C-spectrum energy; it
    /// implies a jump of -paper_combination
    double paper_combination = 0.0;
};

inline JumpWeights jump_weight(const Params2D& p)
{
    const auto psi = make_psi2d(p);
    const double u = psi.u0;
    const double k1 = bessel_k(kOrder1, u);
    const double i1 = bessel_i(kOrder1, u);
    const auto jumps = derivative_jumps(psi.representation);
    return {psi.norm * psi.b * (-k1 - i1), jumps.front().finite_difference,
            psi.norm * psi.b * (k1 - i1)};
}

/// E^C = -m alpha^2 / (2 pi^2 [K_1(u_0) - I_1(u_0)]^2 R^2 hbar^2)
inline double c_spectrum_paper(const Params2D& p)
{
    const double u = u0();
    const double diff = bessel_k(kOrder1, u) - bessel_i(kOrder1, u);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return -p.mass() * p.alpha() * p.alpha() /
           (2.0 * pi2 * diff * diff * p.radius() * p.radius() * p.hbar() * p.hbar());
}

// ---------------------------------------------------------------------------
// C-spectrum from the bracket
// ---------------------------------------------------------------------------

enum class JumpConvention {
    derived,  ///< jump N b (-K_1 - I_1) from the derivative identities
    paper     ///< the combination behind the closed-form E^C, jump N b (I_1 - K_1)
};

inline const char* to_string(JumpConvention c)
{
    return c == JumpConvention::derived ? "derived" : "paper";
}

struct CSpectrumResult {
    JumpConvention convention = JumpConvention::derived;
    bool has_solution = false;
    double b_star = 0.0;
    double energy = 0.0;
    double family_spread = 0.0;
    std::vector<double> per_function_b;
    /// largest |<regular part of H psi_c - E psi_c, phi>| over the family
    double regular_bracket = 0.0;
    /// circle atom weight per unit b, line-measure and radial-density conventions
    double circle_weight_per_b = 0.0;
    double circle_weight_per_b_radial_density = 0.0;
    double point_weight = 0.0;
};

/// Raised when the solved b depends on the test function beyond tolerance.
class FamilySpreadError : public std::runtime_error {
public:
    FamilySpreadError(const std::string& what, CSpectrumResult derived, CSpectrumResult paper)
        : std::runtime_error(what), derived_(std::move(derived)), paper_(std::move(paper))
    {
    }
    const CSpectrumResult& derived() const noexcept { return derived_; }
    const CSpectrumResult& paper() const noexcept { return paper_; }

private:
    CSpectrumResult derived_;
    CSpectrumResult paper_;
};

/// Test functions equal to 1 on a disk containing the matching circle, so that
/// phi(0) = phi(R); they sample both the origin and r = R.
inline std::vector<Bump2D> default_c_spectrum_family(double radius)
{
    std::vector<Bump2D> out;
    for (double plateau : {1.5, 2.0, 3.0}) {
        for (double width : {0.5, 2.0}) {
            out.emplace_back(Point<2>{0.0, 0.0}, (plateau + width) * radius, 1.0, plateau * radius);
        }
    }
    return out;
}

namespace detail {

/// Solves <H psi_c - E psi_c, phi> = 0 for b with every phi in the family. The
/// regular part of H psi_c - E psi_c is built at b_0 = u_0 / R (where it
/// vanishes); the circle atom is -hbar^2/2m times the derivative jump, which is
/// proportional to b, and the point atom is -alpha psi_c(0) = -alpha N.
inline CSpectrumResult c_spectrum_solve(const Psi2D& psi, double alpha,
                                        std::span<const Bump2D> family, JumpConvention convention,
                                        double quad_tol)
{
    const Params2D& p = psi.params;
    const double radius = p.radius();
    const auto laplacian = distributional_laplacian_radial(psi.representation);
    const DeltaAtom* circle = laplacian.find_atom(AtomKind::circle, radius);
    if (circle == nullptr) throw std::logic_error("c_spectrum: psi_c has no kink at R");

    const double u = psi.u0;
    const double k1 = bessel_k(kOrder1, u);
    const double i1 = bessel_i(kOrder1, u);
    const double jump = convention == JumpConvention::derived ? circle->weight
                                                               : -psi.norm * psi.b * (k1 - i1);
    const double jump_per_b = jump / psi.b;

    const double abs_e0 = p.kinetic_scale() * psi.b * psi.b;
    const RadialDistribution regular =
        RadialDistribution(laplacian.regular()).scaled(-p.kinetic_scale()).plus_regular(abs_e0,
                                                                                        psi.representation);
    const double point_weight = -alpha * psi.representation(0.0);

    CSpectrumResult result;
    result.convention = convention;
    result.circle_weight_per_b = -p.kinetic_scale() * jump_per_b;
    result.circle_weight_per_b_radial_density =
        radial_density_weight({AtomKind::circle, radius, result.circle_weight_per_b});
    result.point_weight = point_weight;

    for (const auto& phi : family) {
        const double reg = bracket(regular, phi, quad_tol);
        result.regular_bracket = std::max(result.regular_bracket, std::abs(reg));
        auto residual = [&](double b) {
            RadialDistribution t = regular;
            t.add_atom({AtomKind::circle, radius, -p.kinetic_scale() * jump_per_b * b});
            if (point_weight != 0.0) t.add_atom({AtomKind::point, 0.0, point_weight});
            return bracket(t, phi, quad_tol);
        };
        // The residual is affine in b and may vanish for either sign of b.
        double span = psi.b;
        double f_lo = residual(-span);
        double f_hi = residual(span);
        for (int i = 0; i < 80 && f_lo * f_hi > 0.0; ++i) {
            span *= 4.0;
            f_lo = residual(-span);
            f_hi = residual(span);
        }
        if (f_lo * f_hi > 0.0) {
            result.per_function_b.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        result.per_function_b.push_back(
            find_root(residual, Bracket{-span, span, f_lo, f_hi}, 1e-14 * span));
    }

    const auto& bs = result.per_function_b;
    if (std::any_of(bs.begin(), bs.end(), [](double b) { return std::isnan(b); })) {
        result.family_spread = std::numeric_limits<double>::infinity();
        return result;
    }
    const auto [lo, hi] = std::minmax_element(bs.begin(), bs.end());
    double mean = 0.0;
    for (double b : bs) mean += b;
    mean /= static_cast<double>(bs.size());
    result.b_star = std::abs(mean);
    // b = 0 is the trivial solution psi = 0: no bound state.
    result.has_solution = result.b_star > 1e-8 * psi.b;
    result.family_spread = result.has_solution ? (*hi - *lo) / result.b_star : 0.0;
    result.energy = result.has_solution ? -p.kinetic_scale() * result.b_star * result.b_star : 0.0;
    return result;
}

}  // namespace detail

/// Both jump conventions without the spread check.
inline std::pair<CSpectrumResult, CSpectrumResult> c_spectrum_bracket_both(
    const Params2D& p, double alpha, std::span<const Bump2D> family, double quad_tol = 1e-13)
{
    const auto psi = make_psi2d(p);
    return {detail::c_spectrum_solve(psi, alpha, family, JumpConvention::derived, quad_tol),
            detail::c_spectrum_solve(psi, alpha, family, JumpConvention::paper, quad_tol)};
}

/// b and E^C = -(hbar^2 / 2m) |b|^2 from <H psi_c - E psi_c, phi> = 0 over a
/// test family. `alpha` may differ from p.alpha() (including 0, the free case).
/// Throws FamilySpreadError, carrying both conventions, when the family
/// disagrees by more than tol.
inline CSpectrumResult c_spectrum_bracket(const Params2D& p, double alpha,
                                          std::span<const Bump2D> family, double tol,
                                          JumpConvention convention)
{
    if (family.empty()) throw std::invalid_argument("c_spectrum_bracket: empty test family");
    for (const auto& phi : family) {
        if (phi.value(Point<2>{0.0, 0.0}) == 0.0) {
            throw std::invalid_argument("c_spectrum_bracket: every test function must sample the origin");
        }
    }
    const auto psi = make_psi2d(p);
    const double quad_tol = std::min(1e-13, 1e-3 * tol);
    auto result = detail::c_spectrum_solve(psi, alpha, family, convention, quad_tol);
    if (result.has_solution && result.family_spread > tol) {
        const auto other = detail::c_spectrum_solve(
            psi, alpha, family,
            convention == JumpConvention::derived ? JumpConvention::paper : JumpConvention::derived,
            quad_tol);
        const auto& derived = convention == JumpConvention::derived ? result : other;
        const auto& paper = convention == JumpConvention::derived ? other : result;
        throw FamilySpreadError("c_spectrum_bracket: b depends on the test function (spread " +
                                    std::to_string(result.family_spread) + ")",
                                derived, paper);
    }
    return result;
}

inline CSpectrumResult c_spectrum_bracket(const Params2D& p, std::span<const Bump2D> family,
                                          double tol, JumpConvention convention)
{
    return c_spectrum_bracket(p, p.alpha(), family, tol, convention);
}

inline CSpectrumResult c_spectrum_bracket(const Params2D& p, double tol,
                                          JumpConvention convention)
{
    const auto family = default_c_spectrum_family(p.radius());
    return c_spectrum_bracket(p, family, tol, convention);
}

}  // namespace deltawell
