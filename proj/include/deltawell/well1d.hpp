#pragma once

// The attractive delta well on the line, -(hbar^2/2m) psi'' - alpha delta psi = E psi,
// solved independently by direct integration of the equation, by distributional
// calculus, by the corrected quadratic form and by the pole of the resolvent.
// Every method solves for b = sqrt(2 m |E|) / hbar and derives E from it.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deltawell/distrib.hpp"
#include "deltawell/quad.hpp"
#include "deltawell/roots.hpp"

namespace deltawell {

class Params1D {
public:
    Params1D(double hbar, double mass, double alpha) : hbar_(hbar), mass_(mass), alpha_(alpha)
    {
        if (!(hbar > 0.0) || !(mass > 0.0) || !(alpha > 0.0) || !std::isfinite(hbar) ||
            !std::isfinite(mass) || !std::isfinite(alpha)) {
            throw std::invalid_argument("Params1D: hbar, mass and alpha must be finite and positive");
        }
    }

    double hbar() const noexcept { return hbar_; }
    double mass() const noexcept { return mass_; }
    double alpha() const noexcept { return alpha_; }

    /// hbar^2 / (2 m)
    double kinetic_scale() const noexcept { return hbar_ * hbar_ / (2.0 * mass_); }

    /// E = -hbar^2 b^2 / (2 m)
    double energy_from_b(double b) const noexcept { return -kinetic_scale() * b * b; }

private:
    double hbar_;
    double mass_;
    double alpha_;
};

enum class Method { closed_form, integration, distributional, quadratic_form, resolvent_pole };

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::integration: return "integration";
    case Method::distributional: return "distributional";
    case Method::quadratic_form: return "quadratic_form";
    case Method::resolvent_pole: return "resolvent_pole";
    }
    return "unknown";
}

inline constexpr std::array<Method, 5> kAllMethods = {Method::closed_form, Method::integration,
                                                      Method::distributional,
                                                      Method::quadratic_form, Method::resolvent_pole};

struct EnergyReport {
    Method method = Method::closed_form;
    double energy = 0.0;
    double b = 0.0;
    std::map<std::string, double> diagnostics;

    static EnergyReport from_b(Method method, const Params1D& p, double b,
                               std::map<std::string, double> diagnostics = {})
    {
        return {method, p.energy_from_b(b), b, std::move(diagnostics)};
    }
};

/// Truncation radius for integrals over the line, in units of 1/b.
inline constexpr double kTruncationInDecayLengths = 40.0;

/// Unit-normalised bound state sqrt(b) exp(-b |x|).
inline double psi_1d(double b, double x)
{
    if (!(b > 0.0)) throw std::invalid_argument("psi_1d: b must be positive");
    return std::sqrt(b) * std::exp(-b * std::abs(x));
}

/// psi_1d as a two-piece function with its kink at the origin.
inline Piecewise1D psi_1d_piecewise(double b)
{
    if (!(b > 0.0)) throw std::invalid_argument("psi_1d_piecewise: b must be positive");
    const double a = std::sqrt(b);
    SmoothPiece left{[a, b](double x) { return a * std::exp(b * x); },
                     [a, b](double x) { return b * a * std::exp(b * x); },
                     [a, b](double x) { return b * b * a * std::exp(b * x); }};
    SmoothPiece right{[a, b](double x) { return a * std::exp(-b * x); },
                      [a, b](double x) { return -b * a * std::exp(-b * x); },
                      [a, b](double x) { return b * b * a * std::exp(-b * x); }};
    return Piecewise1D({0.0}, {left, right});
}

/// -hbar^2 b^2 / 2m with b = m alpha / hbar^2, i.e. E = -m alpha^2 / (2 hbar^2).
inline EnergyReport energy_closed_form(const Params1D& p)
{
    return EnergyReport::from_b(Method::closed_form, p, p.mass() * p.alpha() / (p.hbar() * p.hbar()));
}

namespace detail {

// Relative precision of the inner quadratures and root solves. The tolerances
// passed to the estimators govern acceptance checks, not this.
inline constexpr double kInnerPrecision = 1e-13;

template <class F>
double solve_for_b(const F& f)
{
    const Bracket br = expand_bracket(f, 1.0);
    return find_root(f, br, kInnerPrecision * br.hi);
}

}  // namespace detail

/// Integrates the Schrodinger equation over the line term by term, for trial b:
///   -(hbar^2/2m) [psi']_{-X}^{X}  -  alpha psi(0)  +  |E| int psi dx  =  0
/// with |E| tied to b, and solves for b. X = 40 / b.
inline EnergyReport energy_integration(const Params1D& p, double tol = 1e-10)
{
    if (!(tol > 0.0)) throw std::invalid_argument("energy_integration: tol must be positive");
    struct Terms {
        double boundary = 0.0;
        double delta = 0.0;
        double integral = 0.0;
        double integral_error = 0.0;
    };
    auto terms = [&](double b) {
        const double x_max = kTruncationInDecayLengths / b;
        const auto psi = psi_1d_piecewise(b);
        Terms t;
        t.boundary = -p.kinetic_scale() * (psi.d1(x_max) - psi.d1(-x_max));
        t.delta = -p.alpha() * psi(0.0);
        const std::array<double, 1> kink{0.0};
        const auto q = integrate_finite([&](double x) { return psi(x); }, -x_max, x_max,
                                        detail::kInnerPrecision / std::sqrt(b), kink);
        t.integral = q.value;
        t.integral_error = q.error_estimate;
        return t;
    };
    auto residual = [&](double b) {
        const Terms t = terms(b);
        return t.boundary + t.delta + p.kinetic_scale() * b * b * t.integral;
    };
    const double b = detail::solve_for_b(residual);
    const Terms t = terms(b);
    const double x_max = kTruncationInDecayLengths / b;
    const double boundary_derivative = std::abs(psi_1d_piecewise(b).d1(x_max));
    if (boundary_derivative > std::max(tol, 1e-12) * b * std::sqrt(b)) {
        throw std::runtime_error("energy_integration: psi' does not vanish at the truncation radius");
    }
    return EnergyReport::from_b(Method::integration, p, b,
                                {{"boundary_term", t.boundary},
                                 {"boundary_derivative", boundary_derivative},
                                 {"delta_term", t.delta},
                                 {"psi_integral", t.integral},
                                 {"psi_integral_expected", 2.0 / std::sqrt(b)},
                                 {"psi_integral_error", t.integral_error},
                                 {"tail_bound", 2.0 / std::sqrt(b) * std::exp(-kTruncationInDecayLengths)},
                                 {"truncation_radius", x_max}});
}

/// H psi + |E| psi as a distribution for trial b: the regular parts cancel and
/// what remains is a point atom at the origin.
inline Distribution1D shifted_hamiltonian_1d(const Params1D& p, double b)
{
    const auto psi = psi_1d_piecewise(b);
    Distribution1D h = distributional_second_derivative_1d(psi).scaled(-p.kinetic_scale());
    h.add_atom({AtomKind::point, 0.0, -p.alpha() * psi(0.0)});
    return h.plus_regular(p.kinetic_scale() * b * b, psi);
}

/// (<H psi, phi> + |E| <psi, phi>) / (psi(0) phi(0)); equals hbar^2 b / m - alpha.
inline double distributional_coefficient(const Params1D& p, double b, const Bump1D& phi,
                                         double quad_tol = 1e-14)
{
    const double phi0 = phi.value(0.0);
    if (phi0 == 0.0) {
        throw std::invalid_argument("distributional_coefficient: test function vanishes at 0");
    }
    return bracket(shifted_hamiltonian_1d(p, b), phi, quad_tol) / (psi_1d(b, 0.0) * phi0);
}

/// Bumps centred at the origin with radii {0.5, 1, 2, 4, 8} / b_scale.
inline std::vector<Bump1D> default_bump_family_1d(double length_scale = 1.0)
{
    std::vector<Bump1D> out;
    for (double r : {0.5, 1.0, 2.0, 4.0, 8.0}) out.emplace_back(Point<1>{0.0}, r * length_scale);
    return out;
}

/// Solves <H psi, phi> = -|E| <psi, phi> for b, separately for every test
/// function in the family; the solutions must agree to `tol` (relative).
inline EnergyReport energy_distributional(const Params1D& p, std::span<const Bump1D> family,
                                          double tol = 1e-8)
{
    if (family.empty()) throw std::invalid_argument("energy_distributional: empty test family");
    for (const auto& phi : family) {
        if (phi.value(0.0) == 0.0) {
            throw std::invalid_argument("energy_distributional: every test function needs phi(0) != 0");
        }
    }
    std::vector<double> roots;
    double identity_residual = 0.0;
    for (const auto& phi : family) {
        auto coef = [&](double b) { return distributional_coefficient(p, b, phi); };
        const double b = detail::solve_for_b(coef);
        roots.push_back(b);
        for (double trial : {b, 2.0 * b}) {
            const double expected = p.hbar() * p.hbar() * trial / p.mass() - p.alpha();
            const double scale = std::max(p.alpha(), p.hbar() * p.hbar() * trial / p.mass());
            identity_residual =
                std::max(identity_residual, std::abs(coef(trial) - expected) / scale);
        }
    }
    const auto [lo, hi] = std::minmax_element(roots.begin(), roots.end());
    double mean = 0.0;
    for (double b : roots) mean += b;
    mean /= static_cast<double>(roots.size());
    const double spread = (*hi - *lo) / mean;
    if (spread > tol) {
        throw std::runtime_error("energy_distributional: b depends on the test function (spread " +
                                 std::to_string(spread) + ")");
    }
    if (identity_residual > tol) {
        throw std::runtime_error("energy_distributional: bracket does not reduce to "
                                 "(hbar^2 b / m - alpha) phi(0)");
    }
    return EnergyReport::from_b(Method::distributional, p, mean,
                                {{"family_size", static_cast<double>(roots.size())},
                                 {"family_spread", spread},
                                 {"identity_residual", identity_residual}});
}

inline EnergyReport energy_distributional(const Params1D& p, double tol = 1e-8)
{
    const auto family = default_bump_family_1d(p.hbar() * p.hbar() / (p.mass() * p.alpha()));
    return energy_distributional(p, family, tol);
}

/// Quadratic form <H psi, psi> = E <psi, psi> with psi itself in place of a test
/// function. The kinetic part uses the distributional second derivative, so the
/// kink contributes; the delta term is alpha |psi(0)|^2. After dividing by
/// |psi(0)|^2 = b the condition reads hbar^2 b / m - alpha = 0.
inline EnergyReport energy_quadratic_form(const Params1D& p)
{
    struct Parts {
        double kinetic = 0.0;
        double delta = 0.0;
        double norm = 0.0;
        double psi0_sq = 0.0;
    };
    auto parts = [&](double b) {
        const auto psi = psi_1d_piecewise(b);
        const double x_max = kTruncationInDecayLengths / b;
        const double q_tol = detail::kInnerPrecision * b;
        Parts out;
        out.kinetic = -p.kinetic_scale() *
                      pair_with_function(distributional_second_derivative_1d(psi), psi, -x_max,
                                         x_max, q_tol);
        out.psi0_sq = psi(0.0) * psi(0.0);
        out.delta = -p.alpha() * out.psi0_sq;
        const std::array<double, 1> kink{0.0};
        out.norm = integrate_finite([&](double x) { return psi(x) * psi(x); }, -x_max, x_max,
                                    detail::kInnerPrecision, kink)
                       .value;
        return out;
    };
    auto coefficient = [&](double b) {
        const Parts q = parts(b);
        return (q.kinetic + q.delta + p.kinetic_scale() * b * b * q.norm) / q.psi0_sq;
    };
    const double b = detail::solve_for_b(coefficient);
    const Parts q = parts(b);
    return EnergyReport::from_b(Method::quadratic_form, p, b,
                                {{"psi0_sq", q.psi0_sq},
                                 {"norm", q.norm},
                                 {"kinetic_form", q.kinetic},
                                 {"delta_form", q.delta}});
}

/// (H psi, psi) + |E| (psi, psi) using the classical second derivative only,
/// evaluated by quadrature. Equals -alpha b: the naive inner product can only
/// be consistent when alpha = 0 or b = 0. alpha = 0 (free case) is allowed here.
inline double naive_form_defect(double hbar, double mass, double alpha, double b)
{
    if (!(hbar > 0.0) || !(mass > 0.0) || !(alpha >= 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("naive_form_defect: requires hbar, mass, b > 0 and alpha >= 0");
    }
    const double kinetic_scale = hbar * hbar / (2.0 * mass);
    const auto psi = psi_1d_piecewise(b);
    const double x_max = kTruncationInDecayLengths / b;
    const std::array<double, 1> kink{0.0};
    const double classical =
        integrate_finite([&](double x) { return psi(x) * psi.d2(x); }, -x_max, x_max,
                         detail::kInnerPrecision * b * b, kink)
            .value;
    const double norm = integrate_finite([&](double x) { return psi(x) * psi(x); }, -x_max, x_max,
                                         detail::kInnerPrecision, kink)
                            .value;
    const double naive = -kinetic_scale * classical - alpha * psi(0.0) * psi(0.0);
    return naive + kinetic_scale * b * b * norm;
}

inline double naive_form_defect(const Params1D& p, double b)
{
    return naive_form_defect(p.hbar(), p.mass(), p.alpha(), b);
}

// ---------------------------------------------------------------------------
// Resolvent
// ---------------------------------------------------------------------------

/// Raised when the Green's function is evaluated at its pole.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline double resolvent_denominator(const Params1D& p, double b)
{
    return b * p.hbar() * p.hbar() - p.alpha() * p.mass();
}

inline void reject_pole(const Params1D& p, double b)
{
    const double d = resolvent_denominator(p, b);
    const double scale = std::max(b * p.hbar() * p.hbar(), p.alpha() * p.mass());
    if (std::abs(d) <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
        throw PoleError("greens_function: b is at the pole b = m alpha / hbar^2 = " +
                        std::to_string(p.mass() * p.alpha() / (p.hbar() * p.hbar())));
    }
}

}  // namespace detail

/// G(0) = m / (b hbar^2 - alpha m)
inline double greens_at_origin(const Params1D& p, double b)
{
    if (!(b > 0.0)) throw std::invalid_argument("greens_at_origin: b must be positive");
    detail::reject_pole(p, b);
    return p.mass() / detail::resolvent_denominator(p, b);
}

/// G(x) = m / (b hbar^2 - alpha m) exp(-b |x|)
inline double greens_function(const Params1D& p, double b, double x)
{
    return greens_at_origin(p, b) * std::exp(-b * std::abs(x));
}

/// Fourier transform of G (forward kernel exp(-2 pi i k x)):
/// (1 + alpha G(0)) / ((4 pi^2 hbar^2 / 2m) k^2 + |E|)
inline double greens_hat(const Params1D& p, double b, double k)
{
    const double numerator = 1.0 + p.alpha() * greens_at_origin(p, b);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return numerator / (4.0 * pi2 * p.kinetic_scale() * k * k + p.kinetic_scale() * b * b);
}

namespace detail {

/// int_R g(k) cos(2 pi k x) dk for an even g decaying like 1/k^2 with
/// derivative dg. The range is cut at K = n / |x| (a whole number of periods)
/// and the remainder is replaced by its leading integration-by-parts term
/// -g'(K) / (2 pi x)^2.
template <class G, class DG>
double even_cosine_transform(const G& g, const DG& dg, double x, double decay_scale, double tol)
{
    if (x == 0.0) return 2.0 * integrate_semiinfinite(g, 0.0, tol).value;
    const double ax = std::abs(x);
    const double periods = std::max(100.0, std::ceil(100.0 * decay_scale * ax));
    const double k_max = periods / ax;
    std::vector<double> half_periods;
    for (int i = 1; i < static_cast<int>(2.0 * periods); ++i) half_periods.push_back(0.5 * i / ax);
    const double omega = 2.0 * std::numbers::pi * ax;
    const double body =
        integrate_finite([&](double k) { return g(k) * std::cos(omega * k); }, 0.0, k_max, tol,
                         half_periods)
            .value;
    const double tail = -dg(k_max) / (omega * omega);
    return 2.0 * (body + tail);
}

}  // namespace detail

/// G(x) recovered by numerically inverting greens_hat.
inline double greens_function_from_transform(const Params1D& p, double b, double x,
                                             double tol = 1e-12)
{
    const double numerator = 1.0 + p.alpha() * greens_at_origin(p, b);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double c2 = 4.0 * pi2 * p.kinetic_scale();
    const double c0 = p.kinetic_scale() * b * b;
    auto g = [&](double k) { return numerator / (c2 * k * k + c0); };
    auto dg = [&](double k) {
        const double den = c2 * k * k + c0;
        return -numerator * 2.0 * c2 * k / (den * den);
    };
    return detail::even_cosine_transform(g, dg, x, b / (2.0 * std::numbers::pi), tol);
}

/// Locates the pole of G(0) in b by scanning its denominator b hbar^2 - alpha m.
inline EnergyReport energy_resolvent_pole(const Params1D& p, double tol = 1e-12)
{
    if (!(tol > 0.0)) throw std::invalid_argument("energy_resolvent_pole: tol must be positive");
    auto denominator = [&](double b) { return detail::resolvent_denominator(p, b); };
    double upper = 1.0;
    for (int i = 0; i < 200 && denominator(upper) <= 0.0; ++i) upper *= 2.0;
    const double b = pole_scan(denominator, 0.0, upper, std::min(tol, detail::kInnerPrecision) * upper);
    const double probe = b * (1.0 + 1e-6);
    return EnergyReport::from_b(Method::resolvent_pole, p, b,
                                {{"scan_upper", upper},
                                 {"denominator_at_pole", denominator(b)},
                                 {"abs_g0_near_pole", std::abs(greens_at_origin(p, probe))}});
}

/// int_R cos(2 pi k x) / (k^2 + a^2) dk - (pi / a) exp(-2 pi a |x|)
inline double fourier_identity_check(double a, double x, double tol = 1e-12)
{
    if (!(a > 0.0)) throw std::invalid_argument("fourier_identity_check: a must be positive");
    auto g = [a](double k) { return 1.0 / (k * k + a * a); };
    auto dg = [a](double k) {
        const double den = k * k + a * a;
        return -2.0 * k / (den * den);
    };
    const double numeric = detail::even_cosine_transform(g, dg, x, a, tol);
    return numeric - std::numbers::pi / a * std::exp(-2.0 * std::numbers::pi * a * std::abs(x));
}

/// All five estimators.
inline std::vector<EnergyReport> solve_all_1d(const Params1D& p, double tol = 1e-8)
{
    return {energy_closed_form(p), energy_integration(p, tol), energy_distributional(p, tol),
            energy_quadratic_form(p), energy_resolvent_pole(p)};
}

}  // namespace deltawell
