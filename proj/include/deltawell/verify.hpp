#pragma once

// Self-checks of the numerical machinery: Bessel identities, quadrature against
// closed forms, and distribution-theory identities. Used by the `verify`
// subcommand and by the test suites.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "deltawell/bessel.hpp"
#include "deltawell/distrib.hpp"
#include "deltawell/quad.hpp"
#include "deltawell/well1d.hpp"
#include "deltawell/well2d.hpp"

namespace deltawell {

struct CheckResult {
    std::string name;
    std::string method;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

namespace detail {

inline CheckResult at_most(std::string name, std::string method, double value, double tolerance)
{
    return {std::move(name), std::move(method), value, tolerance, std::abs(value) <= tolerance};
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline std::vector<CheckResult> verify_bessel()
{
    std::vector<CheckResult> out;

    double worst_wronskian = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = std::pow(10.0, -6.0 + 8.0 * i / 400.0);
        worst_wronskian = std::max(worst_wronskian, std::abs(wronskian_defect(x)) * x);
    }
    out.push_back(detail::at_most("wronskian_defect_times_x_max", "bessel", worst_wronskian, 1e-12));

    bool monotone = true;
    double prev_i = bessel_i(kOrder0, 1e-3);
    double prev_k = bessel_k(kOrder0, 1e-3);
    for (int i = 1; i <= 4000; ++i) {
        const double x = 1e-3 + (50.0 - 1e-3) * i / 4000.0;
        const double vi = bessel_i(kOrder0, x);
        const double vk = bessel_k(kOrder0, x);
        monotone = monotone && vi > prev_i && vk < prev_k;
        prev_i = vi;
        prev_k = vk;
    }
    out.push_back({"i0_increasing_k0_decreasing", "bessel", monotone ? 1.0 : 0.0, 0.0, monotone});

    // Branch agreement on both sides of each switchover.
    double worst_branch = 0.0;
    for (int nu = 0; nu < 2; ++nu) {
        const double xi = detail::kSeriesToAsymptotic;
        worst_branch = std::max(worst_branch, std::abs(detail::i_series(nu, xi) * std::exp(-xi) /
                                                            detail::i_asymptotic_scaled(nu, xi) -
                                                        1.0));
        double k0 = 0.0;
        double k1 = 0.0;
        double f0 = 0.0;
        double f1 = 0.0;
        const double xk = detail::kKSeriesToFraction;
        detail::k_series(xk, k0, k1);
        detail::k_fraction_scaled(xk, f0, f1);
        const double series = (nu == 0 ? k0 : k1) * std::exp(xk);
        worst_branch = std::max(worst_branch, std::abs(series / (nu == 0 ? f0 : f1) - 1.0));
        detail::k_fraction_scaled(xi, f0, f1);
        worst_branch = std::max(
            worst_branch, std::abs((nu == 0 ? f0 : f1) / detail::k_asymptotic_scaled(nu, xi) - 1.0));
    }
    out.push_back(detail::at_most("branch_switchover_agreement", "bessel", worst_branch, 1e-12));

    double worst_scaled = 0.0;
    for (double x : {1e-6, 0.1, 1.0, 5.0, 20.0, 50.0, 100.0, 300.0}) {
        for (int nu = 0; nu < 2; ++nu) {
            const BesselOrder o(nu);
            worst_scaled = std::max(
                worst_scaled, std::abs(bessel_i_scaled(o, x) * std::exp(x) / bessel_i(o, x) - 1.0));
            worst_scaled = std::max(
                worst_scaled, std::abs(bessel_k_scaled(o, x) * std::exp(-x) / bessel_k(o, x) - 1.0));
        }
    }
    out.push_back(detail::at_most("scaled_unscaled_consistency", "bessel", worst_scaled, 1e-13));
    return out;
}

// ---------------------------------------------------------------------------

inline std::vector<CheckResult> verify_quad(double tol = 1e-10)
{
    std::vector<CheckResult> out;
    const double pi = std::numbers::pi;

    out.push_back(detail::at_most(
        "exp_decay_finite", "integrate_finite",
        integrate_finite([](double x) { return std::exp(-2.0 * x); }, 0.0, 40.0, 1e-14).value - 0.5,
        std::max(tol, 1e-12)));
    out.push_back(detail::at_most(
        "lorentzian_half_line", "integrate_semiinfinite",
        integrate_semiinfinite([](double k) { return 1.0 / (k * k + 1.0); }, 0.0, 1e-13).value -
            0.5 * pi,
        tol));
    out.push_back(detail::at_most(
        "exp_half_line", "integrate_semiinfinite",
        integrate_semiinfinite([](double x) { return std::exp(-x); }, 0.0, 1e-13).value - 1.0, tol));
    out.push_back(detail::at_most(
        "gaussian_plane", "integrate_radial2d",
        integrate_radial2d([](double r) { return std::exp(-r * r); }, {}, 1e-14).value - pi,
        std::max(tol, 1e-12)));
    const std::array<double, 1> unit{1.0};
    out.push_back(detail::at_most(
        "unit_disk_area", "integrate_radial2d",
        integrate_radial2d([](double r) { return r < 1.0 ? 1.0 : 0.0; }, unit, 1e-14).value - pi,
        std::max(tol, 1e-12)));

    const double u = u0();
    const double i0 = bessel_i(kOrder0, u);
    const double i1 = bessel_i(kOrder1, u);
    const double k0 = bessel_k(kOrder0, u);
    const double k1 = bessel_k(kOrder1, u);
    const double inner =
        integrate_finite(
            [](double r) {
                const double v = bessel_i(kOrder0, r);
                return v * v * 2.0 * std::numbers::pi * r;
            },
            0.0, u, 1e-14)
            .value;
    out.push_back(detail::at_most("i0_square_disk", "integrate_finite",
                                  inner - pi * u * u * (i0 * i0 - i1 * i1), tol));
    const double tail =
        integrate_semiinfinite(
            [](double r) {
                const double v = bessel_k_scaled(kOrder0, r) * std::exp(-r);
                return v * v * r;
            },
            u, 1e-14)
            .value;
    out.push_back(detail::at_most("k0_square_tail", "integrate_semiinfinite",
                                  tail - 0.5 * u * u * (k1 * k1 - k0 * k0), tol));
    out.push_back(detail::at_most("psi_c_normalization", "integrate_radial2d",
                                  norm_check(Params2D(1.0, 1.0, 1.0, 1.0), 1e-13) - 1.0,
                                  std::max(tol, 1e-8)));
    return out;
}

// ---------------------------------------------------------------------------

/// A continuous piecewise function on the line with random kinks, each piece
/// a sin(k x) + c x^2 + d x + e; the constants e make it continuous.
inline Piecewise1D random_kinked_function(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> count(1, 3);
    const int kinks = count(rng);
    std::vector<double> bps;
    for (int i = 0; i < kinks; ++i) bps.push_back(unit(rng));
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    struct Coeffs {
        double a, k, c, d, e;
    };
    std::vector<Coeffs> cs;
    for (std::size_t i = 0; i <= bps.size(); ++i) {
        cs.push_back({unit(rng), 1.0 + 2.0 * std::abs(unit(rng)), unit(rng), 2.0 * unit(rng), 0.0});
    }
    auto raw = [](const Coeffs& q, double x) {
        return q.a * std::sin(q.k * x) + q.c * x * x + q.d * x + q.e;
    };
    cs[0].e = unit(rng);
    for (std::size_t i = 0; i < bps.size(); ++i) {
        cs[i + 1].e += raw(cs[i], bps[i]) - raw(cs[i + 1], bps[i]);
    }
    std::vector<SmoothPiece> pieces;
    for (const auto& q : cs) {
        pieces.push_back({[q, raw](double x) { return raw(q, x); },
                          [q](double x) { return q.a * q.k * std::cos(q.k * x) + 2.0 * q.c * x + q.d; },
                          [q](double x) { return -q.a * q.k * q.k * std::sin(q.k * x) + 2.0 * q.c; }});
    }
    return Piecewise1D(std::move(bps), std::move(pieces));
}

inline Bump1D random_bump_1d(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return Bump1D(Point<1>{-1.0 + 2.0 * unit(rng)}, 0.5 + 1.5 * unit(rng), 0.5 + unit(rng));
}

/// max over `pairs` random (f, phi) of |<f'', phi> - int f phi''|.
inline double integration_by_parts_defect(int pairs, std::uint64_t seed = 20240611)
{
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const auto f = random_kinked_function(rng);
        const auto phi = random_bump_1d(rng);
        const double lhs = bracket(distributional_second_derivative_1d(f), phi, 1e-12);
        const double c = phi.center()[0];
        const double rho = phi.radius();
        const double rhs =
            integrate_finite([&](double x) { return f(x) * phi.second_derivative(x); }, c - rho,
                             c + rho, 1e-12, f.breakpoints())
                .value;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

inline std::vector<CheckResult> verify_distrib(double tol = 1e-8)
{
    std::vector<CheckResult> out;
    out.push_back(detail::at_most("integration_by_parts_duality", "bracket",
                                  integration_by_parts_defect(10), tol));

    double worst_atom = 0.0;
    for (double b : {0.5, 1.0, 2.0}) {
        const auto d2 = distributional_second_derivative_1d(psi_1d_piecewise(b));
        const DeltaAtom* atom = d2.find_atom(AtomKind::point, 0.0);
        const double expected = -2.0 * b * std::sqrt(b);
        worst_atom = std::max(worst_atom, atom ? std::abs(atom->weight - expected) : 1.0);
    }
    out.push_back(detail::at_most("kink_atom_weight", "distributional_second_derivative_1d",
                                  worst_atom, 1e-10));

    const Params2D unit(1.0, 1.0, 1.0, 1.0);
    const auto jumps = jump_weight(unit);
    out.push_back(detail::at_most("circle_jump_fd_agreement", "distributional_laplacian_radial",
                                  (jumps.analytic - jumps.finite_difference) / jumps.analytic, 1e-6));

    const std::vector<double> ns{4.0, 8.0, 16.0, 32.0};
    const auto distances = mollifier_sequence_check(make_psi2d(unit).representation, ns, 1e-9);
    bool decreasing = true;
    for (std::size_t i = 1; i < distances.size(); ++i) decreasing = decreasing && distances[i] < distances[i - 1];
    out.push_back({"mollifier_distances_decrease", "mollifier_sequence_check", distances.back(), 0.0,
                   decreasing});

    double worst_fundamental = 0.0;
    for (double b : {0.5, 1.0, 2.0}) {
        worst_fundamental = std::max(
            worst_fundamental,
            std::abs(fundamental_solution_check(b, Bump2D(Point<2>{0.0, 0.0}, 1.0)) - 1.0));
    }
    worst_fundamental = std::max(
        worst_fundamental, std::abs(fundamental_solution_check(1.0, Bump2D(Point<2>{2.0, 1.0}, 1.0))));
    out.push_back(detail::at_most("fundamental_solution", "fundamental_solution_check",
                                  worst_fundamental, 1e-6));
    return out;
}

}  // namespace deltawell
