// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "deltawell/distrib.hpp"
#include "deltawell/roots.hpp"
#include "deltawell/verify.hpp"
#include "deltawell/well1d.hpp"
#include "deltawell/well2d.hpp"

using namespace deltawell;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome u0_digits()
{
    const auto t0 = std::chrono::steady_clock::now();
    const double u = crossing_u0(1e-12);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const std::string digits = fmt("%.17g", u);
    const bool ok = digits.rfind("0.4322837", 0) == 0 && ms < 1.0;
    return {ok, fmt("u0 = %s, %.3f ms (need prefix 0.4322837, < 1 ms)", digits.c_str(), ms)};
}

Outcome cross_method_1d()
{
    double worst = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (double hbar : {0.5, 1.0, 2.0}) {
        for (double mass : {0.5, 1.0, 2.0}) {
            for (double alpha : {0.5, 1.0, 2.0}) {
                const double exact = -mass * alpha * alpha / (2.0 * hbar * hbar);
                for (const auto& r : solve_all_1d(Params1D(hbar, mass, alpha))) {
                    worst = std::max(worst, rel(r.energy, exact));
                }
            }
        }
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-8 && s < 5.0,
            fmt("27 points x 5 methods, max rel dev %.3g (<= 1e-8), %.3f s (< 5 s)", worst, s)};
}

Outcome normalization_2d()
{
    double worst = 0.0;
    int n = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (double hbar : {0.5, 2.0}) {
        for (double mass : {0.5, 2.0}) {
            for (double alpha : {-1.0, 3.0}) {
                for (double radius : {0.25, 1.0, 4.0}) {
                    worst = std::max(worst, std::abs(norm_check(Params2D(hbar, mass, alpha, radius)) - 1.0));
                    ++n;
                }
            }
        }
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {n == 24 && worst <= 1e-8 && s < 10.0,
            fmt("%d combinations, max |norm - 1| %.3g (<= 1e-8), %.3f s (< 10 s)", n, worst, s)};
}

Outcome beta_identity()
{
    double worst = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    const double b2 = beta_sq(u0());
    for (double radius : {0.5, 1.0, 2.0}) {
        const double closed = std::numbers::pi * radius * radius * b2;
        worst = std::max(worst, std::abs(bessel_square_integral(Params2D(1, 1, 1, radius)) - closed));
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-10 && s < 1.0,
            fmt("pieces vs pi R^2 beta^2 at R in {0.5,1,2}: max abs diff %.3g (<= 1e-10), %.3f s", worst, s)};
}

Outcome helmholtz()
{
    double worst = 0.0;
    std::size_t count = 0;
    for (double radius : {1.0, 2.5}) {
        const auto radii = helmholtz_sample_radii(radius);
        count = std::max(count, radii.size());
        for (double r : helmholtz_residual(Params2D(1, 1, 1, radius), radii)) worst = std::max(worst, std::abs(r));
    }
    return {worst <= 1e-6 && count == 50,
            fmt("%zu radii in [0.05R, 10R], max |residual| %.3g (<= 1e-6)", count, worst)};
}

Outcome continuity()
{
    double worst = 0.0;
    for (double radius : {0.1, 1.0, 3.0, 10.0}) {
        const auto psi = make_psi2d(Params2D(1, 1, 1, radius));
        worst = std::max(worst, rel(psi.representation.pieces()[0].value(radius),
                                    psi.representation.pieces()[1].value(radius)));
    }
    return {worst <= 1e-13, fmt("max rel gap at r = R %.3g (<= 1e-13)", worst)};
}

Outcome resolvent()
{
    const Params1D unit(1, 1, 1);
    const double g0 = greens_at_origin(unit, 2.0);
    double worst_inv = 0.0;
    for (double x : {-3.0, -1.2, -0.5, -0.1, 0.05, 0.3, 0.7, 1.0, 2.0, 4.0}) {
        worst_inv = std::max(worst_inv, std::abs(greens_function_from_transform(unit, 2.0, x) -
                                                 greens_function(unit, 2.0, x)));
    }
    double worst_pole = 0.0;
    for (double hbar : {0.5, 1.0, 2.0}) {
        for (double mass : {1.0, 2.0}) {
            for (double alpha : {1.0, 3.0}) {
                const double expected = mass * alpha / (hbar * hbar);
                worst_pole = std::max(
                    worst_pole, rel(energy_resolvent_pole(Params1D(hbar, mass, alpha)).b, expected));
            }
        }
    }
    return {g0 == 1.0 && worst_inv <= 1e-8 && worst_pole <= 1e-10,
            fmt("G(0) = %.17g (== 1); inverse transform max err %.3g at 10 points (<= 1e-8); "
                "pole rel err %.3g (<= 1e-10)",
                g0, worst_inv, worst_pole)};
}

Outcome fourier()
{
    const double pi = std::numbers::pi;
    const std::pair<double, double> pairs[] = {{1.0, 0.0},  {1.0 / (2.0 * pi), 1.0}, {2.0, 0.3},
                                               {0.05, 0.7}, {0.5, -1.5},             {3.0, 0.01},
                                               {0.2, 4.0},  {1.0, 2.0},              {10.0, 0.05},
                                               {0.01, 10.0}};
    double worst = 0.0;
    for (auto [a, x] : pairs) worst = std::max(worst, std::abs(fourier_identity_check(a, x)));
    return {worst <= 1e-8, fmt("10 (a, x) pairs, max |quadrature - closed form| %.3g (<= 1e-8)", worst)};
}

Outcome duality()
{
    const double defect = integration_by_parts_defect(10);
    double worst_atom = 0.0;
    for (double b : {0.5, 1.0, 2.0}) {
        const auto d2 = distributional_second_derivative_1d(psi_1d_piecewise(b));
        const DeltaAtom* atom = d2.find_atom(AtomKind::point, 0.0);
        worst_atom = std::max(worst_atom, atom ? std::abs(atom->weight + 2.0 * b * std::sqrt(b)) : 1.0);
    }
    return {defect <= 1e-8 && worst_atom <= 1e-10,
            fmt("10 random pairs, max |<f'',phi> - int f phi''| %.3g (<= 1e-8); "
                "atom weight err %.3g (<= 1e-10)",
                defect, worst_atom)};
}

Outcome jump_audit()
{
    double worst_jump = 0.0;
    double worst_ec = 0.0;
    for (double radius : {0.5, 1.0, 2.0}) {
        const Params2D p(1, 1, 1, radius);
        const auto j = jump_weight(p);
        worst_jump = std::max(worst_jump, rel(j.finite_difference, j.analytic));
        const auto r = c_spectrum_bracket(p, 1e-8, JumpConvention::paper);
        worst_ec = std::max(worst_ec, r.has_solution ? rel(r.energy, c_spectrum_paper(p)) : 1.0);
    }
    const auto unit = jump_weight(Params2D(1, 1, 1, 1));
    return {worst_jump <= 1e-6 && worst_ec <= 1e-8,
            fmt("analytic vs FD jump rel %.3g (<= 1e-6) [analytic %.10g, K1-I1 combination %.10g]; "
                "bracket vs E^C rel %.3g (<= 1e-8)",
                worst_jump, unit.analytic, unit.paper_combination, worst_ec)};
}

Outcome scaling()
{
    const Params2D base(1.1, 1.3, 0.7, 0.9);
    const double e = c_spectrum_paper(base);
    const double da = std::abs(c_spectrum_paper(Params2D(1.1, 1.3, 2.1, 0.9)) / e - 9.0) / 9.0;
    const double dr = std::abs(c_spectrum_paper(Params2D(1.1, 1.3, 0.7, 2.7)) / e - 1.0 / 9.0) * 9.0;
    const double dh = std::abs(c_spectrum_paper(Params2D(2.2, 1.3, 0.7, 0.9)) / e - 0.25) * 4.0;
    const double worst = std::max({da, dr, dh});
    return {worst <= 1e-12, fmt("alpha^2, R^-2, hbar^-2 ratio errors %.3g %.3g %.3g (<= 1e-12)", da, dr, dh)};
}

Outcome mollifier_convergence()
{
    const std::vector<double> ns{4.0, 8.0, 16.0, 32.0};
    const auto d = mollifier_sequence_check(make_psi2d(Params2D(1, 1, 1, 1)).representation, ns);
    bool decreasing = true;
    for (std::size_t i = 1; i < d.size(); ++i) decreasing = decreasing && d[i] < d[i - 1];
    return {decreasing, fmt("L2 distances %.4g > %.4g > %.4g > %.4g", d[0], d[1], d[2], d[3])};
}

}  // namespace

int main()
{
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    // u0 runs first so that the timing excludes nothing but its own work.
    const Criterion criteria[] = {
        {"u0 crossing", u0_digits},
        {"1D cross-method agreement", cross_method_1d},
        {"2D normalization", normalization_2d},
        {"beta^2 identity", beta_identity},
        {"Helmholtz residual", helmholtz},
        {"continuity at R", continuity},
        {"resolvent structure", resolvent},
        {"Fourier identity", fourier},
        {"distributional duality", duality},
        {"jump-convention audit", jump_audit},
        {"E^C scaling laws", scaling},
        {"mollifier convergence", mollifier_convergence},
    };
    int failures = 0;
    int index = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& c : criteria) {
        ++index;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/%d criteria passed in %.2f s\n", index - failures, index, s);
    return failures == 0 ? 0 : 1;
}
