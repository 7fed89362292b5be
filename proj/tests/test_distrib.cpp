#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "deltawell/distrib.hpp"
#include "deltawell/verify.hpp"
#include "deltawell/well1d.hpp"
#include "deltawell/well2d.hpp"

using namespace deltawell;
constexpr double pi = std::numbers::pi;

namespace {

Piecewise1D abs_x()
{
    return Piecewise1D({0.0}, {{[](double x) { return -x; }, [](double) { return -1.0; },
                                [](double) { return 0.0; }},
                               {[](double x) { return x; }, [](double) { return 1.0; },
                                [](double) { return 0.0; }}});
}

RadialPiecewise tent()
{
    auto zero = [](double) { return 0.0; };
    return RadialPiecewise({1.0}, {{[](double r) { return 1.0 - r; }, [](double) { return -1.0; }, zero},
                                   {zero, zero, zero}});
}

}  // namespace

TEST(BumpTestFunction, VanishesOutsideSupportAndIsSmoothInside)
{
    const Bump2D phi(Point<2>{0.5, -0.25}, 1.5, 2.0);
    EXPECT_EQ(phi.value(Point<2>{0.5, -0.25}), 2.0);
    EXPECT_EQ(phi.value(Point<2>{2.1, -0.25}), 0.0);
    EXPECT_EQ(phi.laplacian(Point<2>{3.0, 3.0}), 0.0);
    // Analytic Laplacian against a centred difference stencil.
    const Point<2> x{0.9, 0.2};
    const double h = 1e-4;
    const double fd = (phi.value({x[0] + h, x[1]}) + phi.value({x[0] - h, x[1]}) +
                       phi.value({x[0], x[1] + h}) + phi.value({x[0], x[1] - h}) - 4.0 * phi.value(x)) /
                      (h * h);
    EXPECT_NEAR(phi.laplacian(x), fd, 1e-5);
    const Bump1D psi(Point<1>{0.0}, 1.0, 1.0, 0.4);
    EXPECT_EQ(psi.value(0.3), 1.0);
    EXPECT_EQ(psi.second_derivative(0.3), 0.0);
    EXPECT_THROW(Bump1D(Point<1>{0.0}, -1.0), std::invalid_argument);
    EXPECT_THROW(Bump1D(Point<1>{0.0}, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST(SecondDerivative1D, ExponentialKink)
{
    const double b = 1.0;
    const auto d2 = distributional_second_derivative_1d(psi_1d_piecewise(b));
    ASSERT_EQ(d2.atoms().size(), 1u);
    EXPECT_EQ(d2.atoms()[0].location, 0.0);
    EXPECT_NEAR(d2.atoms()[0].weight, -2.0, 1e-12);
    for (double x : {-3.0, -0.5, 0.25, 2.0}) {
        EXPECT_NEAR(d2.regular()(x), b * b * std::sqrt(b) * std::exp(-b * std::abs(x)), 1e-14);
    }
}

TEST(SecondDerivative1D, AbsoluteValueAndSmoothCase)
{
    const auto d2 = distributional_second_derivative_1d(abs_x());
    ASSERT_EQ(d2.atoms().size(), 1u);
    EXPECT_NEAR(d2.atoms()[0].weight, 2.0, 1e-12);
    EXPECT_EQ(d2.regular()(0.7), 0.0);

    const auto sq = distributional_second_derivative_1d(Piecewise1D::smooth(
        {[](double x) { return x * x; }, [](double x) { return 2.0 * x; }, [](double) { return 2.0; }}));
    EXPECT_TRUE(sq.atoms().empty());
    EXPECT_EQ(sq.regular()(-4.0), 2.0);
}

TEST(SecondDerivative1D, AtomWeightAcrossDecayRates)
{
    for (double b : {0.5, 1.0, 2.0}) {
        const auto d2 = distributional_second_derivative_1d(psi_1d_piecewise(b));
        EXPECT_NEAR(d2.find_atom(AtomKind::point, 0.0)->weight, -2.0 * b * std::sqrt(b), 1e-10);
    }
}

TEST(SecondDerivative1D, RejectsValueDiscontinuity)
{
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    const Piecewise1D step({0.0}, {{zero, zero, zero}, {one, zero, zero}});
    EXPECT_THROW(distributional_second_derivative_1d(step), std::invalid_argument);
}

TEST(SecondDerivative1D, RejectsWrongAnalyticDerivative)
{
    // Claims f' = 3 on the right, while the values say 1.
    const Piecewise1D lying({0.0}, {{[](double) { return 0.0; }, [](double) { return 0.0; },
                                     [](double) { return 0.0; }},
                                    {[](double x) { return x; }, [](double) { return 3.0; },
                                     [](double) { return 0.0; }}});
    EXPECT_THROW(distributional_second_derivative_1d(lying), std::logic_error);
}

TEST(LaplacianRadial, PsiCJump)
{
    const Params2D p(1.0, 1.0, 1.0, u0());  // b = 1
    const auto psi = make_psi2d(p);
    const auto lap = distributional_laplacian_radial(psi.representation);
    const DeltaAtom* atom = lap.find_atom(AtomKind::circle, p.radius());
    ASSERT_NE(atom, nullptr);
    const double expected =
        psi.norm * psi.b * (-bessel_k(kOrder1, psi.u0) - bessel_i(kOrder1, psi.u0));
    EXPECT_NEAR(atom->weight, expected, 1e-14 * std::abs(expected));
    const auto jumps = derivative_jumps(psi.representation);
    EXPECT_LE(std::abs(jumps[0].finite_difference - expected) / std::abs(expected), 1e-6);
}

TEST(LaplacianRadial, SmoothAndTent)
{
    const auto g = distributional_laplacian_radial(RadialPiecewise::smooth(
        {[](double r) { return std::exp(-r * r); }, [](double r) { return -2.0 * r * std::exp(-r * r); },
         [](double r) { return (4.0 * r * r - 2.0) * std::exp(-r * r); }}));
    EXPECT_TRUE(g.atoms().empty());
    // Laplacian of exp(-r^2) in the plane is (4 r^2 - 4) exp(-r^2).
    EXPECT_NEAR(g.regular()(0.5), (1.0 - 4.0) * std::exp(-0.25), 1e-14);
    EXPECT_NEAR(g.regular()(0.0), -4.0, 1e-14);

    const auto t = distributional_laplacian_radial(tent());
    ASSERT_EQ(t.atoms().size(), 1u);
    EXPECT_EQ(t.atoms()[0].kind, AtomKind::circle);
    EXPECT_NEAR(t.atoms()[0].weight, 1.0, 1e-12);
}

TEST(LaplacianRadial, RejectsBreakpointAtOrigin)
{
    auto z = [](double) { return 0.0; };
    const RadialPiecewise f({0.0}, {{z, z, z}, {z, z, z}});
    EXPECT_THROW(distributional_laplacian_radial(f), std::invalid_argument);
}

TEST(Bracket, SiftingProperty)
{
    RadialDistribution t;
    t.add_atom({AtomKind::point, 0.0, 1.0});
    EXPECT_NEAR(bracket(t, Bump2D(Point<2>{0.0, 0.0}, 1.0), 1e-12), 1.0, 1e-15);

    Distribution1D s;
    s.add_atom({AtomKind::point, 0.3, 2.0});
    const Bump1D phi(Point<1>{0.0}, 1.0);
    EXPECT_NEAR(bracket(s, phi, 1e-12), 2.0 * phi.value(0.3), 1e-15);
}

TEST(Bracket, CircleLayerIsLineMeasure)
{
    const double radius = 1.0;
    const Bump2D phi(Point<2>{0.0, 0.0}, 2.0);
    RadialDistribution t;
    t.add_atom({AtomKind::circle, radius, 1.0});
    const double expected = 2.0 * pi * radius * phi.profile(radius);
    EXPECT_NEAR(bracket(t, phi, 1e-12), expected, 1e-12);

    // Independent check: a thin Gaussian shell of unit radial mass, integrated
    // as an ordinary function in the plane, approaches the same number.
    const double eps = 1e-3;
    auto shell = [&](double r) {
        const double u = (r - radius) / eps;
        return std::exp(-u * u) / (eps * std::sqrt(pi)) * phi.profile(r);
    };
    const std::vector<double> hints{radius - 8.0 * eps, radius, radius + 8.0 * eps, 2.0};
    const double cubature = integrate_radial2d(shell, hints, 1e-13).value;
    EXPECT_NEAR(cubature, expected, 1e-5);

    const DeltaAtom unit{AtomKind::circle, radius, 1.0};
    EXPECT_NEAR(radial_density_weight(unit), 2.0 * pi * radius, 1e-15);
}

TEST(Bracket, CircleLayerAgainstOffCentreBump)
{
    // Exact value by direct arc-length quadrature of phi on the circle.
    const double radius = 1.2;
    const Bump2D phi(Point<2>{0.8, 0.3}, 0.9);
    RadialDistribution t;
    t.add_atom({AtomKind::circle, radius, 1.0});
    const double arc =
        integrate_finite(
            [&](double th) {
                return phi.value(Point<2>{radius * std::cos(th), radius * std::sin(th)}) * radius;
            },
            -pi, pi, 1e-13)
            .value;
    EXPECT_NEAR(bracket(t, phi, 1e-12), arc, 1e-10);
}

TEST(Bracket, RegularPartReducesToIntegral)
{
    auto gauss = [](double r) { return std::exp(-r * r); };
    const RadialDistribution t(RadialPiecewise::smooth({gauss, {}, {}}));
    const Bump2D phi(Point<2>{0.0, 0.0}, 1.5);
    const std::vector<double> none;
    const double direct =
        integrate_radial2d([&](double r) { return gauss(r) * phi.profile(r); }, none, 1e-13).value;
    EXPECT_NEAR(bracket(t, phi, 1e-12), direct, 1e-11);
}

TEST(Bracket, LinearInBothSlots)
{
    std::mt19937_64 rng(7);
    const auto f = random_kinked_function(rng);
    const auto g = random_kinked_function(rng);
    const auto tf = distributional_second_derivative_1d(f);
    const auto tg = distributional_second_derivative_1d(g);
    const Bump1D p1(Point<1>{0.1}, 1.3, 0.7);
    const Bump1D p2(Point<1>{-0.4}, 0.9, 1.8);
    const double a = 1.7;
    const double c = -0.6;

    const auto combo = tf.scaled(a) + tg.scaled(c);
    EXPECT_NEAR(bracket(combo, p1, 1e-13), a * bracket(tf, p1, 1e-13) + c * bracket(tg, p1, 1e-13),
                1e-10);

    auto sum = [&](double x) { return a * p1.value(x) + c * p2.value(x); };
    const double lhs = pair_with_function(tf, sum, -1.3 - 0.4, 1.4, 1e-13);
    EXPECT_NEAR(lhs, a * bracket(tf, p1, 1e-13) + c * bracket(tf, p2, 1e-13), 1e-10);
}

TEST(Bracket, IntegrationByPartsDuality)
{
    EXPECT_LE(integration_by_parts_defect(10), 1e-8);
    EXPECT_LE(integration_by_parts_defect(10, 99), 1e-8);
}

TEST(Mollifier, PsiCDistancesStrictlyDecrease)
{
    const auto psi = make_psi2d(Params2D(1.0, 1.0, 1.0, 1.0));
    const std::vector<double> ns{4.0, 8.0, 16.0, 32.0};
    const auto d = mollifier_sequence_check(psi.representation, ns);
    ASSERT_EQ(d.size(), 4u);
    for (std::size_t i = 1; i < d.size(); ++i) EXPECT_LT(d[i], d[i - 1]);
}

TEST(Mollifier, ZeroFunction)
{
    const std::vector<double> ns{4.0, 8.0};
    for (double d : mollifier_sequence_check(RadialPiecewise::zero(), ns)) EXPECT_EQ(d, 0.0);
}

TEST(Mollifier, SmoothBumpConvergesAtWidthSquaredRate)
{
    const Bump2D b(Point<2>{0.0, 0.0}, 1.0);
    const auto psi = RadialPiecewise::smooth({[b](double r) { return b.profile(r); },
                                              [b](double r) { return b.profile_d1(r); },
                                              [b](double r) { return b.profile_d2(r); }});
    const std::vector<double> ns{4.0, 8.0, 16.0};
    const auto d = mollifier_sequence_check(psi, ns);
    EXPECT_LT(d[1] / d[0], 0.35);
    EXPECT_LT(d[2] / d[1], 0.35);
}

TEST(Mollifier, UnitMass)
{
    const double eps = 0.25;
    const std::vector<double> support{eps};
    EXPECT_NEAR(integrate_radial2d([&](double r) { return mollifier(r, eps); }, support, 1e-14).value,
                1.0, 1e-13);
}

TEST(FundamentalSolution, DeltaAtOrigin)
{
    EXPECT_NEAR(fundamental_solution_check(1.0, Bump2D(Point<2>{0.0, 0.0}, 1.0)), 1.0, 1e-6);
    EXPECT_NEAR(fundamental_solution_check(2.0, Bump2D(Point<2>{0.0, 0.0}, 1.0)), 1.0, 1e-6);
    EXPECT_NEAR(fundamental_solution_check(1.0, Bump2D(Point<2>{0.0, 0.0}, 0.5, 3.0)), 3.0, 3e-6);
}

TEST(FundamentalSolution, OffCentreSupport)
{
    EXPECT_NEAR(fundamental_solution_check(1.0, Bump2D(Point<2>{2.0, 1.0}, 1.0)), 0.0, 1e-8);
    // Support reaching the origin from the side.
    const Bump2D phi(Point<2>{0.3, 0.0}, 1.0);
    EXPECT_NEAR(fundamental_solution_check(1.5, phi), phi.value(Point<2>{0.0, 0.0}), 1e-6);
}

TEST(Distrib, VerifySuitePasses)
{
    for (const auto& c : verify_distrib()) EXPECT_TRUE(c.pass) << c.name << " " << c.value;
}
