#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "deltawell/quad.hpp"
#include "deltawell/roots.hpp"
#include "deltawell/well2d.hpp"
#include "oracle/bessel_oracle.hpp"

using namespace deltawell;
constexpr double pi = std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Reference values at the crossing point, computed to 40 digits with an
// independent arbitrary-precision library.
constexpr double kU0 = 0.43228370659118561062;
constexpr double kBetaSq = 3.9018518801634636190;
constexpr double kK1MinusI1 = 1.7664304944585984065;
constexpr double kK1PlusI1 = 2.2088906936354495852;
constexpr double kUnitEC = -0.016235929318403896969;

}  // namespace

TEST(Params2D, Validation)
{
    EXPECT_THROW(Params2D(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(Params2D(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(Params2D(1.0, 1.0, 1.0, -1.0), std::invalid_argument);
    EXPECT_NO_THROW(Params2D(1.0, 1.0, -1.0, 1.0));
    const Params2D p(1.0, 1.0, 1.0, 2.0);
    EXPECT_DOUBLE_EQ(p.b() * p.radius(), u0());
}

TEST(BetaSq, AtCrossingAndAtOne)
{
    const double u = u0();
    EXPECT_NEAR(u, kU0, 1e-15);
    EXPECT_LE(rel(beta_sq(u), kBetaSq), 1e-13);
    const double k1 = static_cast<double>(oracle::k(1, 1.0L));
    const double i1 = static_cast<double>(oracle::i(1, 1.0L));
    EXPECT_LE(rel(beta_sq(1.0), k1 * k1 - i1 * i1), 1e-12);
    EXPECT_NEAR(beta_sq(1.0), 0.0429, 1e-4);
}

TEST(BetaSq, PieceIntegralsGiveClosedForm)
{
    for (double radius : {0.5, 1.0, 3.0}) {
        const Params2D p(1.0, 1.0, 1.0, radius);
        const double expected = pi * radius * radius * beta_sq(u0());
        EXPECT_LE(std::abs(bessel_square_integral(p) - expected), 1e-10 * std::max(1.0, expected));
    }
}

TEST(PsiC, ContinuityAtMatchingCircle)
{
    for (double radius : {0.1, 1.0, 7.0}) {
        const Params2D p(1.0, 2.0, 1.0, radius);
        const auto psi = make_psi2d(p);
        const double inside = psi.representation.pieces()[0].value(radius);
        const double outside = psi.representation.pieces()[1].value(radius);
        EXPECT_LE(rel(inside, outside), 1e-13);
    }
}

TEST(PsiC, ValueAtOriginAndRadialSymmetry)
{
    const Params2D p(1.0, 1.0, 1.0, 1.5);
    const double n = 1.0 / (std::sqrt(pi) * 1.5 * std::sqrt(kBetaSq));
    EXPECT_LE(rel(psi_c(p, Point<2>{0.0, 0.0}), n), 1e-13);
    EXPECT_LE(rel(norm_constant(p), n), 1e-13);
    EXPECT_DOUBLE_EQ(psi_c(p, Point<2>{0.6, 0.8}), psi_c(p, Point<2>{-1.0, 0.0}));
    EXPECT_DOUBLE_EQ(psi_c_radial(p, 1.0), psi_c(p, Point<2>{0.0, 1.0}));
}

TEST(PsiC, RisesToCircleThenDecays)
{
    // I0 increases and K0 decreases, so the peak is on the matching circle.
    const Params2D p(1.0, 1.0, 1.0, 1.0);
    double prev = psi_c_radial(p, 0.0);
    for (int i = 1; i <= 4000; ++i) {
        const double r = 10.0 * i / 4000.0;
        const double v = psi_c_radial(p, r);
        if (r <= 1.0) {
            ASSERT_GT(v, prev) << r;
        } else {
            ASSERT_LT(v, prev) << r;
        }
        prev = v;
    }
}

TEST(Norm, UnitParametersAndRadiusIndependence)
{
    EXPECT_NEAR(norm_check(Params2D(1, 1, 1, 1)), 1.0, 1e-8);
    EXPECT_NEAR(norm_check(Params2D(1, 1, 1, 2)), 1.0, 1e-8);
}

TEST(Norm, DroppingPrefactorLeavesBesselSquareArea)
{
    const Params2D p(1.0, 1.0, 1.0, 2.0);
    const double unnormalised = norm_check(p) / (norm_constant(p) * norm_constant(p)) / pi;
    EXPECT_NEAR(unnormalised, pi * 4.0 * kBetaSq / pi, 1e-8 * unnormalised);
}

TEST(Norm, ParameterGrid)
{
    for (double hbar : {0.5, 2.0}) {
        for (double mass : {0.5, 2.0}) {
            for (double alpha : {-1.0, 3.0}) {
                for (double radius : {0.25, 1.0, 4.0}) {
                    EXPECT_NEAR(norm_check(Params2D(hbar, mass, alpha, radius)), 1.0, 1e-8);
                }
            }
        }
    }
}

TEST(Helmholtz, ResidualSmallAwayFromCircle)
{
    const Params2D p(1.0, 1.0, 1.0, 2.0);
    const std::vector<double> radii{1.0, 4.0, 20.0};
    for (double r : helmholtz_residual(p, radii)) EXPECT_LE(std::abs(r), 1e-6);
    std::vector<double> many;
    for (int i = 0; i < 50; ++i) many.push_back(0.1 + 19.9 * i / 49.0);
    std::erase_if(many, [](double r) { return std::abs(r - 2.0) <= 2e-3; });
    for (double r : helmholtz_residual(p, many)) EXPECT_LE(std::abs(r), 1e-6);
}

TEST(Helmholtz, RejectsGuardBand)
{
    const Params2D p(1.0, 1.0, 1.0, 1.0);
    const std::vector<double> at_circle{1.0 + 1e-4};
    const std::vector<double> at_origin{1e-4};
    EXPECT_THROW(helmholtz_residual(p, at_circle), std::invalid_argument);
    EXPECT_THROW(helmholtz_residual(p, at_origin), std::invalid_argument);
}

TEST(Crossing, SingleSignChangeOnDenseGrid)
{
    auto diff = [](double r) { return bessel_i(kOrder0, r) - bessel_k(kOrder0, r); };
    const auto changes = sign_change_locations(diff, 1e-3, 10.0, 10000);
    ASSERT_EQ(changes.size(), 1u);
    EXPECT_NEAR(changes[0], kU0, 1e-3);
}

TEST(Jump, AnalyticAgreesWithFiniteDifferences)
{
    for (double radius : {0.3, 1.0, 5.0}) {
        const Params2D p(1.0, 1.0, 1.0, radius);
        const auto j = jump_weight(p);
        EXPECT_LE(rel(j.finite_difference, j.analytic), 1e-6);
        EXPECT_LT(j.analytic, 0.0);
        const double nb = norm_constant(p) * p.b();
        EXPECT_LE(rel(j.paper_combination / nb, kK1MinusI1), 1e-13);
        EXPECT_LE(rel(-j.analytic / nb, kK1PlusI1), 1e-13);
    }
}

TEST(CSpectrumClosedForm, UnitValueAndScaling)
{
    EXPECT_LE(rel(c_spectrum_paper(Params2D(1, 1, 1, 1)), kUnitEC), 1e-13);
    const double base = c_spectrum_paper(Params2D(1.0, 1.3, 0.7, 1.1));
    EXPECT_LT(base, 0.0);
    EXPECT_NEAR(c_spectrum_paper(Params2D(1.0, 1.3, 1.4, 1.1)) / base, 4.0, 4e-12);
    EXPECT_NEAR(c_spectrum_paper(Params2D(1.0, 1.3, 0.7, 2.2)) / base, 0.25, 0.25e-12);
    EXPECT_NEAR(c_spectrum_paper(Params2D(2.0, 1.3, 0.7, 1.1)) / base, 0.25, 0.25e-12);
    EXPECT_NEAR(c_spectrum_paper(Params2D(1.0, 1.3, -0.7, 1.1)) / base, 1.0, 1e-12);
}

TEST(CSpectrumBracket, ClosedFormJumpReproducesFormula)
{
    for (double radius : {0.5, 1.0, 2.0}) {
        const Params2D p(1.0, 1.0, 1.0, radius);
        const auto r = c_spectrum_bracket(p, 1e-8, JumpConvention::paper);
        ASSERT_TRUE(r.has_solution);
        EXPECT_LE(rel(r.energy, c_spectrum_paper(p)), 1e-8);
        EXPECT_LE(r.family_spread, 1e-8);
    }
}

TEST(CSpectrumBracket, DerivedConventionDiffersByJumpRatio)
{
    const Params2D p(0.9, 1.2, 1.5, 1.3);
    const auto d = c_spectrum_bracket(p, 1e-8, JumpConvention::derived);
    ASSERT_TRUE(d.has_solution);
    const double ratio = (kK1MinusI1 / kK1PlusI1) * (kK1MinusI1 / kK1PlusI1);
    EXPECT_LE(rel(d.energy / c_spectrum_paper(p), ratio), 1e-8);
}

TEST(CSpectrumBracket, ReportsBothCircleWeightConventions)
{
    const Params2D p(1.0, 1.0, 1.0, 1.0);
    const auto r = c_spectrum_bracket(p, 1e-8, JumpConvention::derived);
    EXPECT_NEAR(r.circle_weight_per_b_radial_density, 2.0 * pi * r.circle_weight_per_b, 1e-14);
    EXPECT_NEAR(r.point_weight, -p.alpha() * norm_constant(p), 1e-14);
}

TEST(CSpectrumBracket, FreeCaseHasNoSolution)
{
    const Params2D p(1.0, 1.0, 1.0, 1.0);
    const auto family = default_c_spectrum_family(1.0);
    for (auto conv : {JumpConvention::derived, JumpConvention::paper}) {
        const auto r = c_spectrum_bracket(p, 0.0, family, 1e-8, conv);
        EXPECT_FALSE(r.has_solution);
        EXPECT_EQ(r.energy, 0.0);
    }
}

TEST(CSpectrumBracket, TestFunctionDependenceIsAHardError)
{
    // Canonical bumps weight the origin and the circle differently, so the
    // solved b moves with the test function.
    const Params2D p(1.0, 1.0, 1.0, 1.0);
    const std::vector<Bump2D> family{Bump2D(Point<2>{0.0, 0.0}, 1.5), Bump2D(Point<2>{0.0, 0.0}, 4.0)};
    try {
        c_spectrum_bracket(p, family, 1e-8, JumpConvention::paper);
        FAIL() << "expected FamilySpreadError";
    } catch (const FamilySpreadError& e) {
        EXPECT_GT(e.derived().family_spread, 1e-8);
        EXPECT_GT(e.paper().family_spread, 1e-8);
        EXPECT_EQ(e.derived().convention, JumpConvention::derived);
        EXPECT_EQ(e.paper().convention, JumpConvention::paper);
    }
}

TEST(CSpectrumBracket, RejectsFamilyMissingOrigin)
{
    const Params2D p(1.0, 1.0, 1.0, 1.0);
    const std::vector<Bump2D> family{Bump2D(Point<2>{3.0, 0.0}, 1.0)};
    EXPECT_THROW(c_spectrum_bracket(p, family, 1e-8, JumpConvention::paper), std::invalid_argument);
}
