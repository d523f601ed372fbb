#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracle_values.hpp"
#include "qbessel/equation.hpp"

using namespace qbessel;
using qbessel::test::q;
namespace oracle = qbessel::test::oracle;

TEST(Equation, TermsSortedByDescendingOrder) {
  const QuasiBesselEquation eq({{3.0, 0.5, q("0.5")}, {1.5, 1.5, q("0")}, {-1.2, 1.1, q("0.8")}}, q("2"), 4.0, DerivativeKind::caputo);
  ASSERT_EQ(eq.size(), 3u);
  EXPECT_DOUBLE_EQ(eq.terms()[0].alpha, 1.5);
  EXPECT_DOUBLE_EQ(eq.terms()[1].alpha, 1.1);
  EXPECT_DOUBLE_EQ(eq.terms()[2].alpha, 0.5);
  EXPECT_EQ(eq.terms()[1].p, q("0.8"));
}

TEST(Equation, DerivedMetadata) {
  const auto eq = test::three_term_caputo(4.0);
  EXPECT_EQ(eq.pure_bessel_count(), 1u);
  EXPECT_EQ(eq.fractional_pure_bessel_count(), 1u);
  EXPECT_EQ(eq.n_max(), 2);
  EXPECT_EQ(eq.n_m0(), 2);
  EXPECT_DOUBLE_EQ(*eq.alpha_star_max(), 1.5);

  const auto integer = test::exponential_equation();
  EXPECT_EQ(integer.n_max(), 0);
  EXPECT_EQ(integer.fractional_pure_bessel_count(), 0u);
  EXPECT_EQ(integer.pure_bessel_count(), 1u);
}

TEST(Equation, RejectsBadInput) {
  EXPECT_THROW(QuasiBesselEquation({}, q("1"), 0.0, DerivativeKind::caputo), precondition_error);
  EXPECT_THROW(QuasiBesselEquation({{1.0, 1.0, q("0")}}, q("1"), -1.0, DerivativeKind::caputo), precondition_error);
  EXPECT_THROW(QuasiBesselEquation({{1.0, -0.5, q("0")}}, q("1"), 0.0, DerivativeKind::caputo), precondition_error);
  EXPECT_THROW(QuasiBesselEquation({{1.0, 1.0, q("-0.5")}}, q("1"), 0.0, DerivativeKind::caputo), precondition_error);
  EXPECT_THROW(QuasiBesselEquation({{NAN, 1.0, q("0")}}, q("1"), 0.0, DerivativeKind::caputo), precondition_error);
  EXPECT_THROW(QuasiBesselEquation({{1.0, 1.0, q("0")}}, q("1"), 0.0, DerivativeKind::caputo, 0.0), precondition_error);
}

TEST(Validate, AcceptsWellFormedEquations) {
  EXPECT_TRUE(validate(test::three_term_caputo(4.0)).valid());
  EXPECT_TRUE(validate(test::three_term_caputo(4.0)).issues.empty());
  EXPECT_TRUE(validate(QuasiBesselEquation({{1.0, 1.0, q("0")}}, q("1"), 0.0, DerivativeKind::caputo)).valid());
}

TEST(Validate, ShiftedLeadingTermIsFatal) {
  const QuasiBesselEquation eq({{1.5, 1.5, q("0.8")}, {-1.2, 1.1, q("0")}, {3.0, 0.5, q("0.5")}}, q("2"), 4.0, DerivativeKind::caputo);
  const ValidationReport report = validate(eq);
  EXPECT_FALSE(report.valid());
  EXPECT_TRUE(report.has(IssueCode::leading_term_shifted));
  EXPECT_NE(report.issues.front().message.find("diverges"), std::string::npos);
}

TEST(Validate, NonpositiveBetaIsFatal) {
  const QuasiBesselEquation eq({{1.0, 1.0, q("0")}}, q("0"), 0.0, DerivativeKind::caputo);
  EXPECT_FALSE(validate(eq).valid());
  EXPECT_TRUE(validate(eq).has(IssueCode::nonpositive_beta));
}

TEST(Validate, NegativePureBesselCoefficientWarns) {
  const ValidationReport report = validate(test::two_root_rl());
  EXPECT_TRUE(report.valid());
  EXPECT_TRUE(report.has(IssueCode::nonpositive_pure_bessel_coefficient));
  // Shifted terms may carry any sign.
  EXPECT_FALSE(validate(test::three_term_caputo(4.0)).has(IssueCode::nonpositive_pure_bessel_coefficient));
}

TEST(Threshold, SingleHalfOrderTerm) {
  const QuasiBesselEquation eq({{1.0, 0.5, q("0")}}, q("1"), 0.0, DerivativeKind::caputo);
  EXPECT_NEAR(nu_min_threshold(eq), oracle::inv_sqrt_pi, 1e-15);
}

TEST(Threshold, ThreeTermEquation) {
  EXPECT_NEAR(nu_min_threshold(test::three_term_caputo(4.0)), oracle::one_and_half_over_sqrt_pi, 1e-12);
  EXPECT_GE(4.0, nu_min_threshold(test::three_term_caputo(4.0)));
}

TEST(Threshold, Inapplicable) {
  EXPECT_THROW(nu_min_threshold(test::exponential_equation()), inapplicable_error);
  EXPECT_THROW(nu_min_threshold(test::colliding_rl()), inapplicable_error);
  const QuasiBesselEquation negative({{-1.0, 0.5, q("0")}}, q("1"), 0.0, DerivativeKind::caputo);
  EXPECT_THROW(nu_min_threshold(negative), inapplicable_error);
  // n_max - alpha_i = 2 - 2 = 0 is a pole.
  const QuasiBesselEquation pole({{1.0, 2.0, q("0")}, {1.0, 1.5, q("0")}}, q("1"), 0.0, DerivativeKind::caputo);
  EXPECT_THROW(nu_min_threshold(pole), inapplicable_error);
}

TEST(Threshold, MonotoneInPureBesselCoefficient) {
  double previous = 0.0;
  for (double d = 0.25; d <= 4.0; d *= 2.0) {
    const QuasiBesselEquation eq({{d, 1.3, q("0")}, {1.0, 0.4, q("0.2")}}, q("1"), 0.0, DerivativeKind::caputo);
    const double value = nu_min_threshold(eq);
    EXPECT_GT(value, previous);
    previous = value;
  }
}

TEST(UniquenessBound, SingleTerms) {
  const QuasiBesselEquation integer({{1.0, 1.0, q("0")}}, q("0"), 0.0, DerivativeKind::caputo);
  EXPECT_NEAR(uniqueness_bound(integer, 1.0), 2.0, 1e-15);
  const QuasiBesselEquation half({{1.0, 0.5, q("0")}}, q("0"), 0.0, DerivativeKind::caputo);
  EXPECT_NEAR(uniqueness_bound(half, 1.0), oracle::half_order_uniqueness_b1, 1e-12);
}

TEST(UniquenessBound, ThreeTermEquation) {
  const auto eq = test::three_term_caputo(4.0);
  EXPECT_NEAR(uniqueness_bound(eq, 1.0), oracle::three_term_uniqueness_b1, 1e-12);
  EXPECT_NEAR(uniqueness_bound(eq, 2.0), oracle::three_term_uniqueness_b2, 1e-12);
  // b below 1 is clamped to 1.
  EXPECT_DOUBLE_EQ(uniqueness_bound(eq, 0.5), uniqueness_bound(eq, 1.0));
  EXPECT_THROW(uniqueness_bound(eq, 0.0), precondition_error);
  EXPECT_THROW(uniqueness_bound(test::colliding_rl(), 1.0), precondition_error);
}

TEST(ConstantCoefficients, LiftsByLeadingOrder) {
  const auto eq = test::constant_coefficients({"2.1", "1.4", "0.7"});
  ASSERT_EQ(eq.size(), 3u);
  EXPECT_EQ(eq.beta(), q("2.1"));
  EXPECT_EQ(eq.terms()[0].p, q("0"));
  EXPECT_EQ(eq.terms()[1].p, q("0.7"));
  EXPECT_EQ(eq.terms()[2].p, q("1.4"));
  EXPECT_EQ(eq.nu_squared(), 0.0);
  EXPECT_EQ(eq.kind(), DerivativeKind::riemann_liouville);
}

TEST(ConstantCoefficients, FirstOrderClassical) {
  const auto eq = test::exponential_equation();
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_DOUBLE_EQ(eq.leading().alpha, 1.0);
  EXPECT_EQ(eq.leading().p, q("0"));
  EXPECT_EQ(eq.beta(), q("1"));
}

TEST(ConstantCoefficients, RejectsTiedLeadingOrder) {
  EXPECT_THROW(from_constant_coefficients({{1.0, q("1.5")}, {2.0, q("1.5")}}, DerivativeKind::caputo), precondition_error);
}

TEST(PowerFactors, HalfOrderTerm) {
  const auto eq = test::power_factor_rl(0.5);
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_DOUBLE_EQ(eq.leading().d, -2.0);
  EXPECT_DOUBLE_EQ(eq.leading().alpha, 0.5);
  EXPECT_EQ(eq.leading().p, q("0"));
  EXPECT_EQ(eq.beta(), q("1.2"));
}

TEST(PowerFactors, ZeroPowersMatchConstantCoefficients) {
  const auto a = from_power_factors({{1.0, q("0"), q("2.1")}, {2.0, q("0"), q("1.5")}, {3.0, q("0"), q("0.7")}}, q("0"),
                                    DerivativeKind::riemann_liouville);
  const auto b = from_constant_coefficients({{1.0, q("2.1")}, {2.0, q("1.5")}, {3.0, q("0.7")}}, DerivativeKind::riemann_liouville);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.beta(), b.beta());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.terms()[i].p, b.terms()[i].p);
    EXPECT_EQ(a.terms()[i].d, b.terms()[i].d);
  }
}

TEST(PowerFactors, IdentityWhenAlreadyQuasiBessel) {
  const auto eq = from_power_factors({{1.0, q("1"), q("1")}}, q("1"), DerivativeKind::caputo);
  EXPECT_EQ(eq.leading().p, q("0"));
  EXPECT_EQ(eq.beta(), q("1"));
}

TEST(PowerFactors, ShiftsPreserveAlphaPlusPMinusPower) {
  // After lifting, alpha_i + p_i - beta_i is the same for every term.
  const auto eq = from_power_factors({{1.0, q("0.3"), q("1.8")}, {1.0, q("0.5"), q("1.1")}, {1.0, q("0"), q("0.4")}}, q("0.6"),
                                     DerivativeKind::riemann_liouville);
  const std::vector<Rational> powers{q("0.3"), q("0.5"), q("0")};
  const std::vector<Rational> alphas{q("1.8"), q("1.1"), q("0.4")};
  for (std::size_t i = 0; i < eq.size(); ++i) EXPECT_EQ(alphas[i] + eq.terms()[i].p - powers[i], q("1.5"));
}

TEST(PowerFactors, Preconditions) {
  // alpha_1 < beta_1.
  EXPECT_THROW(from_power_factors({{1.0, q("2"), q("1")}}, q("0"), DerivativeKind::caputo), precondition_error);
  // alpha_1 - beta_1 smaller than another term's gap.
  EXPECT_THROW(from_power_factors({{1.0, q("1"), q("1.5")}, {1.0, q("0"), q("1")}}, q("0"), DerivativeKind::caputo), precondition_error);
}
