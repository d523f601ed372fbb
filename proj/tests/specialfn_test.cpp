#include <gtest/gtest.h>

#include <cmath>

#include "oracle_values.hpp"
#include "qbessel/specialfn.hpp"

using namespace qbessel;
namespace oracle = qbessel::test::oracle;

TEST(MittagLeffler, ClassicalCases) {
  EXPECT_NEAR(mittag_leffler(1.0, 1.0, 40), std::exp(1.0), 1e-12);
  EXPECT_EQ(mittag_leffler(1.0, 0.0, 40), 1.0);
  EXPECT_NEAR(mittag_leffler(2.0, 1.0, 40), std::cosh(1.0), 1e-12);
  EXPECT_NEAR(mittag_leffler(1.0, -2.0, 60), std::exp(-2.0), 1e-13);
  EXPECT_NEAR(mittag_leffler(2.0, -1.0, 40), std::cos(1.0), 1e-13);
  EXPECT_NEAR(mittag_leffler(0.7, 0.3, 100), oracle::mittag_leffler_0p7_at_0p3, 1e-14);
  EXPECT_THROW(mittag_leffler(0.0, 1.0, 10), precondition_error);
}

TEST(KilbasSaigo, ZeroArgument) {
  EXPECT_EQ(kilbas_saigo({0.5, 2.4, 0.4}, 0.0, 50), 1.0);
  EXPECT_EQ(kilbas_saigo({1.3, 0.7, -0.2}, 0.0, 50), 1.0);
}

TEST(KilbasSaigo, ReducesToMittagLeffler) {
  for (double z : {-1.5, -0.3, 0.3, 1.0}) {
    EXPECT_NEAR(kilbas_saigo({0.7, 1.0, 0.0}, z, 200), mittag_leffler(0.7, z, 200), 1e-12) << z;
  }
  EXPECT_NEAR(kilbas_saigo({0.7, 1.0, 0.0}, 0.3, 200), oracle::mittag_leffler_0p7_at_0p3, 1e-12);
}

TEST(KilbasSaigo, CoefficientProducts) {
  // c_1 = Gamma(1.2)/Gamma(1.7), c_2 = c_1 Gamma(2.4)/Gamma(2.9) for (0.5, 2.4, 0.4).
  const double c1 = std::tgamma(1.2) / std::tgamma(1.7);
  const double c2 = c1 * std::tgamma(2.4) / std::tgamma(2.9);
  const double z = 1e-3;
  const double value = kilbas_saigo({0.5, 2.4, 0.4}, z, 2);
  EXPECT_NEAR(value, 1.0 + c1 * z + c2 * z * z, 1e-16);
}

TEST(KilbasSaigo, ClosedFormOracle) {
  for (const auto& point : oracle::kilbas_saigo_lambda_half) {
    const double value = std::pow(point.x, -0.5) / std::sqrt(M_PI) * kilbas_saigo({0.5, 2.4, 0.4}, 0.5 * std::pow(point.x, 1.2), 400);
    EXPECT_NEAR(value, point.value, 1e-13 * point.value) << point.x;
  }
  for (const auto& point : oracle::kilbas_saigo_lambda_one) {
    const double value = std::pow(point.x, -0.5) / std::sqrt(M_PI) * kilbas_saigo({0.5, 2.4, 0.4}, std::pow(point.x, 1.2), 400);
    EXPECT_NEAR(value, point.value, 1e-13 * point.value) << point.x;
  }
}

TEST(KilbasSaigo, NumeratorPole) {
  // alpha (j m + l) + 1 = 0 at j = 0 when l = -2.
  EXPECT_THROW(kilbas_saigo({0.5, 1.0, -2.0}, 0.5, 10), pole_error);
}
