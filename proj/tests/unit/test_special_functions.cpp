#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "risprop/errors.hpp"
#include "risprop/special_functions.hpp"

using namespace risprop;

TEST(LnGamma, KnownValues) {
  EXPECT_NEAR(ln_gamma(1.0), 0.0, 1e-14);
  EXPECT_NEAR(ln_gamma(2.0), 0.0, 1e-14);
  EXPECT_NEAR(ln_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-13);
  EXPECT_NEAR(std::exp(ln_gamma(2.5) - ln_gamma(2.0)), 0.75 * std::sqrt(std::numbers::pi), 1e-12);
}

TEST(LnGamma, MatchesStdLgammaToRelative1e12) {
  for (double x : {0.01, 0.3, 0.9, 1.5, 3.7, 10.0, 55.5, 171.0, 1e4}) {
    const double ref = std::lgamma(x);
    EXPECT_NEAR(ln_gamma(x), ref, 1e-12 * std::max(1.0, std::abs(ref))) << "x=" << x;
  }
}

TEST(LnGamma, RejectsNonPositive) {
  EXPECT_THROW(ln_gamma(0.0), DomainError);
  EXPECT_THROW(ln_gamma(-1.5), DomainError);
}

TEST(IncompleteGamma, KnownValues) {
  EXPECT_EQ(lower_incomplete_gamma_regularized(3.0, 0.0), 0.0);
  EXPECT_NEAR(lower_incomplete_gamma_regularized(1.0, std::log(2.0)), 0.5, 1e-12);
  EXPECT_NEAR(lower_incomplete_gamma_regularized(2.0, 2.0), 1.0 - 3.0 * std::exp(-2.0), 1e-12);
}

TEST(IncompleteGamma, ErlangClosedFormAcrossBothBranches) {
  // P(k, x) = 1 − e^{−x} Σ_{j<k} x^j/j!
  for (int k : {1, 3, 7, 20}) {
    for (double x : {0.1, 1.0, 5.0, 19.0, 21.0, 60.0}) {
      double term = 1.0, sum = 0.0;
      for (int j = 0; j < k; ++j) {
        sum += term;
        term *= x / (j + 1);
      }
      const double ref = 1.0 - std::exp(-x) * sum;
      EXPECT_NEAR(lower_incomplete_gamma_regularized(k, x), ref, 1e-10) << k << " " << x;
    }
  }
}

TEST(IncompleteGamma, ComplementAndMonotone) {
  for (double a : {0.5, 2.0, 6.18, 745.0}) {
    double prev = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double x = a * i / 50.0;
      const double p = lower_incomplete_gamma_regularized(a, x);
      const double q = upper_incomplete_gamma_regularized(a, x);
      EXPECT_GE(p, prev - 1e-15);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      EXPECT_NEAR(p + q, 1.0, 1e-10);
      prev = p;
    }
  }
}

TEST(IncompleteGamma, RejectsBadArguments) {
  EXPECT_THROW(lower_incomplete_gamma_regularized(0.0, 1.0), DomainError);
  EXPECT_THROW(lower_incomplete_gamma_regularized(1.0, -1.0), DomainError);
}

TEST(RisingFactorial, Values) {
  EXPECT_DOUBLE_EQ(rising_factorial(2.0, 0), 1.0);
  EXPECT_DOUBLE_EQ(rising_factorial(2.0, 3), 2.0 * 3.0 * 4.0);
  EXPECT_DOUBLE_EQ(rising_factorial(0.5, 2), 0.5 * 1.5);
}

TEST(Cosecant, TwoPiOverAlpha) {
  EXPECT_NEAR(csc_two_pi_over(3.0), 2.0 / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(csc_two_pi_over(4.0), 1.0, 1e-14);
  EXPECT_THROW(csc_two_pi_over(2.0), DomainError);
}
