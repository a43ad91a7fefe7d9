#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "risprop/errors.hpp"
#include "risprop/quadrature.hpp"

using namespace risprop;

TEST(Quadrature, Polynomial) {
  const auto r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-15);
}

TEST(Quadrature, OscillatoryAndPeaked) {
  EXPECT_NEAR(quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value,
              2.0, 1e-12);
  const auto r = quad::integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0);
  EXPECT_NEAR(r.value, 2.0 / 1e-2 * std::atan(1.0 / 1e-2), 1e-8);
}

TEST(Quadrature, SemiInfinite) {
  EXPECT_NEAR(quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0, 1.0).value,
              1.0, 1e-12);
  // ∫_0^∞ x/(x + x^3) dx = π/2 over 1/(1+x²)
  EXPECT_NEAR(
      quad::integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0).value,
      std::numbers::pi / 2.0, 1e-11);
}

TEST(Quadrature, JetValuedIntegrand) {
  // d/ds ∫_0^1 e^{−s x} dx at s = 1 is −∫ x e^{−x} = −(1 − 2/e)
  const Jet s = Jet::variable(1.0, 2);
  const auto r = quad::integrate([&](double x) { return exp(-(s * x)); }, 0.0, 1.0);
  EXPECT_NEAR(r.value[0], 1.0 - std::exp(-1.0), 1e-13);
  EXPECT_NEAR(r.value[1], -(1.0 - 2.0 / std::exp(1.0)), 1e-13);
}

TEST(Quadrature, RejectsEmptyInterval) {
  EXPECT_THROW(quad::integrate([](double x) { return x; }, 1.0, 1.0), DomainError);
}
