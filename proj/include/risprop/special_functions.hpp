#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "risprop/errors.hpp"

namespace risprop {

/// Natural log of the gamma function for x > 0 (Lanczos, g = 7, n = 9).
inline double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("ln_gamma: argument must be positive and finite, got " +
                      std::to_string(x));
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double kG = 7.0;
  if (x < 0.5) {
    // reflection: Γ(x)Γ(1-x) = π / sin(πx)
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
           ln_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double a = kCoef[0];
  for (std::size_t i = 1; i < kCoef.size(); ++i)
    a += kCoef[i] / (z + static_cast<double>(i));
  const double t = z + kG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(a);
}

namespace detail {

inline void check_incomplete_gamma_args(double shape, double x) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw DomainError("incomplete gamma: shape must be positive");
  if (!(x >= 0.0) || std::isnan(x))
    throw DomainError("incomplete gamma: x must be nonnegative");
}

// P(a, x) by its power series; used for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < 1'000'000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16)
      return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
  }
  throw NumericError("gamma_p series did not converge for a=" +
                     std::to_string(a) + " x=" + std::to_string(x));
}

// Q(a, x) by modified Lentz continued fraction; used for x >= a + 1.
inline double gamma_q_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1'000'000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16)
      return std::exp(-x + a * std::log(x) - ln_gamma(a)) * h;
  }
  throw NumericError("gamma_q continued fraction did not converge for a=" +
                     std::to_string(a) + " x=" + std::to_string(x));
}

}  // namespace detail

/// Regularized lower incomplete gamma γ(shape, x) / Γ(shape).
inline double lower_incomplete_gamma_regularized(double shape, double x) {
  detail::check_incomplete_gamma_args(shape, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < shape + 1.0) return detail::gamma_p_series(shape, x);
  return 1.0 - detail::gamma_q_fraction(shape, x);
}

/// Regularized upper incomplete gamma Γ(shape, x) / Γ(shape).
inline double upper_incomplete_gamma_regularized(double shape, double x) {
  detail::check_incomplete_gamma_args(shape, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < shape + 1.0) return 1.0 - detail::gamma_p_series(shape, x);
  return detail::gamma_q_fraction(shape, x);
}

/// Γ(shape + n) / Γ(shape) for integer n >= 0.
inline double rising_factorial(double shape, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= shape + i;
  return r;
}

/// csc(2π/α). Rejects α for which 2π/α is a multiple of π.
inline double csc_two_pi_over(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("csc(2π/α): α must be positive and finite");
  const double ratio = 2.0 / alpha;  // (2π/α) / π
  if (std::abs(ratio - std::round(ratio)) < 1e-12)
    throw DomainError("csc(2π/α) is undefined: 2π/α is a multiple of π for α=" +
                      std::to_string(alpha));
  return 1.0 / std::sin(2.0 * std::numbers::pi / alpha);
}

}  // namespace risprop
