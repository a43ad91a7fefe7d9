#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <type_traits>
#include <vector>

#include "risprop/errors.hpp"
#include "risprop/jet.hpp"
#include "risprop/quadrature.hpp"
#include "risprop/rng.hpp"
#include "risprop/special_functions.hpp"

namespace risprop {

enum class Stage { before, after };

struct LaplaceParams {
  double lambda_B = 1e-5;
  double lambda_R = 1e-5;
  double lambda_U = 1e-2;
  double C = 6.3326e-5;
  double alpha = 3.0;
  int N = 200;
  double d_min = 1.0;     ///< lower truncation of the distance integrals, m
  double d_max = 1000.0;  ///< upper truncation, m
  double r_I = 10.0;      ///< interference radius around a moving UE, m

  /// Density of near mobile interferers, λ_B·λ_U·π·r_I².
  double lambda_U_near() const noexcept {
    return lambda_B * lambda_U * std::numbers::pi * r_I * r_I;
  }

  void validate() const {
    detail::require(lambda_B >= 0.0 && lambda_R >= 0.0 && lambda_U >= 0.0,
                    "Laplace densities must be >= 0");
    detail::require(C > 0.0, "C must be > 0");
    if (!(alpha > 2.0)) throw DomainError("Laplace transform diverges for alpha <= 2");
    detail::require(N >= 1, "N must be >= 1");
    detail::require(d_min > 0.0 && d_max > d_min, "need 0 < d_min < d_max");
    detail::require(r_I > 0.0, "r_I must be > 0");
  }
};

namespace detail {

inline void check_transform_arg(double s) {
  if (!(s >= 0.0) || std::isnan(s)) throw DomainError("Laplace transform requires s >= 0");
}
inline void check_transform_arg(const Jet& s) { check_transform_arg(s.value()); }

template <class S>
S zero_like(const S& s) {
  return s * 0.0;
}

// −2π²λ·csc(2π/α)·(sC)^{2/α}/α: log of the PPP factor with Rayleigh fading.
template <class S>
S ppp_rayleigh_log(const S& s, double lambda, double C, double alpha) {
  if (lambda == 0.0) return zero_like(s);
  const double k = -2.0 * std::numbers::pi * std::numbers::pi * lambda *
                   csc_two_pi_over(alpha) / alpha;
  if constexpr (std::is_same_v<S, double>) {
    if (s == 0.0) return 0.0;
    return k * std::pow(s * C, 2.0 / alpha);
  } else {
    if (s.value() == 0.0) throw DomainError("Jet expansion of (sC)^{2/α} at s = 0 is singular");
    return k * pow(s * C, 2.0 / alpha);
  }
}

}  // namespace detail

/// Log of the direct-interference factor.
template <class S>
S log_laplace_direct(const S& s, const LaplaceParams& p) {
  p.validate();
  detail::check_transform_arg(s);
  return detail::ppp_rayleigh_log(s, p.lambda_B, p.C, p.alpha);
}

/// Log of the reflected factor in its published closed form, including the
/// s-independent α/(α−1)·(d_max^{1−1/α} − d_min^{1−1/α}) term.
template <class S>
S log_laplace_reflected_closed_form(const S& s, const LaplaceParams& p) {
  p.validate();
  detail::check_transform_arg(s);
  if (p.lambda_B == 0.0) return detail::zero_like(s);
  const double a = p.alpha;
  const double n = static_cast<double>(p.N);
  const double pi = std::numbers::pi;
  const double slope = 2.0 * pi * pi * p.lambda_R * csc_two_pi_over(a) * n * n * p.C * p.C /
                       (a * a) * (std::log(p.d_max) - std::log(p.d_min));
  const double offset =
      a / (a - 1.0) * (std::pow(p.d_max, 1.0 - 1.0 / a) - std::pow(p.d_min, 1.0 - 1.0 / a));
  return (s * slope + offset) * (-2.0 * pi * p.lambda_B);
}

/// Log of the near-mover factor, with density λ_U_near.
template <class S>
S log_laplace_near(const S& s, const LaplaceParams& p) {
  p.validate();
  detail::check_transform_arg(s);
  return detail::ppp_rayleigh_log(s, p.lambda_U_near(), p.C, p.alpha);
}

template <class S>
S log_laplace_closed_form(const S& s, const LaplaceParams& p, Stage stage) {
  S r = log_laplace_direct(s, p) + log_laplace_reflected_closed_form(s, p);
  if (stage == Stage::after) r += log_laplace_near(s, p);
  return r;
}

/// Closed-form transform before UE movement.
inline double laplace_before(double s, const LaplaceParams& p) {
  return std::exp(log_laplace_closed_form(s, p, Stage::before));
}

/// Closed-form transform after UE movement.
inline double laplace_after(double s, const LaplaceParams& p) {
  return std::exp(log_laplace_closed_form(s, p, Stage::after));
}

// ---------------------------------------------------------------------------
// Quadrature oracle over the PGFL integral forms.

struct OracleOptions {
  quad::Options outer{0.0, 1e-12, 4000};
  quad::Options inner{0.0, 1e-13, 4000};
};

namespace detail {

inline double x_value(double x) { return x; }
inline double x_value(const Jet& x) { return x.value(); }

// 1 − e^x without cancellation for small x.
inline double neg_expm1(double x) { return -std::expm1(x); }
inline Jet neg_expm1(const Jet& x) {
  Jet r = exp(x);
  r[0] = std::expm1(x.value());
  return -r;
}

// ∫₀^∞ (1 − 1/(1 + x·ν^−α)) ν dν with x = s·C (or a Jet in s).
template <class S>
S ppp_rayleigh_integral(const S& x, double alpha, const OracleOptions& opt) {
  const double scale = std::pow(x_value(x), 1.0 / alpha);
  auto f = [&](double nu) -> S {
    const double na = std::pow(nu, alpha);
    return (x * nu) / (x + na);
  };
  return quad::integrate_to_infinity(f, 0.0, scale, opt.outer).value;
}

}  // namespace detail

/// Log of the direct (or near-mover) PGFL factor by quadrature.
template <class S>
S oracle_log_ppp_rayleigh(const S& s, double lambda, const LaplaceParams& p,
                          const OracleOptions& opt = {}) {
  if (lambda == 0.0 || detail::x_value(s) == 0.0) return detail::zero_like(s);
  const S x = s * p.C;
  return detail::ppp_rayleigh_integral(x, p.alpha, opt) * (-2.0 * std::numbers::pi * lambda);
}

/// Log of the reflected PGFL factor by nested quadrature:
///   −2πλ_B ∫ (1 − exp(−2πλ_R ∫ y/(1+y) u du)) ν dν,  y = s·N·C²·ν^−α·u^−α,
/// both distances over [d_min, d_max], integrated in log-distance.
template <class S>
S oracle_log_reflected(const S& s, const LaplaceParams& p, const OracleOptions& opt = {}) {
  if (p.lambda_B == 0.0 || p.lambda_R == 0.0 || detail::x_value(s) == 0.0)
    return detail::zero_like(s);
  const double pi = std::numbers::pi;
  const S k = s * (static_cast<double>(p.N) * p.C * p.C);
  const double lo = std::log(p.d_min), hi = std::log(p.d_max);
  auto inner = [&](double nu) -> S {
    const S kn = k * std::pow(nu, -p.alpha);
    auto g = [&](double t) -> S {
      const double u = std::exp(t);
      const S y = kn * std::pow(u, -p.alpha);
      return y / (y + 1.0) * (u * u);
    };
    return quad::integrate(g, lo, hi, opt.inner).value;
  };
  auto outer = [&](double t) -> S {
    const double nu = std::exp(t);
    const S in = inner(nu) * (-2.0 * pi * p.lambda_R);
    return detail::neg_expm1(in) * (nu * nu);
  };
  return quad::integrate(outer, lo, hi, opt.outer).value * (-2.0 * pi * p.lambda_B);
}

template <class S>
S oracle_log_laplace(const S& s, const LaplaceParams& p, Stage stage,
                     const OracleOptions& opt = {}) {
  p.validate();
  detail::check_transform_arg(s);
  S r = oracle_log_ppp_rayleigh(s, p.lambda_B, p, opt) + oracle_log_reflected(s, p, opt);
  if (stage == Stage::after) r += oracle_log_ppp_rayleigh(s, p.lambda_U_near(), p, opt);
  return r;
}

inline double laplace_quadrature_oracle(double s, const LaplaceParams& p, Stage stage,
                                        const OracleOptions& opt = {}) {
  return std::exp(oracle_log_laplace(s, p, stage, opt));
}

// ---------------------------------------------------------------------------
// Monte Carlo estimate of E{e^{−sI}} under the same point-process model.

struct PgflSamplerOptions {
  /// Radius of the simulated direct/near fields.
  double field_radius = 4000.0;
  /// Add the mean power of the unsimulated fields beyond field_radius,
  /// 2πλC·R^{2−α}/(α−2). Its fluctuation is negligible at the s of interest.
  bool far_field_mean = true;
};

/// One interference draw from the model the PGFL factorisation describes:
/// an HPPP(λ_B) of Rayleigh-faded direct interferers on the field disk; an
/// independent HPPP(λ_B) of reflecting BSs on the [d_min, d_max] annulus,
/// each with its own HPPP(λ_R) of RISs there, contributing
/// N·C²·ν^−α·u^−α·Exp(1) per pair; after movement, an HPPP(λ_U_near) of
/// Rayleigh-faded movers on the field disk.
inline double sample_pgfl_interference(const LaplaceParams& p, Stage stage, Rng& rng,
                                       const PgflSamplerOptions& opt = {}) {
  p.validate();
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double pi = std::numbers::pi;
  auto field = [&](double lambda, double r_in, double r_out) {
    std::vector<double> r;
    if (lambda == 0.0) return r;
    const double area = pi * (r_out * r_out - r_in * r_in);
    const auto n = std::poisson_distribution<long long>(lambda * area)(rng);
    r.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i)
      r.push_back(std::sqrt(r_in * r_in + u01(rng) * (r_out * r_out - r_in * r_in)));
    return r;
  };

  auto far = [&](double lambda) {
    if (!opt.far_field_mean) return 0.0;
    return 2.0 * pi * lambda * p.C * std::pow(opt.field_radius, 2.0 - p.alpha) / (p.alpha - 2.0);
  };

  double total = far(p.lambda_B);
  for (double d : field(p.lambda_B, 0.0, opt.field_radius))
    total += p.C * std::pow(d, -p.alpha) * expo(rng);

  const double nc2 = static_cast<double>(p.N) * p.C * p.C;
  for (double nu : field(p.lambda_B, p.d_min, p.d_max)) {
    const double bs_term = nc2 * std::pow(nu, -p.alpha);
    for (double u : field(p.lambda_R, p.d_min, p.d_max))
      total += bs_term * std::pow(u, -p.alpha) * expo(rng);
  }

  if (stage == Stage::after) {
    total += far(p.lambda_U_near());
    for (double d : field(p.lambda_U_near(), 0.0, opt.field_radius))
      total += p.C * std::pow(d, -p.alpha) * expo(rng);
  }
  return total;
}

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Sample mean of exp(−s·I) with its standard error.
inline Estimate empirical_laplace(double s, std::span<const double> interference) {
  detail::check_transform_arg(s);
  if (interference.empty()) throw ParameterError("empirical_laplace: no samples");
  if (s == 0.0) return {1.0, 0.0};
  double sum = 0.0, sum2 = 0.0;
  for (double i : interference) {
    const double v = std::exp(-s * i);
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(interference.size());
  const double mean = sum / n;
  const double var = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

/// Mean interference of the truncated model (distances ≥ d_min), used to
/// decide where the Monte Carlo estimate is well conditioned.
inline double truncated_mean_interference(const LaplaceParams& p, Stage stage) {
  const double pi = std::numbers::pi;
  const double a = p.alpha;
  const double direct = 2.0 * pi * p.C * std::pow(p.d_min, 2.0 - a) / (a - 2.0);
  auto annulus = [&](double lambda) {
    return 2.0 * pi * lambda * (std::pow(p.d_min, 2.0 - a) - std::pow(p.d_max, 2.0 - a)) / (a - 2.0);
  };
  double m = p.lambda_B * direct +
             static_cast<double>(p.N) * p.C * p.C * annulus(p.lambda_B) * annulus(p.lambda_R);
  if (stage == Stage::after) m += p.lambda_U_near() * direct;
  return m;
}

}  // namespace risprop
