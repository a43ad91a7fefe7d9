#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "risprop/errors.hpp"
#include "risprop/special_functions.hpp"

namespace risprop {

struct MomentPair {
  double mean = 0.0;
  double second_moment = 0.0;

  double variance() const noexcept { return second_moment - mean * mean; }
};

struct GammaFit {
  double shape = 1.0;
  double scale = 1.0;

  double mean() const noexcept { return shape * scale; }
  double variance() const noexcept { return shape * scale * scale; }
};

/// E|h| for a unit-power Nakagami-m amplitude: Γ(m+½)/(Γ(m)·√m).
inline double nakagami_amplitude_mean(double m) {
  if (!(m >= 0.5) || !std::isfinite(m))
    throw DomainError("nakagami_amplitude_mean: m must be >= 0.5");
  return std::exp(ln_gamma(m + 0.5) - ln_gamma(m)) / std::sqrt(m);
}

/// Moments of S_r = Σₙ |h_ij,n||h_jk,n|.
inline MomentPair sr_moments(int N, double m1, double m2) {
  if (N < 1) throw ParameterError("sr_moments: N must be >= 1");
  const double mu = nakagami_amplitude_mean(m1) * nakagami_amplitude_mean(m2);
  const double n = static_cast<double>(N);
  return {n * mu, n + n * (n - 1.0) * mu * mu};
}

inline GammaFit gamma_fit_from_moments(const MomentPair& mp) {
  if (!(mp.mean > 0.0) || !std::isfinite(mp.mean))
    throw DegenerateError("gamma fit: mean must be positive and finite");
  const double var = mp.variance();
  if (!(var > 0.0) || var <= 1e-14 * mp.mean * mp.mean)
    throw DegenerateError("gamma fit: variance is zero (degenerate distribution)");
  return {mp.mean * mp.mean / var, var / mp.mean};
}

inline MomentPair moments_of(const GammaFit& g) noexcept {
  return {g.mean(), g.variance() + g.mean() * g.mean()};
}

namespace detail {

// E|g₀|ⁿ for a unit-power Rayleigh amplitude: Γ(1 + n/2).
inline double rayleigh_abs_moment(int n) { return std::exp(ln_gamma(1.0 + 0.5 * n)); }

inline void check_pathloss(double pl_direct, double pl_reflected) {
  if (!(pl_direct >= 0.0) || !(pl_reflected >= 0.0) || !std::isfinite(pl_direct) ||
      !std::isfinite(pl_reflected))
    throw ParameterError("s0 moments: path-loss gains must be finite and >= 0");
}

}  // namespace detail

/// Moments of S₀ = (√PL_d·|g₀| + √PL_r·S_r)². The mean uses the exact S_r
/// moments; the second moment expands the fourth power binomially, taking
/// E{S_r³}, E{S_r⁴} from the gamma fit of S_r.
inline MomentPair s0_moments(double pl_direct, double pl_reflected, int N, double m1, double m2) {
  detail::check_pathloss(pl_direct, pl_reflected);
  const double a = std::sqrt(pl_direct);
  const double b = std::sqrt(pl_reflected);
  const MomentPair sr = sr_moments(N, m1, m2);

  std::array<double, 5> esr{1.0, sr.mean, sr.second_moment, 0.0, 0.0};
  if (N > 1) {
    const GammaFit g = gamma_fit_from_moments(sr);
    esr[3] = std::pow(g.scale, 3) * rising_factorial(g.shape, 3);
    esr[4] = std::pow(g.scale, 4) * rising_factorial(g.shape, 4);
  } else {
    // N = 1: S_r is a product of two independent Nakagami amplitudes.
    auto raw = [](double m, int n) {
      return std::exp(ln_gamma(m + 0.5 * n) - ln_gamma(m)) / std::pow(m, 0.5 * n);
    };
    esr[3] = raw(m1, 3) * raw(m2, 3);
    esr[4] = raw(m1, 4) * raw(m2, 4);
  }

  constexpr std::array<double, 5> binom{1.0, 4.0, 6.0, 4.0, 1.0};
  double second = 0.0;
  for (int j = 0; j <= 4; ++j)
    second += binom[j] * std::pow(a, 4 - j) * std::pow(b, j) *
              detail::rayleigh_abs_moment(4 - j) * esr[j];
  const double mean = pl_direct + 2.0 * a * b * detail::rayleigh_abs_moment(1) * sr.mean +
                      pl_reflected * sr.second_moment;
  return {mean, second};
}

/// The second moment with the cross coefficient 4·√(PL_r/PL_d³) exactly as
/// the published expansion prints it. Kept for side-by-side reporting only:
/// the coefficient is dimensionally inconsistent (see README).
inline double s0_second_moment_as_printed(double pl_direct, double pl_reflected, int N, double m1,
                                          double m2) {
  detail::check_pathloss(pl_direct, pl_reflected);
  if (pl_direct == 0.0) return s0_moments(pl_direct, pl_reflected, N, m1, m2).second_moment;
  const MomentPair sr = sr_moments(N, m1, m2);
  const GammaFit g = gamma_fit_from_moments(sr);
  const double k = g.shape, e = g.scale;
  const double pd = pl_direct, pr = pl_reflected;
  return pd * pd * 2.0 +
         4.0 * std::sqrt(pd * pd * pd * pr) * std::exp(ln_gamma(2.5)) * k * e +
         6.0 * pd * pr * 1.0 * k * (k + 1.0) * e * e +
         4.0 * pd * pd * std::sqrt(pr / (pd * pd * pd)) * std::exp(ln_gamma(1.5)) * k * (k + 1.0) *
             (k + 2.0) * e * e * e +
         pr * pr * k * (k + 1.0) * (k + 2.0) * (k + 3.0) * e * e * e * e;
}

inline GammaFit s0_gamma_fit(double pl_direct, double pl_reflected, int N, double m1, double m2) {
  return gamma_fit_from_moments(s0_moments(pl_direct, pl_reflected, N, m1, m2));
}

inline double s0_gamma_cdf(double x, const GammaFit& fit) {
  if (!(x >= 0.0) || std::isnan(x)) throw DomainError("s0_gamma_cdf: x must be >= 0");
  if (!(fit.shape > 0.0) || !(fit.scale > 0.0))
    throw ParameterError("s0_gamma_cdf: fit must have positive shape and scale");
  return lower_incomplete_gamma_regularized(fit.shape, x / fit.scale);
}

inline double s0_gamma_pdf(double x, const GammaFit& fit) {
  if (!(x >= 0.0)) throw DomainError("s0_gamma_pdf: x must be >= 0");
  if (x == 0.0) return fit.shape < 1.0 ? std::numeric_limits<double>::infinity()
                                       : (fit.shape == 1.0 ? 1.0 / fit.scale : 0.0);
  const double z = x / fit.scale;
  return std::exp((fit.shape - 1.0) * std::log(z) - z - ln_gamma(fit.shape)) / fit.scale;
}

}  // namespace risprop
