#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "risprop/errors.hpp"
#include "risprop/interference_analytic.hpp"
#include "risprop/jet.hpp"
#include "risprop/power_analytic.hpp"

namespace risprop {

/// Which transform feeds the outage series.
enum class LaplaceModel {
  closed_form,  ///< published closed form
  quadrature,   ///< PGFL integrals by adaptive quadrature
};

struct OutageParams {
  GammaFit fit;            ///< gamma fit of S₀
  double T = 1e-2;         ///< SINR threshold, linear
  double P = 1e-3;         ///< transmit power, W
  double sigma2 = 1e-12;   ///< noise power, W
  LaplaceParams laplace;
  int series_order = 0;    ///< terms in the sum; 0 selects round(shape) clamped to [1, 60]
  LaplaceModel model = LaplaceModel::closed_form;
  OracleOptions oracle;

  int effective_order() const {
    if (series_order > 60) throw ParameterError("series_order above 60 is ill-conditioned");
    if (series_order >= 1) return series_order;
    if (series_order < 0) throw ParameterError("series_order must be >= 0");
    const double k = std::round(fit.shape);
    return static_cast<int>(std::clamp(k, 1.0, 60.0));
  }
};

/// Taylor jet at s = 1 of exp(−s·T·σ²/(P·η))·L(s·T/η), with `order`+1
/// coefficients.
inline Jet jet_compose_transform(const OutageParams& p, Stage stage, std::size_t order) {
  if (order > 60) throw ParameterError("jet order above 60 is ill-conditioned");
  if (!(p.T >= 0.0)) throw ParameterError("T must be >= 0");
  if (!(p.P > 0.0)) throw ParameterError("P must be > 0");
  if (!(p.fit.scale > 0.0) || !(p.fit.shape > 0.0))
    throw ParameterError("gamma fit must have positive shape and scale");
  const Jet s = Jet::variable(1.0, order);
  const double b = p.T / p.fit.scale;
  Jet log_f = s * (-p.T * p.sigma2 / (p.P * p.fit.scale));
  if (b > 0.0) {
    const Jet arg = s * b;
    log_f += p.model == LaplaceModel::closed_form
                 ? log_laplace_closed_form(arg, p.laplace, stage)
                 : oracle_log_laplace(arg, p.laplace, stage, p.oracle);
  }
  Jet f = exp(log_f);
  if (!f.all_finite())
    throw NumericError("jet_compose_transform: non-finite coefficient at order " +
                       std::to_string(order));
  return f;
}

struct OutageResult {
  double probability = 0.0;  ///< clamped to [0, 1]
  double coverage = 1.0;     ///< raw series value Σ (−1)^x c_x
  double condition = 1.0;    ///< Σ|terms| / |Σ terms|; large means cancellation
  int order = 1;
};

/// P_o = 1 − Σ_{x<k} (−1)^x/x! · f^{(x)}(1).
inline OutageResult outage_series(const OutageParams& p, Stage stage) {
  const int k = p.effective_order();
  OutageResult r;
  r.order = k;
  if (p.T == 0.0) {
    r.probability = 0.0;
    return r;
  }
  const Jet f = jet_compose_transform(p, stage, static_cast<std::size_t>(k - 1));
  double sum = 0.0, abs_sum = 0.0;
  for (int x = 0; x < k; ++x) {
    const double term = (x % 2 == 0 ? 1.0 : -1.0) * f[static_cast<std::size_t>(x)];
    sum += term;
    abs_sum += std::abs(term);
  }
  r.coverage = sum;
  r.condition = sum != 0.0 ? abs_sum / std::abs(sum) : std::numeric_limits<double>::infinity();
  r.probability = std::clamp(1.0 - sum, 0.0, 1.0);
  return r;
}

inline double outage_probability(const OutageParams& p, Stage stage) {
  return outage_series(p, stage).probability;
}

namespace detail {
inline void check_probability(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}
}  // namespace detail

/// β = (1 − P_o)·P_o'.
inline double infection_rate(double po, double po_prime) {
  detail::check_probability(po, "P_o");
  detail::check_probability(po_prime, "P_o'");
  return (1.0 - po) * po_prime;
}

/// μ = P_o·(1 − P_o').
inline double recovery_rate(double po, double po_prime) {
  detail::check_probability(po, "P_o");
  detail::check_probability(po_prime, "P_o'");
  return po * (1.0 - po_prime);
}

struct PropagationIntensity {
  enum class Status { finite, infinite, undefined };
  double value = 0.0;
  Status status = Status::finite;
  double beta = 0.0;
  double mu = 0.0;
};

/// Rates at or below this are indistinguishable from rounding of 1 − P.
inline constexpr double kRateResolution = 1e-12;

/// R₀ = β/μ. μ at or below kRateResolution is reported as +∞, or undefined
/// when β is that small too.
inline PropagationIntensity propagation_intensity(double po, double po_prime) {
  PropagationIntensity r;
  r.beta = infection_rate(po, po_prime);
  r.mu = recovery_rate(po, po_prime);
  if (r.mu > kRateResolution) {
    r.value = r.beta / r.mu;
  } else if (r.beta > kRateResolution) {
    r.value = std::numeric_limits<double>::infinity();
    r.status = PropagationIntensity::Status::infinite;
  } else {
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.status = PropagationIntensity::Status::undefined;
  }
  return r;
}

struct SisParams {
  double beta = 0.01;
  double mu = 0.5;
  double n_total = 100.0;
  double x0 = 5.0;

  void validate() const {
    detail::require(beta >= 0.0 && mu >= 0.0, "beta and mu must be >= 0");
    detail::require(n_total >= 0.0, "n_total must be >= 0");
    detail::require(x0 >= 0.0 && x0 <= n_total, "x0 must lie in [0, n_total]");
  }
};

struct SisPoint {
  double t = 0.0;
  double S = 0.0;
  double X = 0.0;
};

/// RK4 on dX/dt = βXS − μX with S = N_U − X.
inline std::vector<SisPoint> sis_ode_solve(const SisParams& p, double t_end, double dt) {
  p.validate();
  if (!(dt > 0.0) || !(t_end > 0.0)) throw ParameterError("sis_ode_solve: dt and t_end must be > 0");
  const auto rhs = [&](double x) { return p.beta * x * (p.n_total - x) - p.mu * x; };
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  std::vector<SisPoint> out;
  out.reserve(steps + 1);
  double x = p.x0;
  out.push_back({0.0, p.n_total - x, x});
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t0 = static_cast<double>(i - 1) * dt;
    const double h = std::min(dt, t_end - t0);
    const double k1 = rhs(x);
    const double k2 = rhs(x + 0.5 * h * k1);
    const double k3 = rhs(x + 0.5 * h * k2);
    const double k4 = rhs(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back({t0 + h, p.n_total - x, x});
  }
  return out;
}

/// Exact solution of the SIS equation (logistic form).
inline double sis_logistic(const SisParams& p, double t) {
  p.validate();
  if (p.x0 == 0.0) return 0.0;
  const double r = p.beta * p.n_total - p.mu;
  if (r == 0.0) return p.x0 / (1.0 + p.beta * p.x0 * t);
  const double e = std::exp(r * t);
  if (!std::isfinite(e)) return r / p.beta;
  return r * p.x0 * e / (r + p.beta * p.x0 * (e - 1.0));
}

/// X* = max(0, N_U − μ/β); 0 when β = 0.
inline double sis_equilibrium(const SisParams& p) {
  p.validate();
  if (p.beta == 0.0) return 0.0;
  return std::max(0.0, p.n_total - p.mu / p.beta);
}

}  // namespace risprop
