#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "risprop/channel.hpp"
#include "risprop/errors.hpp"
#include "risprop/geometry.hpp"
#include "risprop/outage_epidemic.hpp"
#include "risprop/parallel.hpp"
#include "risprop/rng.hpp"

namespace risprop {

/// Distances of the typical user's serving link, held fixed across trials
/// so the empirical S₀ matches one gamma fit.
struct ServingGeometry {
  double d_ik = 100.0;  ///< BS to UE
  double d_ij = 30.0;   ///< BS to RIS
  double d_jk = 80.0;   ///< RIS to UE

  void validate() const {
    detail::require(d_ik > 0.0 && d_ij > 0.0 && d_jk > 0.0, "serving distances must be > 0");
    detail::require(d_ij + d_jk >= d_ik && d_ik + d_ij >= d_jk && d_ik + d_jk >= d_ij,
                    "serving distances violate the triangle inequality");
  }

  Point bs_position() const { return {d_ik, 0.0}; }

  /// RIS placed to satisfy all three distances (upper half-plane).
  Point ris_position() const {
    validate();
    const double x = (d_jk * d_jk - d_ij * d_ij + d_ik * d_ik) / (2.0 * d_ik);
    return {x, std::sqrt(std::max(0.0, d_jk * d_jk - x * x))};
  }
};

/// How UEs that move near the typical user add interference.
enum class MoverModel {
  /// Σ over cells of Poisson(λ_U·π·r_I²) emitters, uniform in the window,
  /// each C·ν^-α·Exp(1): the point process behind the near-mover factor.
  pgfl_equivalent,
  /// Poisson(λ_U·π·r_I²) UEs uniform within r_I of U₀; each leaks its
  /// serving RIS beam N·C²·(d_ij·d_jk)^-α·Exp(1) onto U₀.
  reflected,
};

struct ScenarioConfig {
  TopologyConfig topology;
  ChannelParams channel;
  ServingGeometry serving;
  PhaseConfig phase;
  InterferenceOptions interference;
  MoverModel mover = MoverModel::pgfl_equivalent;
  double r_I = 10.0;
  std::uint64_t seed = 1;
  int threads = 0;

  void validate() const {
    topology.validate();
    channel.validate();
    serving.validate();
    phase.validate();
    detail::require(r_I > 0.0, "r_I must be > 0");
  }
};

struct TrialResult {
  double s0 = 0.0;        ///< serving power before movement
  double s0_after = 0.0;  ///< serving power after movement (fresh fading)
  double i_before = 0.0;
  double i_after = 0.0;
  int interferers = 0;    ///< interfering BSs in the window
  int movers = 0;         ///< near mobile interferers after movement
};

inline double sinr(double P, double s0, double interference, double sigma2) {
  const double den = P * interference + sigma2;
  if (den == 0.0) return s0 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return P * s0 / den;
}

/// Samples the network around a typical user at the origin whose serving
/// BS and RIS sit at the pinned geometry. Sampled BSs that would be closer
/// to U₀ than the serving BS, or that violate the hard core around it, are
/// removed so nearest-BS association holds.
inline NetworkTopology sample_scenario_topology(const ScenarioConfig& cfg, Rng& rng) {
  const TopologyConfig& tc = cfg.topology;
  NetworkTopology t;
  t.window = tc.window;
  const Point serving_bs = cfg.serving.bs_position();
  t.bs.push_back(serving_bs);
  t.ris.push_back({cfg.serving.ris_position(), 0});
  for (const Point& p : sample_mhcpp(tc.lambda_B, tc.r_B, tc.window, rng)) {
    if (norm(p) < cfg.serving.d_ik) continue;
    if (distance(p, serving_bs) < tc.r_B) continue;
    t.bs.push_back(p);
  }
  if (t.bs.size() > 1 && tc.lambda_R > 0.0) {
    const std::span<const Point> others(t.bs.data() + 1, t.bs.size() - 1);
    for (RisSite r : sample_ris_clusters(others, tc.lambda_R, tc.lambda_B, tc.r_R, rng)) {
      r.parent_bs += 1;
      t.ris.push_back(r);
    }
  }
  t.ue.push_back({0.0, 0.0});
  resolve_associations(t);
  return t;
}

namespace detail {

inline double mover_interference(const ScenarioConfig& cfg, const NetworkTopology& topo, Rng& rng,
                                 int& count) {
  const double per_cell = cfg.topology.lambda_U * std::numbers::pi * cfg.r_I * cfg.r_I;
  std::exponential_distribution<double> expo(1.0);
  double total = 0.0;
  if (cfg.mover == MoverModel::pgfl_equivalent) {
    const double mean = per_cell * static_cast<double>(topo.bs.size());
    count = mean > 0.0 ? static_cast<int>(std::poisson_distribution<long long>(mean)(rng)) : 0;
    for (int k = 0; k < count; ++k) {
      const Point p = cfg.topology.window.sample_uniform(rng);
      const double d = std::max(norm(p), cfg.interference.min_distance);
      total += cfg.channel.C * std::pow(d, -cfg.channel.alpha) * expo(rng);
    }
    return total;
  }
  count = per_cell > 0.0 ? static_cast<int>(std::poisson_distribution<long long>(per_cell)(rng)) : 0;
  const Window near = Window::disk(cfg.r_I);
  for (int k = 0; k < count; ++k)
    total += mover_reflection(topo, near.sample_uniform(rng), {0.0, 0.0}, cfg.channel, rng,
                              cfg.interference);
  return total;
}

}  // namespace detail

/// One independent trial; fully determined by (cfg.seed, index).
inline TrialResult simulate_trial(const ScenarioConfig& cfg, std::uint64_t index) {
  Rng rng = make_rng(cfg.seed, index, 20);
  const NetworkTopology topo = sample_scenario_topology(cfg, rng);
  const ChannelParams& ch = cfg.channel;
  const double pld = pathloss_direct(ch.C, cfg.serving.d_ik, ch.alpha);
  const double plr = pathloss_reflected(ch.C, cfg.serving.d_ij, cfg.serving.d_jk, ch.alpha);
  const Point origin{0.0, 0.0};

  TrialResult r;
  r.interferers = static_cast<int>(topo.bs.size()) - 1;
  r.s0 = serving_power_realization(pld, plr, ch.N, ch.m1, ch.m2, rng, cfg.phase);
  r.i_before = interference_from_bs(topo.bs, topo.ris, 0, origin, ch, rng, cfg.interference);
  r.s0_after = serving_power_realization(pld, plr, ch.N, ch.m1, ch.m2, rng, cfg.phase);
  r.i_after = interference_from_bs(topo.bs, topo.ris, 0, origin, ch, rng, cfg.interference);
  r.i_after += detail::mover_interference(cfg, topo, rng, r.movers);
  return r;
}

inline std::vector<TrialResult> run_trials(const ScenarioConfig& cfg, std::size_t trials) {
  cfg.validate();
  std::vector<TrialResult> out(trials);
  parallel_for(trials, resolve_threads(cfg.threads),
               [&](std::size_t i) { out[i] = simulate_trial(cfg, i); });
  return out;
}

struct OutageEstimate {
  double po = 0.0;
  double po_prime = 0.0;
  double stderr_po = 0.0;
  double stderr_po_prime = 0.0;
  std::size_t trials = 0;
};

inline double binomial_stderr(double p, std::size_t n) {
  return n > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
}

/// Fraction of trials with SINR < T before and after movement.
inline OutageEstimate empirical_outage(std::span<const TrialResult> trials, double P, double sigma2,
                                       double T) {
  if (trials.empty()) throw ParameterError("empirical_outage: no trials");
  std::size_t before = 0, after = 0;
  for (const auto& t : trials) {
    before += sinr(P, t.s0, t.i_before, sigma2) < T;
    after += sinr(P, t.s0_after, t.i_after, sigma2) < T;
  }
  OutageEstimate e;
  e.trials = trials.size();
  e.po = static_cast<double>(before) / static_cast<double>(e.trials);
  e.po_prime = static_cast<double>(after) / static_cast<double>(e.trials);
  e.stderr_po = binomial_stderr(e.po, e.trials);
  e.stderr_po_prime = binomial_stderr(e.po_prime, e.trials);
  return e;
}

struct RateEstimate {
  double beta_hat = 0.0;
  double mu_hat = 0.0;
  PropagationIntensity r0;
  std::size_t infected = 0;   ///< before: no outage, after: outage
  std::size_t recovered = 0;  ///< before: outage, after: no outage
  std::size_t unchanged = 0;
};

/// Transition frequencies of paired before/after outcomes.
inline RateEstimate empirical_rates(std::span<const TrialResult> trials, double P, double sigma2,
                                    double T) {
  if (trials.empty()) throw ParameterError("empirical_rates: no trials");
  RateEstimate e;
  for (const auto& t : trials) {
    const bool b = sinr(P, t.s0, t.i_before, sigma2) < T;
    const bool a = sinr(P, t.s0_after, t.i_after, sigma2) < T;
    if (!b && a)
      ++e.infected;
    else if (b && !a)
      ++e.recovered;
    else
      ++e.unchanged;
  }
  const double n = static_cast<double>(trials.size());
  e.beta_hat = static_cast<double>(e.infected) / n;
  e.mu_hat = static_cast<double>(e.recovered) / n;
  e.r0.beta = e.beta_hat;
  e.r0.mu = e.mu_hat;
  if (e.mu_hat > 0.0) {
    e.r0.value = e.beta_hat / e.mu_hat;
  } else {
    e.r0.value = e.beta_hat > 0.0 ? std::numeric_limits<double>::infinity()
                                  : std::numeric_limits<double>::quiet_NaN();
    e.r0.status = e.beta_hat > 0.0 ? PropagationIntensity::Status::infinite
                                   : PropagationIntensity::Status::undefined;
  }
  return e;
}

/// Serving-power samples alone (no interference), for the S₀ fit check.
inline std::vector<double> sample_s0(const ScenarioConfig& cfg, std::size_t trials) {
  cfg.validate();
  const ChannelParams& ch = cfg.channel;
  const double pld = pathloss_direct(ch.C, cfg.serving.d_ik, ch.alpha);
  const double plr = pathloss_reflected(ch.C, cfg.serving.d_ij, cfg.serving.d_jk, ch.alpha);
  std::vector<double> out(trials);
  parallel_for(trials, resolve_threads(cfg.threads), [&](std::size_t i) {
    Rng rng = make_rng(cfg.seed, i, 21);
    out[i] = serving_power_realization(pld, plr, ch.N, ch.m1, ch.m2, rng, cfg.phase);
  });
  return out;
}

/// sup |F_n − F| of the empirical CDF of `samples` against `cdf`.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ParameterError("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

/// Interference draws from the PGFL model, one per index.
inline std::vector<double> sample_laplace_ensemble(const LaplaceParams& p, Stage stage,
                                                   std::size_t trials, std::uint64_t seed,
                                                   int threads = 0,
                                                   const PgflSamplerOptions& opt = {}) {
  std::vector<double> out(trials);
  const std::uint64_t stream = stage == Stage::before ? 30 : 31;
  parallel_for(trials, resolve_threads(threads), [&](std::size_t i) {
    Rng rng = make_rng(seed, i, stream);
    out[i] = sample_pgfl_interference(p, stage, rng, opt);
  });
  return out;
}

}  // namespace risprop
