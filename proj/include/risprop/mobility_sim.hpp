#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "risprop/errors.hpp"
#include "risprop/geometry.hpp"
#include "risprop/parallel.hpp"
#include "risprop/rng.hpp"

namespace risprop {

enum class AgentState : std::uint8_t { susceptible, infected };

struct Agent {
  Point position;
  AgentState state = AgentState::susceptible;
};

enum class AbmMode { rate_driven, sinr_driven };

/// Decides whether an agent is in outage this step given how many infected
/// agents are within r_I of it. Used by sinr_driven mode.
using OutageSampler = std::function<bool(int infected_neighbors, Rng& rng)>;

struct AbmConfig {
  int n_agents = 100;
  double lambda_U = 1e-2;     ///< sets the window area to n_agents / λ_U when no window is given
  std::optional<Window> window;
  double r_I = 10.0;
  double beta = 0.1;          ///< per-contact, per-step infection probability
  double mu = 0.1;            ///< per-step recovery probability
  int x0 = 5;
  int steps = 500;
  int runs = 100;
  double max_step = 10.0;     ///< random-walk distance is uniform in [0, max_step]
  std::uint64_t seed = 1;
  AbmMode mode = AbmMode::rate_driven;
  OutageSampler outage_sampler;  ///< required in sinr_driven mode
  int threads = 0;

  Window resolved_window() const {
    if (window) return *window;
    detail::require(lambda_U > 0.0, "lambda_U must be > 0 to size the ABM window");
    return Window::disk(std::sqrt(static_cast<double>(n_agents) / (lambda_U * std::numbers::pi)));
  }

  void validate() const {
    detail::require(n_agents >= 1, "n_agents must be >= 1");
    detail::require(beta >= 0.0 && beta <= 1.0, "beta must be a probability");
    detail::require(mu >= 0.0 && mu <= 1.0, "mu must be a probability");
    detail::require(r_I > 0.0, "r_I must be > 0");
    detail::require(x0 >= 0 && x0 <= n_agents, "x0 must lie in [0, n_agents]");
    detail::require(steps >= 1, "steps must be >= 1");
    detail::require(runs >= 1, "runs must be >= 1");
    detail::require(max_step >= 0.0, "max_step must be >= 0");
    if (mode == AbmMode::sinr_driven)
      detail::require(static_cast<bool>(outage_sampler), "sinr_driven mode needs an outage sampler");
  }
};

/// Uniform direction, uniform distance in [0, max_step], reflected at the
/// window boundary.
inline Point random_walk_step(const Point& p, const Window& w, Rng& rng, double max_step = 10.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double th = 2.0 * std::numbers::pi * u(rng);
  const double d = max_step * u(rng);
  return w.reflect({p.x + d * std::cos(th), p.y + d * std::sin(th)});
}

inline std::vector<Agent> initial_agents(const AbmConfig& cfg, Rng& rng) {
  const Window w = cfg.resolved_window();
  std::vector<Agent> a(static_cast<std::size_t>(cfg.n_agents));
  for (auto& ag : a) ag.position = w.sample_uniform(rng);
  for (int i = 0; i < cfg.x0; ++i) a[static_cast<std::size_t>(i)].state = AgentState::infected;
  return a;
}

inline int count_infected(const std::vector<Agent>& a) {
  int x = 0;
  for (const auto& ag : a) x += ag.state == AgentState::infected;
  return x;
}

/// One synchronous step: all transitions are computed from the current
/// states, then applied, then every agent moves.
///
/// rate_driven: agent i is infected next step iff it stays infected (no
/// recovery draw < μ) or some infected agent within r_I transmits (contact
/// draw < β). One contact draw is made per in-range ordered pair and one
/// recovery draw per agent regardless of state, so runs that differ only in
/// β share every random number and X(t) is monotone in β.
inline void abm_step(std::vector<Agent>& agents, const AbmConfig& cfg, const Window& w,
                     Rng& infection_rng, Rng& move_rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = agents.size();
  const double r2 = cfg.r_I * cfg.r_I;
  std::vector<AgentState> next(n, AgentState::susceptible);

  if (cfg.mode == AbmMode::rate_driven) {
    std::vector<char> hit(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        const double dx = agents[i].position.x - agents[j].position.x;
        const double dy = agents[i].position.y - agents[j].position.y;
        if (dx * dx + dy * dy > r2) continue;
        const bool fires = u(infection_rng) < cfg.beta;
        if (fires && agents[j].state == AgentState::infected) hit[i] = 1;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const bool recovers = u(infection_rng) < cfg.mu;
      const bool stays = agents[i].state == AgentState::infected && !recovers;
      next[i] = (stays || hit[i]) ? AgentState::infected : AgentState::susceptible;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      int infected_near = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || agents[j].state != AgentState::infected) continue;
        const double dx = agents[i].position.x - agents[j].position.x;
        const double dy = agents[i].position.y - agents[j].position.y;
        if (dx * dx + dy * dy <= r2) ++infected_near;
      }
      next[i] = cfg.outage_sampler(infected_near, infection_rng) ? AgentState::infected
                                                                 : AgentState::susceptible;
    }
  }

  for (std::size_t i = 0; i < n; ++i) agents[i].state = next[i];
  for (auto& ag : agents) ag.position = random_walk_step(ag.position, w, move_rng, cfg.max_step);
}

/// X(t) for t = 0..steps of one run.
inline std::vector<int> simulate_abm_run(const AbmConfig& cfg, std::uint64_t run_index) {
  cfg.validate();
  const Window w = cfg.resolved_window();
  Rng place_rng = make_rng(cfg.seed, run_index, 10);
  Rng move_rng = make_rng(cfg.seed, run_index, 11);
  Rng infection_rng = make_rng(cfg.seed, run_index, 12);
  auto agents = initial_agents(cfg, place_rng);
  std::vector<int> x;
  x.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  x.push_back(count_infected(agents));
  for (int t = 0; t < cfg.steps; ++t) {
    abm_step(agents, cfg, w, infection_rng, move_rng);
    x.push_back(count_infected(agents));
  }
  return x;
}

struct AbmSeriesPoint {
  int t = 0;
  double mean_S = 0.0;
  double mean_X = 0.0;
  double stderr_X = 0.0;
};

/// Ensemble-averaged (S, X) over cfg.runs independent runs.
inline std::vector<AbmSeriesPoint> run_abm(const AbmConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<int>> runs(static_cast<std::size_t>(cfg.runs));
  parallel_for(runs.size(), resolve_threads(cfg.threads),
               [&](std::size_t r) { runs[r] = simulate_abm_run(cfg, r); });
  const auto len = static_cast<std::size_t>(cfg.steps) + 1;
  std::vector<AbmSeriesPoint> out(len);
  const double n = static_cast<double>(runs.size());
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0, sum2 = 0.0;
    for (const auto& r : runs) {
      sum += r[t];
      sum2 += static_cast<double>(r[t]) * r[t];
    }
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
    out[t] = {static_cast<int>(t), cfg.n_agents - mean, mean, std::sqrt(var / n)};
  }
  return out;
}

}  // namespace risprop
