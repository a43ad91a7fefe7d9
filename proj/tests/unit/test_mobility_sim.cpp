#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "risprop/errors.hpp"
#include "risprop/mobility_sim.hpp"

using namespace risprop;

namespace {

AbmConfig small(double beta, double mu, int x0) {
  AbmConfig c;
  c.n_agents = 60;
  c.lambda_U = 5e-3;
  c.beta = beta;
  c.mu = mu;
  c.x0 = x0;
  c.steps = 80;
  c.runs = 8;
  c.seed = 7;
  c.threads = 1;
  return c;
}

}  // namespace

TEST(Mobility, WindowFromDensity) {
  AbmConfig c;
  c.n_agents = 100;
  c.lambda_U = 1e-2;
  const Window w = c.resolved_window();
  EXPECT_NEAR(w.area(), 1e4, 1e-6);
  c.window = Window::rectangle(5.0, 5.0);
  EXPECT_EQ(c.resolved_window().shape(), Window::Shape::rectangle);
}

TEST(Mobility, RandomWalkStaysInWindowAndBoundsStep) {
  const Window w = Window::disk(20.0);
  Rng rng = make_rng(3);
  Point p{0.0, 0.0};
  for (int i = 0; i < 20000; ++i) {
    const Point q = random_walk_step(p, w, rng, 10.0);
    ASSERT_TRUE(w.contains(q));
    p = q;
  }
  const Window big = Window::disk(1e6);
  for (int i = 0; i < 1000; ++i) {
    const Point q = random_walk_step({0.0, 0.0}, big, rng, 10.0);
    ASSERT_LE(std::hypot(q.x, q.y), 10.0 + 1e-12);
  }
}

TEST(Mobility, ConservesPopulation) {
  for (AbmMode mode : {AbmMode::rate_driven, AbmMode::sinr_driven}) {
    AbmConfig c = small(0.2, 0.1, 5);
    c.mode = mode;
    c.outage_sampler = [](int near, Rng& rng) {
      return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < (near > 0 ? 0.4 : 0.05);
    };
    for (const auto& pt : run_abm(c)) {
      EXPECT_NEAR(pt.mean_S + pt.mean_X, c.n_agents, 1e-9);
      EXPECT_GE(pt.mean_X, 0.0);
      EXPECT_LE(pt.mean_X, c.n_agents);
    }
  }
}

TEST(Mobility, NoInfectedIsAbsorbing) {
  const AbmConfig c = small(1.0, 0.0, 0);
  for (int r = 0; r < 3; ++r)
    for (int x : simulate_abm_run(c, r)) EXPECT_EQ(x, 0);
}

TEST(Mobility, FullRecoveryClearsInfectionWithoutContacts) {
  const AbmConfig c = small(0.0, 1.0, 10);
  const auto x = simulate_abm_run(c, 0);
  EXPECT_EQ(x[0], 10);
  for (std::size_t t = 1; t < x.size(); ++t) EXPECT_EQ(x[t], 0);
}

TEST(Mobility, MonotoneInInfectionProbability) {
  // Shared random numbers make X(t) pathwise monotone in beta.
  for (std::uint64_t r = 0; r < 5; ++r) {
    const auto lo = simulate_abm_run(small(0.05, 0.1, 5), r);
    const auto hi = simulate_abm_run(small(0.3, 0.1, 5), r);
    for (std::size_t t = 0; t < lo.size(); ++t) ASSERT_LE(lo[t], hi[t]) << "run " << r << " t " << t;
  }
}

TEST(Mobility, DeterministicAndThreadInvariant) {
  AbmConfig a = small(0.2, 0.1, 5);
  AbmConfig b = a;
  b.threads = 3;
  const auto x = run_abm(a), y = run_abm(b);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    EXPECT_EQ(x[t].mean_X, y[t].mean_X);
    EXPECT_EQ(x[t].stderr_X, y[t].stderr_X);
  }
  AbmConfig c = a;
  c.seed = 8;
  const auto z = run_abm(c);
  bool differs = false;
  for (std::size_t t = 0; t < x.size(); ++t) differs |= x[t].mean_X != z[t].mean_X;
  EXPECT_TRUE(differs);
}

TEST(Mobility, InvalidConfig) {
  AbmConfig c = small(0.2, 0.1, 5);
  c.x0 = 61;
  EXPECT_THROW(c.validate(), ParameterError);
  c = small(1.5, 0.1, 5);
  EXPECT_THROW(c.validate(), ParameterError);
  c = small(0.2, 0.1, 5);
  c.mode = AbmMode::sinr_driven;
  EXPECT_THROW(c.validate(), ParameterError);
  c = small(0.2, 0.1, 5);
  c.lambda_U = 0.0;
  EXPECT_THROW(c.resolved_window(), ParameterError);
}
