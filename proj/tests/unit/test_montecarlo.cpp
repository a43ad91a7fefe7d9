#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "risprop/errors.hpp"
#include "risprop/montecarlo.hpp"
#include "risprop/power_analytic.hpp"

using namespace risprop;

namespace {

ScenarioConfig scenario(int threads = 1) {
  ScenarioConfig c;
  c.seed = 11;
  c.threads = threads;
  return c;
}

}  // namespace

TEST(ServingGeometry, RisPositionHonoursDistances) {
  const ServingGeometry g;
  const Point r = g.ris_position();
  EXPECT_NEAR(std::hypot(r.x, r.y), g.d_jk, 1e-9);
  EXPECT_NEAR(distance(r, g.bs_position()), g.d_ij, 1e-9);
  EXPECT_GE(r.y, 0.0);
  ServingGeometry bad{100.0, 10.0, 20.0};
  EXPECT_THROW(bad.validate(), ParameterError);
}

TEST(Sinr, Basics) {
  EXPECT_DOUBLE_EQ(sinr(2.0, 3.0, 1.0, 2.0), 1.5);
  EXPECT_TRUE(std::isinf(sinr(1.0, 1.0, 0.0, 0.0)));
  EXPECT_EQ(sinr(1.0, 0.0, 0.0, 0.0), 0.0);
}

TEST(ScenarioTopology, ServingBsIsNearestAndHardCoreHolds) {
  const ScenarioConfig c = scenario();
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = make_rng(c.seed, i, 20);
    const NetworkTopology t = sample_scenario_topology(c, rng);
    ASSERT_GE(t.bs.size(), 1u);
    for (std::size_t k = 1; k < t.bs.size(); ++k) {
      EXPECT_GE(norm(t.bs[k]), c.serving.d_ik);
      EXPECT_GE(distance(t.bs[k], t.bs[0]), c.topology.r_B);
    }
    EXPECT_EQ(t.ris[0].parent_bs, 0u);
  }
}

TEST(Trials, DeterministicAndThreadInvariant) {
  const auto a = run_trials(scenario(1), 400);
  const auto b = run_trials(scenario(3), 400);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].s0, b[i].s0);
    EXPECT_EQ(a[i].i_before, b[i].i_before);
    EXPECT_EQ(a[i].i_after, b[i].i_after);
    EXPECT_EQ(a[i].movers, b[i].movers);
  }
  EXPECT_EQ(simulate_trial(scenario(), 17).s0, a[17].s0);
}

TEST(Trials, MovementAddsInterferenceOnAverage) {
  const auto t = run_trials(scenario(), 4000);
  double before = 0.0, after = 0.0;
  int movers = 0;
  for (const auto& r : t) {
    before += r.i_before;
    after += r.i_after;
    movers += r.movers;
    EXPECT_GE(r.i_before, 0.0);
  }
  EXPECT_GT(after, before);
  EXPECT_GT(movers, 0);
}

TEST(Trials, OutageAndRatesPartition) {
  const auto t = run_trials(scenario(), 3000);
  const double P = 1e-3 * std::pow(10.0, -0.5), sigma2 = 1e-12, T = 1e-2;
  const OutageEstimate e = empirical_outage(t, P, sigma2, T);
  const RateEstimate r = empirical_rates(t, P, sigma2, T);
  EXPECT_EQ(r.infected + r.recovered + r.unchanged, t.size());
  // P_o' − P_o = β̂ − μ̂ for paired outcomes.
  EXPECT_NEAR(e.po_prime - e.po, r.beta_hat - r.mu_hat, 1e-12);
  EXPECT_NEAR(e.stderr_po, std::sqrt(e.po * (1 - e.po) / 3000.0), 1e-15);

  const OutageEstimate zero = empirical_outage(t, P, sigma2, 0.0);
  EXPECT_EQ(zero.po, 0.0);
  EXPECT_EQ(zero.po_prime, 0.0);
  const RateEstimate none = empirical_rates(t, P, sigma2, 0.0);
  EXPECT_EQ(none.r0.status, PropagationIntensity::Status::undefined);

  EXPECT_THROW(empirical_outage({}, P, sigma2, T), ParameterError);
}

TEST(Ks, DistanceOfKnownSamples) {
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_NEAR(ks_distance({0.5}, uniform), 0.5, 1e-15);
  EXPECT_NEAR(ks_distance({0.125, 0.375, 0.625, 0.875}, uniform), 0.125, 1e-15);
  EXPECT_THROW(ks_distance({}, uniform), ParameterError);
}

TEST(Ks, ServingPowerMatchesGammaFit) {
  ScenarioConfig c = scenario();
  const auto s = sample_s0(c, 20000);
  const auto& ch = c.channel;
  const GammaFit fit = s0_gamma_fit(pathloss_direct(ch.C, 100.0, ch.alpha),
                                    pathloss_reflected(ch.C, 30.0, 80.0, ch.alpha), ch.N, ch.m1, ch.m2);
  EXPECT_LT(ks_distance(s, [&](double x) { return s0_gamma_cdf(x, fit); }), 0.05);
}

TEST(LaplaceEnsemble, ThreadInvariant) {
  const LaplaceParams p;
  const auto a = sample_laplace_ensemble(p, Stage::after, 200, 4, 1);
  const auto b = sample_laplace_ensemble(p, Stage::after, 200, 4, 2);
  EXPECT_EQ(a, b);
}
