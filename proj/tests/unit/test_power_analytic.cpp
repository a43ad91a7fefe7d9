#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "risprop/channel.hpp"
#include "risprop/errors.hpp"
#include "risprop/power_analytic.hpp"
#include "risprop/quadrature.hpp"
#include "risprop/rng.hpp"

using namespace risprop;

namespace {
// Reference serving link: d_ik = 100 m, d_ij = 30 m, d_jk = 80 m, α = 3.
constexpr double kC = 6.3326e-5;
const double kPd = kC * 1e-6;
const double kPr = kC / (2400.0 * 2400.0 * 2400.0);
}  // namespace

TEST(SrMoments, ReferenceValues) {
  // Independent 30-digit evaluation of N·μ² and N + N(N−1)μ², μ = Γ(2.5)/(Γ(2)√2).
  const MomentPair m = sr_moments(200, 2.0, 2.0);
  EXPECT_NEAR(m.mean, 176.714586764425870, 1e-9);
  EXPECT_NEAR(m.second_moment, 31271.9049494451898, 1e-7);
  const GammaFit g = gamma_fit_from_moments(m);
  EXPECT_NEAR(g.shape, 711.997400795264541, 1e-7);
  EXPECT_NEAR(g.scale, 0.248195550386904150, 1e-12);
  EXPECT_NEAR(g.shape * g.scale, m.mean, 1e-9);
}

TEST(SrMoments, RayleighSingleElement) {
  const MomentPair m = sr_moments(1, 1.0, 1.0);
  EXPECT_NEAR(m.mean, std::numbers::pi / 4.0, 1e-14);
  EXPECT_NEAR(m.second_moment, 1.0, 1e-14);
}

TEST(S0Moments, ReferenceValues) {
  const MomentPair m = s0_moments(kPd, kPr, 200, 2.0, 2.0);
  EXPECT_NEAR(m.mean / 3.75277659792031992e-10, 1.0, 1e-12);
  EXPECT_NEAR(m.second_moment / 1.63604789189159358e-19, 1.0, 1e-12);
  const GammaFit g = s0_gamma_fit(kPd, kPr, 200, 2.0, 2.0);
  EXPECT_NEAR(g.shape, 6.18463976834431829, 1e-10);
  EXPECT_NEAR(g.scale / 6.06789843626570794e-11, 1.0, 1e-11);
}

TEST(S0Moments, DirectOnlyIsExponential) {
  const MomentPair m = s0_moments(2.0, 0.0, 10, 2.0, 2.0);
  EXPECT_NEAR(m.mean, 2.0, 1e-14);
  EXPECT_NEAR(m.second_moment, 8.0, 1e-13);
  const GammaFit g = gamma_fit_from_moments(m);
  EXPECT_NEAR(g.shape, 1.0, 1e-13);
}

TEST(S0Moments, AsPrintedDiffersOnlyInTheCrossTerm) {
  const double printed = s0_second_moment_as_printed(kPd, kPr, 200, 2.0, 2.0);
  EXPECT_TRUE(std::isfinite(printed));
  EXPECT_GT(std::abs(printed / s0_moments(kPd, kPr, 200, 2.0, 2.0).second_moment - 1.0), 1.0);
  // With equal path loss 1 the printed coefficient is dimensionally harmless and both agree.
  EXPECT_NEAR(s0_second_moment_as_printed(1.0, 1.0, 50, 2.0, 2.0) /
                  s0_moments(1.0, 1.0, 50, 2.0, 2.0).second_moment,
              1.0, 1e-12);
}

TEST(S0Moments, MatchSampledServing) {
  Rng rng = make_rng(77);
  const int n = 200'000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = serving_power_realization(kPd, kPr, 200, 2.0, 2.0, rng);
    s += x;
    s2 += x * x;
  }
  const MomentPair m = s0_moments(kPd, kPr, 200, 2.0, 2.0);
  EXPECT_NEAR(s / n / m.mean, 1.0, 0.005);
  EXPECT_NEAR(s2 / n / m.second_moment, 1.0, 0.02);
}

TEST(GammaFit, RoundTrip) {
  for (GammaFit g : {GammaFit{0.7, 3.0}, GammaFit{6.18, 6e-11}, GammaFit{712.0, 0.248}}) {
    const GammaFit h = gamma_fit_from_moments(moments_of(g));
    EXPECT_NEAR(h.shape / g.shape, 1.0, 1e-10);
    EXPECT_NEAR(h.scale / g.scale, 1.0, 1e-10);
  }
}

TEST(GammaFit, DegenerateRejected) {
  EXPECT_THROW(gamma_fit_from_moments({2.0, 4.0}), DegenerateError);
  EXPECT_THROW(gamma_fit_from_moments({0.0, 1.0}), DegenerateError);
}

TEST(GammaCdf, Examples) {
  EXPECT_EQ(s0_gamma_cdf(0.0, {6.0, 1.0}), 0.0);
  EXPECT_NEAR(s0_gamma_cdf(std::log(2.0) * 5.0, {1.0, 5.0}), 0.5, 1e-12);
  EXPECT_NEAR(s0_gamma_cdf(2.0, {2.0, 1.0}), 1.0 - 3.0 * std::exp(-2.0), 1e-12);
  EXPECT_NEAR(s0_gamma_cdf(1e3, {6.0, 1.0}), 1.0, 1e-12);
  EXPECT_THROW(s0_gamma_cdf(-1.0, {1.0, 1.0}), DomainError);
}

TEST(GammaCdf, PdfIntegratesToCdf) {
  const GammaFit g{6.18463976834, 6.0678984e-11};
  const double x = 3e-10;
  const auto r = quad::integrate([&](double t) { return s0_gamma_pdf(t, g); }, 0.0, x);
  EXPECT_NEAR(r.value, s0_gamma_cdf(x, g), 1e-10);
}
