// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "risprop/risprop.hpp"

using namespace risprop;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    pass &= ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig base() {
  ExperimentConfig c;
  c.trials = 100'000;
  return c;
}

Outcome gamma_fit_ks() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig c = base();
  const ScenarioConfig sc = scenario_config(c);
  const GammaFit fit = serving_fit(c);
  const double ks =
      ks_distance(sample_s0(sc, c.trials), [&](double x) { return s0_gamma_cdf(x, fit); });
  const double secs = seconds_since(t0);
  o.require(ks < 0.05, "KS " + fmt(ks) + " < 0.05 at 1e5 trials");
  o.require(secs < 60.0, "runtime " + fmt(secs) + " s < 60 s");
  return o;
}

Outcome outage_curves() {
  Outcome o;
  const auto rows = outage_sweep_rows(base());
  bool monotone = true, ordered = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i > 0) monotone &= r.po <= rows[i - 1].po && r.po_prime <= rows[i - 1].po_prime;
    ordered &= r.po_prime >= r.po;
    worst = std::max({worst, std::abs(r.po - r.mc.po), std::abs(r.po_prime - r.mc.po_prime)});
  }
  o.require(rows.size() == 7, "7 power points");
  o.require(monotone, "analytic curves nonincreasing");
  o.require(ordered, "P_o' >= P_o");
  o.require(worst <= 0.03, "max |analytic - MC| " + fmt(worst) + " <= 0.03");
  return o;
}

Outcome laplace_equivalence() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig c = base();
  const auto rows = laplace_validation_rows(c);
  double worst_rel = 0.0, worst_z = 0.0;
  std::size_t conditioned = 0;
  for (const auto& r : rows) {
    worst_rel = std::max(worst_rel, r.rel_error());
    if (r.conditioned) {
      ++conditioned;
      worst_z = std::max(worst_z, r.z_score());
    }
  }
  const double secs = seconds_since(t0);
  o.require(rows.size() == 100, "50-point grid per stage");
  o.require(worst_rel <= 1e-6, "closed form vs quadrature max rel " + fmt(worst_rel) + " <= 1e-6");
  o.require(worst_z <= 3.0, "MC max z " + fmt(worst_z) + " <= 3 over " +
                                std::to_string(conditioned) + " conditioned points");
  o.require(secs < 300.0, "runtime " + fmt(secs) + " s < 300 s");
  return o;
}

Outcome sis_ode() {
  Outcome o;
  double worst = 0.0;
  for (SisParams p : {SisParams{0.01, 0.5, 100, 5}, SisParams{0.005, 0.5, 100, 50},
                      SisParams{0.001, 0.5, 100, 5}, SisParams{0.02, 0.1, 100, 1}}) {
    for (const auto& pt : sis_ode_solve(p, 50.0, 1e-3))
      worst = std::max(worst, std::abs(pt.X - sis_logistic(p, pt.t)));
  }
  o.require(worst <= 1e-6, "RK4 vs logistic max abs " + fmt(worst) + " <= 1e-6");
  const SisParams sup{0.01, 0.5, 100, 5};
  o.require(sis_equilibrium(sup) == sup.n_total - sup.mu / sup.beta, "equilibrium N - mu/beta");
  return o;
}

Outcome sis_regimes() {
  Outcome o;
  ExperimentConfig c = base();
  for (const auto& r : sis_panels(c)) {
    const int dir = r.direction();
    const bool ok = r.panel.expected_direction == 0 || dir == r.panel.expected_direction;
    o.require(ok, r.panel.name + " " + fmt(r.series.front().mean_X) + "->" +
                      fmt(r.series.back().mean_X) + " expect " + detail::trend_name(r.panel.expected_direction));
  }
  return o;
}

Outcome low_interference_n_sweep() {
  Outcome o;
  const ExperimentConfig c = base();
  const auto series = r0_sweep(c, SweepAxis::ris_elements, GroupBy::none);
  const auto& low = series.front();
  std::string vals;
  for (const auto& p : low.points) vals += (vals.empty() ? "" : ",") + fmt(p.r0.value);
  const auto v = r0_values(low);
  o.require(v.size() == low.points.size(), "R0 finite at every N");
  const double dev = max_abs_deviation_from_one(v);
  o.require(dev < 0.02, "lambda_U " + fmt(low.group_value) + " R0 {" + vals + "} max |R0-1| " +
                            fmt(dev) + " < 0.02");
  return o;
}

Outcome trend_suite() {
  Outcome o;
  const ExperimentConfig c = base();
  const auto density = r0_sweep(c, SweepAxis::ue_density, GroupBy::bs_density);
  const TrendReport td = r0_trends(c, SweepAxis::ue_density, GroupBy::bs_density, density);
  o.require(td.ok, "strictly increasing in lambda_U and lambda_B");

  const auto freq = r0_sweep(c, SweepAxis::frequency, GroupBy::none);
  std::string fv;
  for (const auto& p : freq.front().points)
    fv += (fv.empty() ? "" : ",") + fmt(p.r0.value);
  const bool all_finite = r0_values(freq.front()).size() == freq.front().points.size();
  o.require(all_finite && nonincreasing(r0_values(freq.front())),
            "nonincreasing in frequency {" + fv + "}");

  const auto n = r0_sweep(c, SweepAxis::ris_elements, GroupBy::none);
  const auto& high = n.back();
  std::string nv;
  for (const auto& p : high.points) nv += (nv.empty() ? "" : ",") + fmt(p.r0.value);
  o.require(rises_then_flattens(r0_values(high)),
            "rises then flattens over N at lambda_U " + fmt(high.group_value) + " {" + nv + "}");
  return o;
}

Outcome property_suites() {
  Outcome o;
  {
    const Window w = Window::disk(1000.0);
    double worst = 0.0;
    for (double lambda : {1e-5, 1e-4}) {
      double count = 0.0;
      const int reps = 1000;
      for (int k = 0; k < reps; ++k) {
        Rng rng = make_rng(101, static_cast<std::uint64_t>(k));
        count += static_cast<double>(sample_mhcpp(lambda, 50.0, w, rng).size());
      }
      worst = std::max(worst, std::abs(count / (reps * w.area()) / matern2_intensity(lambda, 50.0) - 1.0));
    }
    o.require(worst < 0.02, "Matern-II intensity rel err " + fmt(worst) + " < 0.02");
  }
  {
    double worst = 0.0;
    for (double m : {1.0, 2.0, 3.0}) {
      Rng rng = make_rng(102, static_cast<std::uint64_t>(m));
      double s1 = 0.0, s2 = 0.0;
      const int n = 1'000'000;
      for (int i = 0; i < n; ++i) {
        const double x = sample_nakagami_power(m, rng);
        s1 += x;
        s2 += x * x;
      }
      worst = std::max({worst, std::abs(s1 / n - 1.0), std::abs(s2 / n / (1.0 + 1.0 / m) - 1.0)});
    }
    o.require(worst < 0.005, "fading moments rel err " + fmt(worst) + " < 0.005 at 1e6");
  }
  {
    const OutageParams p = outage_params(base());
    double worst = 0.0;
    for (Stage st : {Stage::before, Stage::after}) {
      const Jet j = jet_compose_transform(p, st, 3);
      const double b = p.T / p.fit.scale, a = p.T * p.sigma2 / (p.P * p.fit.scale);
      auto f = [&](double s) { return std::exp(-s * a + log_laplace_closed_form(s * b, p.laplace, st)); };
      const double h = 1e-3;
      const double d[4] = {0.0, (f(1 + h) - f(1 - h)) / (2 * h),
                           (f(1 + h) - 2 * f(1) + f(1 - h)) / (h * h),
                           (f(1 + 2 * h) - 2 * f(1 + h) + 2 * f(1 - h) - f(1 - 2 * h)) / (2 * h * h * h)};
      for (int k = 1; k <= 3; ++k) worst = std::max(worst, std::abs(j.derivative(k) / d[k] - 1.0));
    }
    o.require(worst < 1e-5, "jet vs FD orders 1-3 rel " + fmt(worst) + " < 1e-5");
  }
  {
    ExperimentConfig c = base();
    c.abm.runs = 10;
    c.abm.steps = 100;
    bool conserved = true;
    for (const auto& r : sis_panels(c))
      for (const auto& pt : r.series) conserved &= pt.mean_S + pt.mean_X == c.abm.n_agents;
    for (std::uint64_t run = 0; run < 10; ++run) {
      AbmConfig a;
      a.steps = 100;
      a.beta = 0.3;
      a.seed = 103;
      for (int x : simulate_abm_run(a, run)) conserved &= x >= 0 && x <= a.n_agents;
    }
    o.require(conserved, "ABM population conserved");
  }
  {
    ExperimentConfig a = base();
    a.trials = 5000;
    a.abm.runs = 4;
    a.abm.steps = 50;
    a.laplace_validation.mc_trials = 2000;
    a.laplace_validation.points = 5;
    ExperimentConfig b = a;
    b.threads = a.threads == 1 ? 2 : 1;
    bool same = true;
    for (int rep = 0; rep < 2; ++rep) {
      const ExperimentConfig& other = rep == 0 ? a : b;
      same &= cmd_topology(a).csv == cmd_topology(other).csv;
      same &= cmd_validate_power(a).csv == cmd_validate_power(other).csv;
      same &= cmd_outage_sweep(a).csv == cmd_outage_sweep(other).csv;
      same &= cmd_sis_sim(a).csv == cmd_sis_sim(other).csv;
      same &= cmd_validate_laplace(a).csv == cmd_validate_laplace(other).csv;
      same &= cmd_r0_sweep(a, SweepAxis::ue_density, GroupBy::bs_density).csv ==
              cmd_r0_sweep(other, SweepAxis::ue_density, GroupBy::bs_density).csv;
    }
    o.require(same, "same seed gives byte-identical CSV (repeat and thread count)");
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"gamma fit of serving power", gamma_fit_ks},
      {"outage curves", outage_curves},
      {"Laplace oracle equivalence", laplace_equivalence},
      {"SIS ODE", sis_ode},
      {"SIS regimes", sis_regimes},
      {"low-interference N sweep", low_interference_n_sweep},
      {"R0 trend suite", trend_suite},
      {"property suites", property_suites},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
