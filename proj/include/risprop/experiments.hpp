#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "risprop/config.hpp"
#include "risprop/geometry.hpp"
#include "risprop/mobility_sim.hpp"
#include "risprop/montecarlo.hpp"
#include "risprop/outage_epidemic.hpp"
#include "risprop/parallel.hpp"
#include "risprop/power_analytic.hpp"

#ifndef RISPROP_VERSION
#define RISPROP_VERSION "0.1.0"
#endif

namespace risprop {

inline constexpr const char* kVersion = RISPROP_VERSION;

/// Result of one CLI command: CSV body with provenance header, a human
/// summary, and whether the numeric validation checks passed.
struct CommandOutput {
  std::string name;
  std::string csv;
  std::string summary;
  bool valid = true;
};

/// Shortest round-trippable rendering of a double.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string provenance_header(const ExperimentConfig& cfg, const std::string& command) {
  std::string h;
  h += "# risprop " + std::string(kVersion) + " " + command + "\n";
  h += "# seed: " + std::to_string(cfg.seed) + "\n";
  h += "# config_hash: " + hex64(config_hash(cfg)) + "\n";
  h += "# config: " + result_json(cfg).dump() + "\n";
  return h;
}

/// Compact run manifest written next to each CSV.
inline std::string run_manifest(const ExperimentConfig& cfg, const CommandOutput& out) {
  json m{{"command", out.name},
         {"version", kVersion},
         {"seed", cfg.seed},
         {"config_hash", hex64(config_hash(cfg))},
         {"threads", resolve_threads(cfg.threads)},
         {"valid", out.valid}};
  return m.dump(2) + "\n";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::string header) { body_ << header << "\n"; }
  template <class... T>
  void row(const T&... cells) {
    bool first = true;
    ((body_ << (first ? "" : ",") << cell(cells), first = false), ...);
    body_ << "\n";
  }
  std::string str() const { return body_.str(); }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  std::ostringstream body_;
};

// ---------------------------------------------------------------------------
// topology

inline CommandOutput cmd_topology(const ExperimentConfig& cfg) {
  TopologyConfig tc = cfg.topology;
  tc.seed = cfg.seed;
  const NetworkTopology t = sample_topology(tc);
  if (t.bs.empty()) throw TopologyError("no base stations in the window");
  CsvWriter w("kind,index,x,y,parent_index,serving_index");
  for (std::size_t i = 0; i < t.bs.size(); ++i)
    w.row("bs", i, t.bs[i].x, t.bs[i].y, "",
          t.serving_ris[i] ? std::to_string(*t.serving_ris[i]) : std::string());
  for (std::size_t i = 0; i < t.ris.size(); ++i)
    w.row("ris", i, t.ris[i].position.x, t.ris[i].position.y, std::to_string(t.ris[i].parent_bs),
          "");
  for (std::size_t i = 0; i < t.ue.size(); ++i)
    w.row("ue", i, t.ue[i].x, t.ue[i].y, "", std::to_string(t.serving_bs[i]));

  CommandOutput out{"topology", provenance_header(cfg, "topology") + w.str(), "", true};
  const double spacing = min_pairwise_distance(t.bs);
  out.valid = t.bs.size() < 2 || spacing >= tc.r_B;
  std::ostringstream s;
  s << "base stations: " << t.bs.size() << "\nRIS: " << t.ris.size() << "\nUEs: " << t.ue.size()
    << "\nmin BS spacing: " << (t.bs.size() < 2 ? std::string("n/a") : fmt(spacing)) << " m (r_B "
    << fmt(tc.r_B) << ")\n";
  out.summary = s.str();
  return out;
}

// ---------------------------------------------------------------------------
// validate-power

inline constexpr double kKsThreshold = 0.05;

inline CommandOutput cmd_validate_power(const ExperimentConfig& cfg, std::size_t cdf_points = 200) {
  const ScenarioConfig sc = scenario_config(cfg);
  const GammaFit fit = serving_fit(cfg);
  std::vector<double> s = sample_s0(sc, cfg.trials);
  std::sort(s.begin(), s.end());
  const double ks = ks_distance(s, [&](double x) { return s0_gamma_cdf(x, fit); });

  CsvWriter w("x,empirical_cdf,analytic_cdf");
  const std::size_t n = s.size();
  const std::size_t points = std::min(cdf_points, n);
  for (std::size_t k = 0; k < points; ++k) {
    const std::size_t i = points == 1 ? n - 1 : k * (n - 1) / (points - 1);
    w.row(s[i], static_cast<double>(i + 1) / static_cast<double>(n), s0_gamma_cdf(s[i], fit));
  }
  CommandOutput out{"validate-power", provenance_header(cfg, "validate-power") + "# ks_distance: " +
                                          fmt(ks) + "\n" + w.str(),
                    "", ks < kKsThreshold};
  out.summary = "gamma fit: shape " + fmt(fit.shape) + ", scale " + fmt(fit.scale) +
                "\ntrials: " + std::to_string(n) + "\nKS distance: " + fmt(ks) + " (threshold " +
                fmt(kKsThreshold) + ")\n";
  return out;
}

// ---------------------------------------------------------------------------
// outage-sweep

inline constexpr double kOutageTolerance = 0.03;

struct OutageRow {
  double p_dbm = 0.0;
  double po = 0.0, po_prime = 0.0;
  OutageEstimate mc;
};

inline std::vector<OutageRow> outage_sweep_rows(const ExperimentConfig& cfg, bool monte_carlo = true) {
  std::vector<OutageRow> rows(cfg.sweeps.power_dbm.size());
  parallel_for(rows.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    ExperimentConfig c = cfg;
    c.power_dbm = cfg.sweeps.power_dbm[i];
    const OutageParams op = outage_params(c);
    rows[i].p_dbm = c.power_dbm;
    rows[i].po = outage_probability(op, Stage::before);
    rows[i].po_prime = outage_probability(op, Stage::after);
  });
  if (monte_carlo) {
    // Trial outcomes do not depend on P, so one ensemble serves every power.
    const auto trials = run_trials(scenario_config(cfg), cfg.trials);
    for (auto& r : rows) r.mc = empirical_outage(trials, dbm_to_watts(r.p_dbm), cfg.sigma2_watts(), cfg.T);
  }
  return rows;
}

inline CommandOutput cmd_outage_sweep(const ExperimentConfig& cfg) {
  const auto rows = outage_sweep_rows(cfg);
  CsvWriter w(
      "P_dBm,P_o_analytic,P_o_empirical,stderr,P_o_prime_analytic,P_o_prime_empirical,stderr_prime");
  bool monotone = true, ordered = true, agree = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    w.row(r.p_dbm, r.po, r.mc.po, r.mc.stderr_po, r.po_prime, r.mc.po_prime, r.mc.stderr_po_prime);
    if (i > 0) monotone &= r.po <= rows[i - 1].po && r.po_prime <= rows[i - 1].po_prime;
    ordered &= r.po_prime >= r.po;
    worst = std::max({worst, std::abs(r.po - r.mc.po), std::abs(r.po_prime - r.mc.po_prime)});
  }
  agree = worst <= kOutageTolerance;
  CommandOutput out{"outage-sweep", provenance_header(cfg, "outage-sweep") + w.str(), "",
                    monotone && ordered && agree};
  out.summary = std::string("analytic curves nonincreasing in P: ") + (monotone ? "yes" : "no") +
                "\nP_o' >= P_o at every P: " + (ordered ? "yes" : "no") +
                "\nmax |analytic - empirical|: " + fmt(worst) + " (tolerance " +
                fmt(kOutageTolerance) + ")\n";
  return out;
}

// ---------------------------------------------------------------------------
// sis-sim

struct PanelResult {
  AbmPanel panel;
  double beta = 0.0, mu = 0.0;
  std::vector<AbmSeriesPoint> series;
  /// +1 if the final mean X exceeds the initial one, −1 if below, 0 if equal.
  int direction() const {
    const double d = series.back().mean_X - series.front().mean_X;
    return (d > 0.0) - (d < 0.0);
  }
};

/// Per-contact infection and per-step recovery probabilities from the
/// analytic outage at the panel's UE density.
inline std::pair<double, double> panel_rates(const ExperimentConfig& cfg, double lambda_U) {
  ExperimentConfig c = cfg;
  c.power_dbm = cfg.abm.power_dbm;
  c.topology.lambda_U = lambda_U;
  const OutageParams op = outage_params(c);
  const double po = outage_probability(op, Stage::before);
  const double pp = outage_probability(op, Stage::after);
  return {infection_rate(po, pp), recovery_rate(po, pp)};
}

inline AbmConfig panel_abm_config(const ExperimentConfig& cfg, const AbmPanel& panel, double beta,
                                  double mu) {
  AbmConfig a;
  a.n_agents = cfg.abm.n_agents;
  a.lambda_U = panel.lambda_U;
  a.r_I = cfg.r_I;
  a.beta = beta;
  a.mu = mu;
  a.x0 = panel.x0;
  a.steps = cfg.abm.steps;
  a.runs = cfg.abm.runs;
  a.max_step = cfg.abm.max_step;
  a.seed = cfg.seed;
  a.mode = cfg.abm.mode;
  a.threads = cfg.threads;
  if (a.mode == AbmMode::sinr_driven) {
    // Outage with probability P_o' when an infected agent is near, else P_o.
    ExperimentConfig c = cfg;
    c.power_dbm = cfg.abm.power_dbm;
    c.topology.lambda_U = panel.lambda_U;
    const OutageParams op = outage_params(c);
    const double po = outage_probability(op, Stage::before);
    const double pp = outage_probability(op, Stage::after);
    a.outage_sampler = [po, pp](int near, Rng& rng) {
      return uniform01(rng) < (near > 0 ? pp : po);
    };
  }
  return a;
}

inline std::vector<PanelResult> sis_panels(const ExperimentConfig& cfg) {
  std::vector<PanelResult> out;
  for (const auto& p : cfg.abm.panels) {
    PanelResult r;
    r.panel = p;
    std::tie(r.beta, r.mu) = panel_rates(cfg, p.lambda_U);
    r.series = run_abm(panel_abm_config(cfg, p, r.beta, r.mu));
    out.push_back(std::move(r));
  }
  return out;
}

inline CommandOutput cmd_sis_sim(const ExperimentConfig& cfg) {
  const auto panels = sis_panels(cfg);
  CsvWriter w("panel,lambda_U,x0,beta,mu,t,mean_S,mean_X,stderr_X");
  std::ostringstream s;
  bool valid = true;
  for (const auto& r : panels) {
    for (const auto& pt : r.series)
      w.row(r.panel.name, r.panel.lambda_U, r.panel.x0, r.beta, r.mu, pt.t, pt.mean_S, pt.mean_X,
            pt.stderr_X);
    const int dir = r.direction();
    const bool ok = r.panel.expected_direction == 0 || dir == r.panel.expected_direction;
    valid &= ok;
    s << "panel " << r.panel.name << ": lambda_U " << fmt(r.panel.lambda_U) << ", x0 "
      << r.panel.x0 << ", beta " << fmt(r.beta) << ", mu " << fmt(r.mu) << ", X " << fmt(r.series.front().mean_X)
      << " -> " << fmt(r.series.back().mean_X) << (ok ? "" : "  (unexpected direction)") << "\n";
  }
  return {"sis-sim", provenance_header(cfg, "sis-sim") + w.str(), s.str(), valid};
}

// ---------------------------------------------------------------------------
// r0-sweep

enum class SweepAxis { ue_density, frequency, ris_elements };
enum class GroupBy { none, bs_density, ris_elements, ue_density };

inline SweepAxis parse_axis(const std::string& s) {
  if (s == "ue_density") return SweepAxis::ue_density;
  if (s == "frequency") return SweepAxis::frequency;
  if (s == "ris_elements") return SweepAxis::ris_elements;
  throw ConfigError("unknown sweep axis \"" + s + "\" (ue_density, frequency, ris_elements)");
}

inline GroupBy parse_group_by(const std::string& s) {
  if (s == "none") return GroupBy::none;
  if (s == "bs_density") return GroupBy::bs_density;
  if (s == "ris_elements") return GroupBy::ris_elements;
  if (s == "ue_density") return GroupBy::ue_density;
  throw ConfigError("unknown group_by \"" + s + "\" (none, bs_density, ris_elements, ue_density)");
}

inline const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::ue_density: return "ue_density";
    case SweepAxis::frequency: return "frequency";
    case SweepAxis::ris_elements: return "ris_elements";
  }
  return "";
}

inline const char* group_name(GroupBy g) {
  switch (g) {
    case GroupBy::none: return "none";
    case GroupBy::bs_density: return "bs_density";
    case GroupBy::ris_elements: return "ris_elements";
    case GroupBy::ue_density: return "ue_density";
  }
  return "";
}

struct R0Point {
  double lambda_B = 0.0, lambda_U = 0.0, frequency = 0.0;
  int N = 0;
  double axis_value = 0.0, group_value = 0.0;
  double po = 0.0, po_prime = 0.0;
  PropagationIntensity r0;
};

/// Analytic R0 at the config's r0 power with the given overrides; C follows
/// the carrier frequency.
inline R0Point r0_point(const ExperimentConfig& cfg, double lambda_B, double lambda_U,
                        double frequency, int N) {
  ExperimentConfig c = cfg;
  c.power_dbm = cfg.sweeps.r0_power_dbm;
  c.topology.lambda_B = lambda_B;
  c.topology.lambda_U = lambda_U;
  c.channel.frequency = frequency;
  c.channel.C = pathloss_constant(frequency, cfg.channel.Gt, cfg.channel.Gr);
  c.channel.N = N;
  const OutageParams op = outage_params(c);
  R0Point r;
  r.lambda_B = lambda_B;
  r.lambda_U = lambda_U;
  r.frequency = frequency;
  r.N = N;
  r.po = outage_probability(op, Stage::before);
  r.po_prime = outage_probability(op, Stage::after);
  r.r0 = propagation_intensity(r.po, r.po_prime);
  return r;
}

struct R0Series {
  double group_value = 0.0;
  std::vector<R0Point> points;
};

/// Axis values and group values for a sweep. ris_elements sweeps without an
/// explicit group run at the low and high interference UE densities.
inline std::vector<R0Series> r0_sweep(const ExperimentConfig& cfg, SweepAxis axis, GroupBy group) {
  const auto& sw = cfg.sweeps;
  std::vector<double> axis_vals;
  switch (axis) {
    case SweepAxis::ue_density: axis_vals = sw.lambda_U; break;
    case SweepAxis::frequency: axis_vals = sw.frequency_hz; break;
    case SweepAxis::ris_elements:
      axis_vals.assign(sw.ris_elements.begin(), sw.ris_elements.end());
      break;
  }
  std::vector<double> group_vals;
  switch (group) {
    case GroupBy::none:
      group_vals = {0.0};
      break;
    case GroupBy::bs_density: group_vals = sw.lambda_B; break;
    case GroupBy::ris_elements:
      group_vals.assign(sw.ris_elements.begin(), sw.ris_elements.end());
      break;
    case GroupBy::ue_density: group_vals = sw.lambda_U; break;
  }
  if ((axis == SweepAxis::ue_density && group == GroupBy::ue_density) ||
      (axis == SweepAxis::ris_elements && group == GroupBy::ris_elements))
    throw ConfigError("r0-sweep: group_by must differ from the sweep axis");
  if (axis == SweepAxis::ris_elements && group == GroupBy::none) {
    group = GroupBy::ue_density;
    group_vals = {sw.low_interference_lambda_U, sw.high_interference_lambda_U};
  }

  std::vector<R0Series> out(group_vals.size());
  const std::size_t na = axis_vals.size();
  std::vector<R0Point> flat(group_vals.size() * na);
  parallel_for(flat.size(), resolve_threads(cfg.threads), [&](std::size_t k) {
    const double g = group_vals[k / na], a = axis_vals[k % na];
    double lB = cfg.topology.lambda_B, lU = cfg.topology.lambda_U, f = cfg.channel.frequency;
    int N = cfg.channel.N;
    switch (group) {
      case GroupBy::none: break;
      case GroupBy::bs_density: lB = g; break;
      case GroupBy::ris_elements: N = static_cast<int>(g); break;
      case GroupBy::ue_density: lU = g; break;
    }
    switch (axis) {
      case SweepAxis::ue_density: lU = a; break;
      case SweepAxis::frequency: f = a; break;
      case SweepAxis::ris_elements: N = static_cast<int>(a); break;
    }
    flat[k] = r0_point(cfg, lB, lU, f, N);
    flat[k].axis_value = a;
    flat[k].group_value = g;
  });
  for (std::size_t gi = 0; gi < group_vals.size(); ++gi) {
    out[gi].group_value = group_vals[gi];
    out[gi].points.assign(flat.begin() + static_cast<std::ptrdiff_t>(gi * na),
                          flat.begin() + static_cast<std::ptrdiff_t>((gi + 1) * na));
  }
  return out;
}

/// Trend checks on adjacent sweep points.
struct TrendReport {
  std::vector<std::string> lines;
  bool ok = true;
  void check(bool cond, const std::string& what) {
    lines.push_back(std::string(cond ? "ok    " : "FAIL  ") + what);
    ok &= cond;
  }
};

inline bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

inline bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] <= v[i - 1])) return false;
  return true;
}

/// Nondecreasing, with a first step that rises and a last step no larger
/// than the first.
inline bool rises_then_flattens(const std::vector<double>& v) {
  if (v.size() < 3) return false;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) return false;
  const double first = v[1] - v[0], last = v.back() - v[v.size() - 2];
  return first > 0.0 && last < first;
}

inline double max_abs_deviation_from_one(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x - 1.0));
  return m;
}

/// R0 at the points where it is finite; trends are judged on these.
inline std::vector<double> r0_values(const R0Series& s) {
  std::vector<double> v;
  for (const auto& p : s.points)
    if (p.r0.status == PropagationIntensity::Status::finite) v.push_back(p.r0.value);
  return v;
}

inline TrendReport r0_trends(const ExperimentConfig& cfg, SweepAxis axis, GroupBy group,
                             const std::vector<R0Series>& series) {
  TrendReport t;
  const std::string gname = group_name(group);
  for (const auto& s : series) {
    const auto v = r0_values(s);
    std::string tag = gname + " " + fmt(s.group_value);
    if (group == GroupBy::none)
      tag = axis == SweepAxis::ris_elements ? "lambda_U " + fmt(s.group_value)
                                            : std::string("config densities");
    switch (axis) {
      case SweepAxis::ue_density:
        t.check(strictly_increasing(v), "R0 strictly increasing in lambda_U at " + tag);
        break;
      case SweepAxis::frequency:
        t.check(nonincreasing(v), "R0 nonincreasing in frequency at " + tag);
        break;
      case SweepAxis::ris_elements:
        if (s.points.front().lambda_U == cfg.sweeps.low_interference_lambda_U &&
            group == GroupBy::none)
          t.check(max_abs_deviation_from_one(v) < 0.02,
                  "|R0 - 1| < 0.02 over N at " + tag + " (max " +
                      fmt(max_abs_deviation_from_one(v)) + ")");
        else if (group == GroupBy::none)
          t.check(rises_then_flattens(v), "R0 rises then flattens over N at " + tag);
        break;
    }
  }
  if (group == GroupBy::bs_density && series.size() > 1) {
    for (std::size_t k = 0; k < series.front().points.size(); ++k) {
      std::vector<double> col;
      for (const auto& s : series) col.push_back(s.points[k].r0.value);
      t.check(strictly_increasing(col), std::string("R0 strictly increasing in lambda_B at ") +
                                            axis_name(axis) + " " +
                                            fmt(series.front().points[k].axis_value));
    }
  }
  return t;
}

inline const char* status_name(PropagationIntensity::Status s) {
  switch (s) {
    case PropagationIntensity::Status::finite: return "finite";
    case PropagationIntensity::Status::infinite: return "infinite";
    case PropagationIntensity::Status::undefined: return "undefined";
  }
  return "";
}

inline CommandOutput cmd_r0_sweep(const ExperimentConfig& cfg, SweepAxis axis, GroupBy group) {
  const auto series = r0_sweep(cfg, axis, group);
  CsvWriter w("axis,axis_value,group,group_value,lambda_B,lambda_U,frequency_hz,N,P_o,P_o_prime,"
              "beta,mu,R0,status");
  const std::string gname =
      axis == SweepAxis::ris_elements && group == GroupBy::none ? "ue_density" : group_name(group);
  for (const auto& s : series)
    for (const auto& p : s.points)
      w.row(axis_name(axis), p.axis_value, gname, p.group_value, p.lambda_B, p.lambda_U,
            p.frequency, p.N, p.po, p.po_prime, p.r0.beta, p.r0.mu, p.r0.value,
            status_name(p.r0.status));
  const TrendReport t = r0_trends(cfg, axis, group, series);
  std::string summary;
  for (const auto& l : t.lines) summary += l + "\n";
  const std::string cmd = std::string("r0-sweep axis=") + axis_name(axis) + " group_by=" + group_name(group);
  return {"r0-sweep", provenance_header(cfg, cmd) + w.str(), summary, t.ok};
}

// ---------------------------------------------------------------------------
// validate-laplace

inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] =
        n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

struct LaplaceRow {
  Stage stage = Stage::before;
  double s = 0.0;
  double closed_form = 0.0, quadrature = 0.0;
  Estimate mc;
  bool conditioned = false;
  double rel_error() const {
    return quadrature != 0.0 ? std::abs(closed_form - quadrature) / std::abs(quadrature)
                             : std::abs(closed_form - quadrature);
  }
  double z_score() const {
    const double d = std::abs(mc.value - quadrature);
    return mc.stderr_ > 0.0 ? d / mc.stderr_ : (d == 0.0 ? 0.0 : INFINITY);
  }
};

inline std::vector<LaplaceRow> laplace_validation_rows(const ExperimentConfig& cfg,
                                                       bool monte_carlo = true) {
  const auto& lv = cfg.laplace_validation;
  const LaplaceParams lp = laplace_params(cfg);
  const auto grid = geometric_grid(lv.s_min, lv.s_max, lv.points);
  std::vector<LaplaceRow> rows;
  for (Stage st : {Stage::before, Stage::after})
    for (double s : grid) rows.push_back({st, s, 0.0, 0.0, {}, false});
  parallel_for(rows.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    LaplaceRow& r = rows[i];
    r.closed_form = std::exp(log_laplace_closed_form(r.s, lp, r.stage));
    r.quadrature = laplace_quadrature_oracle(r.s, lp, r.stage);
    r.conditioned = static_cast<double>(lv.mc_trials) * std::min(r.quadrature, 1.0 - r.quadrature) >=
                    lv.min_expected_events;
  });
  if (monte_carlo) {
    const PgflSamplerOptions opt{lv.field_radius};
    for (Stage st : {Stage::before, Stage::after}) {
      const auto samples = sample_laplace_ensemble(lp, st, lv.mc_trials, cfg.seed, cfg.threads, opt);
      for (auto& r : rows)
        if (r.stage == st) r.mc = empirical_laplace(r.s, samples);
    }
  }
  return rows;
}

inline CommandOutput cmd_validate_laplace(const ExperimentConfig& cfg) {
  const auto rows = laplace_validation_rows(cfg);
  const LaplaceParams lp = laplace_params(cfg);
  CsvWriter w("stage,s,closed_form,quadrature,monte_carlo,stderr,rel_error,z_score,conditioned");
  double worst_rel = 0.0, worst_z = 0.0;
  std::size_t conditioned = 0;
  for (const auto& r : rows) {
    w.row(r.stage == Stage::before ? "before" : "after", r.s, r.closed_form, r.quadrature,
          r.mc.value, r.mc.stderr_, r.rel_error(), r.z_score(), r.conditioned ? 1 : 0);
    worst_rel = std::max(worst_rel, r.rel_error());
    if (r.conditioned) {
      ++conditioned;
      worst_z = std::max(worst_z, r.z_score());
    }
  }
  const auto& lv = cfg.laplace_validation;
  const bool cf_ok = worst_rel <= lv.rel_tol;
  const bool mc_ok = worst_z <= 3.0;
  std::string header = provenance_header(cfg, "validate-laplace");
  header += "# lambda_U_near (network density lambda_B*lambda_U*pi*r_I^2): " + fmt(lp.lambda_U_near()) + "\n";
  header += "# near movers per serving cell (lambda_U*pi*r_I^2): " +
            fmt(lp.lambda_U * std::numbers::pi * lp.r_I * lp.r_I) + "\n";
  CommandOutput out{"validate-laplace", header + w.str(), "", cf_ok && mc_ok};
  out.summary = "max closed-form vs quadrature relative error: " + fmt(worst_rel) + " (tolerance " +
                fmt(lv.rel_tol) + ")\nmax Monte Carlo z-score over " + std::to_string(conditioned) +
                " conditioned points: " + fmt(worst_z) + " (limit 3)\n";
  return out;
}

}  // namespace risprop
