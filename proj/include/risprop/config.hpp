#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "risprop/channel.hpp"
#include "risprop/errors.hpp"
#include "risprop/geometry.hpp"
#include "risprop/interference_analytic.hpp"
#include "risprop/mobility_sim.hpp"
#include "risprop/montecarlo.hpp"
#include "risprop/outage_epidemic.hpp"

namespace risprop {

using json = nlohmann::ordered_json;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }

struct AbmPanel {
  std::string name;
  double lambda_U = 1e-2;
  int x0 = 5;
  int expected_direction = 0;  ///< sign of final minus initial mean X; 0 skips the check
};

struct AbmSettings {
  int n_agents = 100;
  int steps = 500;
  int runs = 100;
  double power_dbm = -5.0;
  double max_step = 10.0;
  AbmMode mode = AbmMode::rate_driven;
  std::vector<AbmPanel> panels{{"a", 1e-3, 5, -1},  {"b", 5e-3, 5, 1},  {"c", 1e-2, 5, 1},
                               {"d", 1e-3, 50, -1}, {"e", 5e-3, 50, 1}, {"f", 1e-2, 50, 1}};
};

struct SweepConfig {
  std::vector<double> power_dbm{-20, -10, -5, 0, 10, 20, 30};
  double r0_power_dbm = -5.0;
  std::vector<double> lambda_B{1e-5, 2e-5, 5e-5, 1e-4};
  std::vector<double> lambda_U{1e-3, 5e-3, 1e-2, 5e-2, 1e-1};
  std::vector<double> frequency_hz{1e9, 3e9, 6e9, 10e9, 20e9, 30e9};
  std::vector<int> ris_elements{100, 200, 300, 400};
  double low_interference_lambda_U = 1e-2;
  double high_interference_lambda_U = 1e-1;
};

struct LaplaceValidation {
  double s_min = 1e3;
  double s_max = 1e12;
  int points = 50;
  std::size_t mc_trials = 100000;
  double field_radius = 4000.0;
  /// MC is checked where trials·min(L, 1 − L) reaches this, i.e. where the
  /// ensemble is expected to contain enough informative draws.
  double min_expected_events = 30.0;
  double rel_tol = 1e-6;
};

/// Every knob of every command. Powers are kept in dBm so the file
/// round-trips exactly.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 100000;
  int threads = 0;
  std::string output_dir = "out";

  TopologyConfig topology;
  ChannelParams channel;
  double power_dbm = -5.0;
  double sigma2_dbm = -90.0;
  double bandwidth_hz = 1e7;  ///< recorded only
  ServingGeometry serving;
  PhaseConfig phase;
  InterferenceOptions interference;
  MoverModel mover = MoverModel::pgfl_equivalent;

  double T = 1e-2;
  int series_order = 0;
  LaplaceModel laplace_model = LaplaceModel::closed_form;
  double d_min = 1.0;
  double d_max = 0.0;  ///< 0 means the window's outer radius
  double r_I = 10.0;

  SweepConfig sweeps;
  AbmSettings abm;
  LaplaceValidation laplace_validation;

  double resolved_d_max() const { return d_max > 0.0 ? d_max : topology.window.outer_radius(); }
  double power_watts() const { return dbm_to_watts(power_dbm); }
  double sigma2_watts() const { return dbm_to_watts(sigma2_dbm); }

  void validate() const;
};

namespace detail {

template <class E>
struct EnumNames;

template <>
struct EnumNames<Window::Shape> {
  static constexpr std::pair<Window::Shape, const char*> items[] = {
      {Window::Shape::disk, "disk"}, {Window::Shape::rectangle, "rectangle"}};
};
template <>
struct EnumNames<PhaseMode> {
  static constexpr std::pair<PhaseMode, const char*> items[] = {{PhaseMode::ideal, "ideal"},
                                                                {PhaseMode::quantized, "quantized"}};
};
template <>
struct EnumNames<ReflectionSampling> {
  static constexpr std::pair<ReflectionSampling, const char*> items[] = {
      {ReflectionSampling::aggregate, "aggregate"}, {ReflectionSampling::per_element, "per_element"}};
};
template <>
struct EnumNames<InterferenceSum> {
  static constexpr std::pair<InterferenceSum, const char*> items[] = {
      {InterferenceSum::power, "power"}, {InterferenceSum::coherent, "coherent"}};
};
template <>
struct EnumNames<MoverModel> {
  static constexpr std::pair<MoverModel, const char*> items[] = {
      {MoverModel::pgfl_equivalent, "pgfl_equivalent"}, {MoverModel::reflected, "reflected"}};
};
template <>
struct EnumNames<LaplaceModel> {
  static constexpr std::pair<LaplaceModel, const char*> items[] = {
      {LaplaceModel::closed_form, "closed_form"}, {LaplaceModel::quadrature, "quadrature"}};
};
template <>
struct EnumNames<AbmMode> {
  static constexpr std::pair<AbmMode, const char*> items[] = {
      {AbmMode::rate_driven, "rate_driven"}, {AbmMode::sinr_driven, "sinr_driven"}};
};

template <class E>
std::string enum_name(E v) {
  for (const auto& [e, n] : EnumNames<E>::items)
    if (e == v) return n;
  throw ConfigError("unnamed enum value");
}

template <class E>
E enum_from(const std::string& s, const std::string& path) {
  std::string allowed;
  for (const auto& [e, n] : EnumNames<E>::items) {
    if (s == n) return e;
    allowed += allowed.empty() ? n : std::string(", ") + n;
  }
  throw ConfigError(path + ": unknown value \"" + s + "\" (expected one of " + allowed + ")");
}

/// Reads an object section while tracking which keys were consumed, so
/// typos are reported instead of silently ignored.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).template get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  template <class E>
  void get_enum(const char* key, E& out) {
    std::string s = enum_name(out);
    get(key, s);
    out = enum_from<E>(s, path_ + "." + key);
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  Section sub(const char* key) {
    seen_.insert(key);
    return Section(j_.at(key), path_ + "." + key);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError(path_ + ": unknown key \"" + k + "\"");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline const char* trend_name(int d) { return d < 0 ? "decline" : d > 0 ? "growth" : "any"; }

inline int trend_from(const std::string& s, const std::string& path) {
  if (s == "decline") return -1;
  if (s == "growth") return 1;
  if (s == "any") return 0;
  throw ConfigError(path + ": unknown value \"" + s + "\" (expected one of decline, growth, any)");
}

inline void require_sorted(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw ConfigError(std::string(what) + ": grid must be nonempty");
  if (!std::is_sorted(v.begin(), v.end()) || std::adjacent_find(v.begin(), v.end()) != v.end())
    throw ConfigError(std::string(what) + ": grid must be strictly increasing");
}

}  // namespace detail

inline json to_json(const ExperimentConfig& c) {
  using detail::enum_name;
  json j;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["threads"] = c.threads;
  j["output_dir"] = c.output_dir;

  const Window& w = c.topology.window;
  json win{{"shape", enum_name(w.shape())}};
  if (w.shape() == Window::Shape::disk) {
    win["radius"] = w.radius();
  } else {
    win["half_width"] = w.half_width();
    win["half_height"] = w.half_height();
  }
  j["topology"] = {{"lambda_B", c.topology.lambda_B}, {"lambda_R", c.topology.lambda_R},
                   {"lambda_U", c.topology.lambda_U}, {"r_B", c.topology.r_B},
                   {"r_R", c.topology.r_R},           {"ris_height", c.topology.ris_height},
                   {"window", win}};

  const ChannelParams& ch = c.channel;
  j["channel"] = {{"C", ch.C},
                  {"alpha", ch.alpha},
                  {"m1", ch.m1},
                  {"m2", ch.m2},
                  {"N", ch.N},
                  {"frequency_hz", ch.frequency},
                  {"Gt", ch.Gt},
                  {"Gr", ch.Gr},
                  {"power_dbm", c.power_dbm},
                  {"sigma2_dbm", c.sigma2_dbm},
                  {"bandwidth_hz", c.bandwidth_hz},
                  {"a_d", ch.a_d},
                  {"a_r", ch.a_r},
                  {"phase", {{"mode", enum_name(c.phase.mode)}, {"bits", c.phase.bits}}}};
  j["serving"] = {{"d_ik", c.serving.d_ik}, {"d_ij", c.serving.d_ij}, {"d_jk", c.serving.d_jk}};
  j["interference"] = {{"reflection", enum_name(c.interference.reflection)},
                       {"combine", enum_name(c.interference.combine)},
                       {"min_distance", c.interference.min_distance},
                       {"mover_model", enum_name(c.mover)}};
  j["outage"] = {{"T", c.T},
                 {"series_order", c.series_order},
                 {"laplace_model", enum_name(c.laplace_model)},
                 {"d_min", c.d_min},
                 {"d_max", c.d_max},
                 {"r_I", c.r_I}};
  const SweepConfig& s = c.sweeps;
  j["sweeps"] = {{"power_dbm", s.power_dbm},
                 {"r0_power_dbm", s.r0_power_dbm},
                 {"lambda_B", s.lambda_B},
                 {"lambda_U", s.lambda_U},
                 {"frequency_hz", s.frequency_hz},
                 {"ris_elements", s.ris_elements},
                 {"low_interference_lambda_U", s.low_interference_lambda_U},
                 {"high_interference_lambda_U", s.high_interference_lambda_U}};
  json panels = json::array();
  for (const auto& p : c.abm.panels)
    panels.push_back({{"name", p.name},
                      {"lambda_U", p.lambda_U},
                      {"x0", p.x0},
                      {"expected_trend", detail::trend_name(p.expected_direction)}});
  j["abm"] = {{"n_agents", c.abm.n_agents}, {"steps", c.abm.steps},
              {"runs", c.abm.runs},         {"power_dbm", c.abm.power_dbm},
              {"max_step", c.abm.max_step}, {"mode", enum_name(c.abm.mode)},
              {"panels", panels}};
  const LaplaceValidation& lv = c.laplace_validation;
  j["laplace_validation"] = {{"s_min", lv.s_min},
                             {"s_max", lv.s_max},
                             {"points", lv.points},
                             {"mc_trials", lv.mc_trials},
                             {"field_radius", lv.field_radius},
                             {"min_expected_events", lv.min_expected_events},
                             {"rel_tol", lv.rel_tol}};
  return j;
}

/// Builds a config from JSON; absent keys keep their defaults, unknown keys
/// and bad values raise ConfigError.
inline ExperimentConfig from_json(const json& j) {
  ExperimentConfig c;
  detail::Section root(j, "$");
  root.get("seed", c.seed);
  root.get("trials", c.trials);
  root.get("threads", c.threads);
  root.get("output_dir", c.output_dir);

  if (root.has("topology")) {
    auto t = root.sub("topology");
    t.get("lambda_B", c.topology.lambda_B);
    t.get("lambda_R", c.topology.lambda_R);
    t.get("lambda_U", c.topology.lambda_U);
    t.get("r_B", c.topology.r_B);
    t.get("r_R", c.topology.r_R);
    t.get("ris_height", c.topology.ris_height);
    if (t.has("window")) {
      auto w = t.sub("window");
      Window::Shape shape = Window::Shape::disk;
      w.get_enum("shape", shape);
      try {
        if (shape == Window::Shape::disk) {
          double r = 1000.0;
          w.get("radius", r);
          c.topology.window = Window::disk(r);
        } else {
          double hw = 1000.0, hh = 1000.0;
          w.get("half_width", hw);
          w.get("half_height", hh);
          c.topology.window = Window::rectangle(hw, hh);
        }
      } catch (const ParameterError& e) {
        throw ConfigError(std::string("$.topology.window: ") + e.what());
      }
      w.finish();
    }
    t.finish();
  }

  if (root.has("channel")) {
    auto ch = root.sub("channel");
    ch.get("C", c.channel.C);
    ch.get("alpha", c.channel.alpha);
    ch.get("m1", c.channel.m1);
    ch.get("m2", c.channel.m2);
    ch.get("N", c.channel.N);
    ch.get("frequency_hz", c.channel.frequency);
    ch.get("Gt", c.channel.Gt);
    ch.get("Gr", c.channel.Gr);
    ch.get("power_dbm", c.power_dbm);
    ch.get("sigma2_dbm", c.sigma2_dbm);
    ch.get("bandwidth_hz", c.bandwidth_hz);
    ch.get("a_d", c.channel.a_d);
    ch.get("a_r", c.channel.a_r);
    if (ch.has("phase")) {
      auto p = ch.sub("phase");
      p.get_enum("mode", c.phase.mode);
      p.get("bits", c.phase.bits);
      p.finish();
    }
    ch.finish();
  }

  if (root.has("serving")) {
    auto s = root.sub("serving");
    s.get("d_ik", c.serving.d_ik);
    s.get("d_ij", c.serving.d_ij);
    s.get("d_jk", c.serving.d_jk);
    s.finish();
  }

  if (root.has("interference")) {
    auto s = root.sub("interference");
    s.get_enum("reflection", c.interference.reflection);
    s.get_enum("combine", c.interference.combine);
    s.get("min_distance", c.interference.min_distance);
    s.get_enum("mover_model", c.mover);
    s.finish();
  }

  if (root.has("outage")) {
    auto s = root.sub("outage");
    s.get("T", c.T);
    s.get("series_order", c.series_order);
    s.get_enum("laplace_model", c.laplace_model);
    s.get("d_min", c.d_min);
    s.get("d_max", c.d_max);
    s.get("r_I", c.r_I);
    s.finish();
  }

  if (root.has("sweeps")) {
    auto s = root.sub("sweeps");
    s.get("power_dbm", c.sweeps.power_dbm);
    s.get("r0_power_dbm", c.sweeps.r0_power_dbm);
    s.get("lambda_B", c.sweeps.lambda_B);
    s.get("lambda_U", c.sweeps.lambda_U);
    s.get("frequency_hz", c.sweeps.frequency_hz);
    s.get("ris_elements", c.sweeps.ris_elements);
    s.get("low_interference_lambda_U", c.sweeps.low_interference_lambda_U);
    s.get("high_interference_lambda_U", c.sweeps.high_interference_lambda_U);
    s.finish();
  }

  if (root.has("abm")) {
    auto s = root.sub("abm");
    s.get("n_agents", c.abm.n_agents);
    s.get("steps", c.abm.steps);
    s.get("runs", c.abm.runs);
    s.get("power_dbm", c.abm.power_dbm);
    s.get("max_step", c.abm.max_step);
    s.get_enum("mode", c.abm.mode);
    if (s.has("panels")) {
      const json& arr = j.at("abm").at("panels");
      if (!arr.is_array()) throw ConfigError("$.abm.panels: expected an array");
      c.abm.panels.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        detail::Section p(arr[i], "$.abm.panels[" + std::to_string(i) + "]");
        AbmPanel panel;
        p.get("name", panel.name);
        p.get("lambda_U", panel.lambda_U);
        p.get("x0", panel.x0);
        std::string trend = "any";
        p.get("expected_trend", trend);
        panel.expected_direction = detail::trend_from(trend, "$.abm.panels[" + std::to_string(i) + "].expected_trend");
        p.finish();
        c.abm.panels.push_back(panel);
      }
    }
    s.finish();
  }

  if (root.has("laplace_validation")) {
    auto s = root.sub("laplace_validation");
    auto& lv = c.laplace_validation;
    s.get("s_min", lv.s_min);
    s.get("s_max", lv.s_max);
    s.get("points", lv.points);
    s.get("mc_trials", lv.mc_trials);
    s.get("field_radius", lv.field_radius);
    s.get("min_expected_events", lv.min_expected_events);
    s.get("rel_tol", lv.rel_tol);
    s.finish();
  }
  root.finish();
  c.validate();
  return c;
}

inline void ExperimentConfig::validate() const {
  try {
    topology.validate();
    channel.validate();
    serving.validate();
    phase.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(trials >= 1, "trials must be >= 1");
  need(threads >= 0, "threads must be >= 0");
  need(std::isfinite(power_dbm) && std::isfinite(sigma2_dbm), "power levels must be finite");
  need(T >= 0.0, "T must be >= 0");
  need(series_order >= 0 && series_order <= 60, "series_order must lie in [0, 60]");
  need(d_min > 0.0, "d_min must be > 0");
  need(d_max == 0.0 || d_max > d_min, "d_max must be 0 (window radius) or exceed d_min");
  need(r_I > 0.0, "r_I must be > 0");
  need(interference.min_distance > 0.0, "min_distance must be > 0");
  detail::require_sorted(sweeps.power_dbm, "sweeps.power_dbm");
  detail::require_sorted(sweeps.lambda_B, "sweeps.lambda_B");
  detail::require_sorted(sweeps.lambda_U, "sweeps.lambda_U");
  detail::require_sorted(sweeps.frequency_hz, "sweeps.frequency_hz");
  std::vector<double> n(sweeps.ris_elements.begin(), sweeps.ris_elements.end());
  detail::require_sorted(n, "sweeps.ris_elements");
  need(sweeps.ris_elements.front() >= 1, "sweeps.ris_elements must be >= 1");
  need(sweeps.lambda_B.front() > 0.0, "sweeps.lambda_B must be > 0");
  need(sweeps.frequency_hz.front() > 0.0, "sweeps.frequency_hz must be > 0");
  need(abm.n_agents >= 1 && abm.steps >= 1 && abm.runs >= 1, "abm sizes must be >= 1");
  need(!abm.panels.empty(), "abm.panels must be nonempty");
  for (const auto& p : abm.panels)
    need(p.lambda_U > 0.0 && p.x0 >= 0 && p.x0 <= abm.n_agents,
         "abm panel " + p.name + ": need lambda_U > 0 and 0 <= x0 <= n_agents");
  const auto& lv = laplace_validation;
  need(lv.s_min > 0.0 && lv.s_max > lv.s_min && lv.points >= 2, "laplace_validation grid invalid");
  need(lv.mc_trials >= 1 && lv.field_radius > 0.0 && lv.rel_tol > 0.0 && lv.min_expected_events >= 0.0,
       "laplace_validation settings invalid");
}

/// Line/column of a byte offset, for parse diagnostics.
inline std::string describe_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline ExperimentConfig parse_config(const std::string& text, const std::string& origin = "config") {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw ConfigError(origin + ": " + describe_offset(text, at) + ": " + e.what());
  }
  return from_json(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

inline std::string serialize_config(const ExperimentConfig& c, int indent = 2) {
  return to_json(c).dump(indent);
}

/// Settings that shape results; threads and output_dir are left out so
/// outputs do not depend on where or how parallel a run was.
inline json result_json(const ExperimentConfig& c) {
  json j = to_json(c);
  j.erase("threads");
  j.erase("output_dir");
  return j;
}

/// FNV-1a over the compact result_json serialization.
inline std::uint64_t config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : result_json(c).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Views of the experiment config consumed by each module.

inline ScenarioConfig scenario_config(const ExperimentConfig& c) {
  ScenarioConfig s;
  s.topology = c.topology;
  s.topology.seed = c.seed;
  s.channel = c.channel;
  s.channel.P = c.power_watts();
  s.channel.sigma2 = c.sigma2_watts();
  s.serving = c.serving;
  s.phase = c.phase;
  s.interference = c.interference;
  s.mover = c.mover;
  s.r_I = c.r_I;
  s.seed = c.seed;
  s.threads = c.threads;
  return s;
}

inline LaplaceParams laplace_params(const ExperimentConfig& c) {
  LaplaceParams p;
  p.lambda_B = c.topology.lambda_B;
  p.lambda_R = c.topology.lambda_R;
  p.lambda_U = c.topology.lambda_U;
  p.C = c.channel.C;
  p.alpha = c.channel.alpha;
  p.N = c.channel.N;
  p.d_min = c.d_min;
  p.d_max = c.resolved_d_max();
  p.r_I = c.r_I;
  return p;
}

inline GammaFit serving_fit(const ExperimentConfig& c) {
  const ChannelParams& ch = c.channel;
  return s0_gamma_fit(pathloss_direct(ch.C, c.serving.d_ik, ch.alpha),
                      pathloss_reflected(ch.C, c.serving.d_ij, c.serving.d_jk, ch.alpha), ch.N,
                      ch.m1, ch.m2);
}

inline OutageParams outage_params(const ExperimentConfig& c) {
  OutageParams o;
  o.fit = serving_fit(c);
  o.T = c.T;
  o.P = c.power_watts();
  o.sigma2 = c.sigma2_watts();
  o.laplace = laplace_params(c);
  o.series_order = c.series_order;
  o.model = c.laplace_model;
  return o;
}

}  // namespace risprop
