#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "risprop/errors.hpp"
#include "risprop/rng.hpp"

namespace risprop {

/// Planar position in meters; the typical user sits at the origin.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance_sq(const Point& a, const Point& b) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}
inline double distance(const Point& a, const Point& b) noexcept { return std::sqrt(distance_sq(a, b)); }
inline double norm(const Point& p) noexcept { return std::sqrt(p.x * p.x + p.y * p.y); }

/// Simulation window centred on the origin.
class Window {
 public:
  enum class Shape { disk, rectangle };

  static Window disk(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw ParameterError("window radius must be positive");
    return Window(Shape::disk, radius, radius);
  }
  static Window rectangle(double half_width, double half_height) {
    if (!(half_width > 0.0) || !(half_height > 0.0) || !std::isfinite(half_width) ||
        !std::isfinite(half_height))
      throw ParameterError("window half-extents must be positive");
    return Window(Shape::rectangle, half_width, half_height);
  }

  Shape shape() const noexcept { return shape_; }
  /// Radius for disks; half-width for rectangles.
  double radius() const noexcept { return a_; }
  double half_width() const noexcept { return a_; }
  double half_height() const noexcept { return b_; }

  double area() const noexcept {
    return shape_ == Shape::disk ? std::numbers::pi * a_ * a_ : 4.0 * a_ * b_;
  }

  /// Distance from the origin to the farthest window point.
  double outer_radius() const noexcept {
    return shape_ == Shape::disk ? a_ : std::hypot(a_, b_);
  }

  bool contains(const Point& p) const noexcept {
    if (shape_ == Shape::disk) return p.x * p.x + p.y * p.y <= a_ * a_;
    return std::abs(p.x) <= a_ && std::abs(p.y) <= b_;
  }

  /// Same shape grown by `margin` on every side.
  Window dilated(double margin) const {
    return shape_ == Shape::disk ? disk(a_ + margin) : rectangle(a_ + margin, b_ + margin);
  }

  Point sample_uniform(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (shape_ == Shape::disk) {
      const double r = a_ * std::sqrt(u(rng));
      const double th = 2.0 * std::numbers::pi * u(rng);
      return {r * std::cos(th), r * std::sin(th)};
    }
    const double x = (2.0 * u(rng) - 1.0) * a_;
    const double y = (2.0 * u(rng) - 1.0) * b_;
    return {x, y};
  }

  /// Mirrors a point that left the window back inside.
  Point reflect(Point p) const noexcept {
    if (shape_ == Shape::disk) {
      double r = norm(p);
      if (r <= a_) return p;
      double inside = 2.0 * a_ - r;
      if (inside < 0.0) inside = 0.0;
      const double k = inside / r;
      return {p.x * k, p.y * k};
    }
    auto fold = [](double v, double h) {
      const double period = 4.0 * h;
      double t = std::fmod(v + h, period);
      if (t < 0.0) t += period;
      return t <= 2.0 * h ? t - h : 3.0 * h - t;
    };
    return {fold(p.x, a_), fold(p.y, b_)};
  }

 private:
  Window(Shape s, double a, double b) : shape_(s), a_(a), b_(b) {}
  Shape shape_;
  double a_;
  double b_;
};

struct TopologyConfig {
  double lambda_B = 1e-5;   ///< BS density, 1/m²
  double lambda_R = 1e-5;   ///< RIS density, 1/m²
  double lambda_U = 1e-2;   ///< UE density, 1/m²
  double r_B = 50.0;        ///< BS hard-core distance, m
  double r_R = 30.0;        ///< RIS cluster radius, m
  double ris_height = 0.0;  ///< stored only; heights are neglected in all distances
  std::uint64_t seed = 1;
  Window window = Window::disk(1000.0);

  void validate() const {
    detail::require(lambda_B >= 0.0 && std::isfinite(lambda_B), "lambda_B must be >= 0");
    detail::require(lambda_R >= 0.0 && std::isfinite(lambda_R), "lambda_R must be >= 0");
    detail::require(lambda_U >= 0.0 && std::isfinite(lambda_U), "lambda_U must be >= 0");
    detail::require(r_B > 0.0, "r_B must be > 0");
    detail::require(r_R > 0.0, "r_R must be > 0");
  }
};

struct RisSite {
  Point position;
  std::size_t parent_bs = 0;
};

struct NetworkTopology {
  std::vector<Point> bs;
  std::vector<RisSite> ris;
  std::vector<Point> ue;
  std::vector<std::size_t> serving_bs;                ///< per UE
  std::vector<std::optional<std::size_t>> serving_ris;  ///< per BS
  Window window = Window::disk(1000.0);
};

/// Homogeneous Poisson point process on the window.
inline std::vector<Point> sample_hppp(double intensity, const Window& window, Rng& rng) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity))
    throw ParameterError("sample_hppp: intensity must be >= 0");
  if (intensity == 0.0) return {};
  std::poisson_distribution<long long> count(intensity * window.area());
  const auto n = count(rng);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) pts.push_back(window.sample_uniform(rng));
  return pts;
}

/// Matérn type-II hard-core process: parents from an HPPP on the window
/// dilated by r_B, each with a uniform mark; a parent survives iff no other
/// parent within r_B carries a smaller mark. Survivors inside the window are
/// returned, so the output has no edge bias.
inline std::vector<Point> sample_mhcpp(double parent_intensity, double r_B, const Window& window,
                                       Rng& rng) {
  if (!(r_B > 0.0)) throw ParameterError("sample_mhcpp: r_B must be > 0");
  if (!(parent_intensity >= 0.0)) throw ParameterError("sample_mhcpp: intensity must be >= 0");
  const Window outer = window.dilated(r_B);
  auto parents = sample_hppp(parent_intensity, outer, rng);
  std::vector<double> marks(parents.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& m : marks) m = u(rng);

  const double r2 = r_B * r_B;
  std::vector<Point> kept;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (!window.contains(parents[i])) continue;
    bool survives = true;
    for (std::size_t j = 0; j < parents.size() && survives; ++j) {
      if (j == i) continue;
      const double dx = parents[i].x - parents[j].x;
      const double dy = parents[i].y - parents[j].y;
      if (dx * dx + dy * dy < r2 && marks[j] < marks[i]) survives = false;
    }
    if (survives) kept.push_back(parents[i]);
  }
  return kept;
}

/// Mean retained intensity of the Matérn-II process on the plane.
inline double matern2_intensity(double parent_intensity, double r_B) {
  const double area = std::numbers::pi * r_B * r_B;
  return (1.0 - std::exp(-parent_intensity * area)) / area;
}

/// Clustered RIS placement: each BS gets Poisson(λ_R/λ_B) children uniform
/// in the disk of radius r_R around it, so the global RIS density is λ_R.
inline std::vector<RisSite> sample_ris_clusters(std::span<const Point> bs, double lambda_R,
                                                double lambda_B, double r_R, Rng& rng) {
  if (!(r_R > 0.0)) throw ParameterError("sample_ris_clusters: r_R must be > 0");
  if (!(lambda_R >= 0.0)) throw ParameterError("sample_ris_clusters: lambda_R must be >= 0");
  if (lambda_R == 0.0) return {};
  if (bs.empty()) return {};
  if (!(lambda_B > 0.0))
    throw ParameterError("sample_ris_clusters: lambda_B must be > 0 when lambda_R > 0");
  std::poisson_distribution<int> per_cluster(lambda_R / lambda_B);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RisSite> out;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const int n = per_cluster(rng);
    for (int k = 0; k < n; ++k) {
      const double r = r_R * std::sqrt(u(rng));
      const double th = 2.0 * std::numbers::pi * u(rng);
      out.push_back({{bs[i].x + r * std::cos(th), bs[i].y + r * std::sin(th)}, i});
    }
  }
  return out;
}

/// Nearest-BS association; ties go to the lowest index.
inline std::size_t associate_nearest(const Point& ue, std::span<const Point> bs) {
  if (bs.empty()) throw TopologyError("associate_nearest: no base stations");
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const double dx = ue.x - bs[i].x;
    const double dy = ue.y - bs[i].y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

/// The BS's own cluster child closest to it, if any.
inline std::optional<std::size_t> associate_serving_ris(std::size_t bs_index,
                                                        const NetworkTopology& topo) {
  if (bs_index >= topo.bs.size())
    throw TopologyError("associate_serving_ris: BS index out of range");
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < topo.ris.size(); ++j) {
    if (topo.ris[j].parent_bs != bs_index) continue;
    const double d = distance(topo.ris[j].position, topo.bs[bs_index]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

/// Fills serving_bs (per UE) and serving_ris (per BS).
inline void resolve_associations(NetworkTopology& topo) {
  topo.serving_ris.assign(topo.bs.size(), std::nullopt);
  for (std::size_t i = 0; i < topo.bs.size(); ++i)
    topo.serving_ris[i] = associate_serving_ris(i, topo);
  topo.serving_bs.clear();
  if (topo.bs.empty()) {
    if (!topo.ue.empty()) throw TopologyError("no base stations to associate UEs with");
    return;
  }
  topo.serving_bs.reserve(topo.ue.size());
  for (const Point& u : topo.ue) topo.serving_bs.push_back(associate_nearest(u, topo.bs));
}

/// Samples BSs, RIS clusters and UEs and resolves associations. Fully
/// determined by cfg.seed.
inline NetworkTopology sample_topology(const TopologyConfig& cfg) {
  cfg.validate();
  NetworkTopology t;
  t.window = cfg.window;
  Rng bs_rng = make_rng(cfg.seed, 0, 1);
  Rng ris_rng = make_rng(cfg.seed, 0, 2);
  Rng ue_rng = make_rng(cfg.seed, 0, 3);
  t.bs = sample_mhcpp(cfg.lambda_B, cfg.r_B, cfg.window, bs_rng);
  t.ris = sample_ris_clusters(t.bs, cfg.lambda_R, cfg.lambda_B, cfg.r_R, ris_rng);
  t.ue = sample_hppp(cfg.lambda_U, cfg.window, ue_rng);
  resolve_associations(t);
  return t;
}

inline double min_pairwise_distance(std::span<const Point> pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, distance(pts[i], pts[j]));
  return best;
}

}  // namespace risprop
