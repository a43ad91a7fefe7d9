#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "risprop/errors.hpp"
#include "risprop/geometry.hpp"
#include "risprop/rng.hpp"

namespace risprop {

inline constexpr double kSpeedOfLight = 299'792'458.0;

struct ChannelParams {
  double C = 6.3326e-5;     ///< path-loss constant at 1 m
  double alpha = 3.0;       ///< path-loss exponent
  double m1 = 2.0;          ///< Nakagami shape, BS–RIS
  double m2 = 2.0;          ///< Nakagami shape, RIS–UE
  int N = 200;              ///< elements per RIS
  double frequency = 3e9;   ///< Hz
  double Gt = 1.0;
  double Gr = 1.0;
  double P = 1e-3;          ///< transmit power, W
  double sigma2 = 1e-12;    ///< noise power, W
  double a_d = 0.6;         ///< power-allocation metadata; not used by any formula
  double a_r = 0.4;

  void validate() const {
    detail::require(C > 0.0 && std::isfinite(C), "C must be > 0");
    detail::require(alpha > 2.0 && std::isfinite(alpha), "alpha must be > 2");
    detail::require(m1 >= 0.5 && m2 >= 0.5, "Nakagami shapes must be >= 0.5");
    detail::require(N >= 1, "N must be >= 1");
    detail::require(frequency > 0.0, "frequency must be > 0");
    detail::require(Gt > 0.0 && Gr > 0.0, "antenna gains must be > 0");
    detail::require(P >= 0.0 && std::isfinite(P), "P must be >= 0");
    detail::require(sigma2 >= 0.0 && std::isfinite(sigma2), "sigma2 must be >= 0");
  }
};

enum class PhaseMode { ideal, quantized };

struct PhaseConfig {
  PhaseMode mode = PhaseMode::ideal;
  int bits = 2;

  void validate() const { detail::require(bits >= 1 && bits <= 8, "phase bits must be in [1, 8]"); }
};

/// One draw of the serving-link small-scale fading: amplitudes and the
/// channel phases of each hop.
struct FadingRealization {
  double g_direct = 0.0;
  double direct_phase = 0.0;
  std::vector<double> h_bs_ris;
  std::vector<double> h_ris_ue;
  std::vector<double> phase_bs_ris;
  std::vector<double> phase_ris_ue;

  std::size_t elements() const noexcept { return h_bs_ris.size(); }
};

/// C = (c₀/f · √(Gt·Gr) / 4π)².
inline double pathloss_constant(double frequency, double Gt = 1.0, double Gr = 1.0) {
  if (!(frequency > 0.0)) throw ParameterError("pathloss_constant: frequency must be > 0");
  if (!(Gt > 0.0) || !(Gr > 0.0)) throw ParameterError("pathloss_constant: gains must be > 0");
  const double a = kSpeedOfLight / frequency * std::sqrt(Gt * Gr) / (4.0 * std::numbers::pi);
  return a * a;
}

inline double pathloss_direct(double C, double d, double alpha) {
  if (!(d > 0.0)) throw DomainError("pathloss_direct: distance must be > 0");
  return C * std::pow(d, -alpha);
}

/// Product-distance model for the BS–RIS–UE hop.
inline double pathloss_reflected(double C, double d_ij, double d_jk, double alpha) {
  if (!(d_ij > 0.0) || !(d_jk > 0.0))
    throw DomainError("pathloss_reflected: distances must be > 0");
  return C * std::pow(d_ij * d_jk, -alpha);
}

/// Rayleigh amplitude with unit second moment.
inline double sample_rayleigh(Rng& rng) {
  return std::sqrt(std::exponential_distribution<double>(1.0)(rng));
}

/// Unit-mean Gamma(m, 1/m) power. Small integer shapes use the Erlang
/// product-of-uniforms form, which is several times faster.
inline double sample_nakagami_power(double m, Rng& rng) {
  if (!(m >= 0.5)) throw ParameterError("sample_nakagami: m must be >= 0.5");
  if (m <= 8.0 && m == std::floor(m)) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double prod = 1.0;
    for (int i = 0; i < static_cast<int>(m); ++i) prod *= 1.0 - u(rng);
    return -std::log(prod) / m;
  }
  return std::gamma_distribution<double>(m, 1.0 / m)(rng);
}

/// Nakagami-m amplitude with unit second moment.
inline double sample_nakagami(double m, Rng& rng) { return std::sqrt(sample_nakagami_power(m, rng)); }

/// d^-α from the squared distance, with fast paths for common exponents.
inline double inverse_power_sq(double d2, double alpha) noexcept {
  if (alpha == 3.0) return 1.0 / (d2 * std::sqrt(d2));
  if (alpha == 4.0) return 1.0 / (d2 * d2);
  if (alpha == 2.0) return 1.0 / d2;
  return std::pow(d2, -0.5 * alpha);
}

inline double wrap_phase(double x) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

/// Nearest of 2^bits uniformly spaced phases in [0, 2π).
inline double quantize_phase(double theta, int bits) {
  if (bits < 1 || bits > 8) throw ParameterError("quantize_phase: bits must be in [1, 8]");
  const double levels = std::ldexp(1.0, bits);
  const double step = 2.0 * std::numbers::pi / levels;
  double k = std::round(wrap_phase(theta) / step);
  if (k >= levels) k -= levels;
  return k * step;
}

/// Draws serving-link fading for an N-element RIS (N = 0 means direct
/// only). Channel phases are left at zero unless `with_phases` is set; ideal
/// alignment makes the received power independent of them.
inline FadingRealization sample_fading(int N, double m1, double m2, Rng& rng,
                                       bool with_phases = true) {
  if (N < 0) throw ParameterError("sample_fading: N must be >= 0");
  std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
  FadingRealization f;
  f.g_direct = sample_rayleigh(rng);
  if (with_phases) f.direct_phase = ph(rng);
  const auto n = static_cast<std::size_t>(N);
  f.h_bs_ris.resize(n);
  f.h_ris_ue.resize(n);
  f.phase_bs_ris.assign(n, 0.0);
  f.phase_ris_ue.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    f.h_bs_ris[i] = sample_nakagami(m1, rng);
    f.h_ris_ue[i] = sample_nakagami(m2, rng);
    if (with_phases) {
      f.phase_bs_ris[i] = ph(rng);
      f.phase_ris_ue[i] = ph(rng);
    }
  }
  return f;
}

/// Per-element shifts that co-phase every reflected path with the direct one.
inline std::vector<double> ris_phase_alignment(const FadingRealization& f,
                                               const PhaseConfig& cfg = {}) {
  if (f.h_ris_ue.size() != f.h_bs_ris.size() || f.phase_bs_ris.size() != f.h_bs_ris.size() ||
      f.phase_ris_ue.size() != f.h_bs_ris.size())
    throw ParameterError("ris_phase_alignment: inconsistent element counts");
  cfg.validate();
  std::vector<double> theta(f.elements());
  for (std::size_t n = 0; n < theta.size(); ++n) {
    const double t = wrap_phase(-f.phase_bs_ris[n] - f.phase_ris_ue[n] + f.direct_phase);
    theta[n] = cfg.mode == PhaseMode::ideal ? t : quantize_phase(t, cfg.bits);
  }
  return theta;
}

/// Received serving power |√PL_d·g·e^{jφ} + √PL_r·Σ h_ij h_jk e^{j(φ_ij+φ_jk+θ)}|².
/// With ideal phases this is (√PL_d·g + √PL_r·Σ|h_ij||h_jk|)².
inline double serving_power_realization(double pl_direct, double pl_reflected,
                                        const FadingRealization& f,
                                        const PhaseConfig& cfg = {}) {
  if (!(pl_direct >= 0.0) || !(pl_reflected >= 0.0))
    throw ParameterError("serving_power_realization: path-loss gains must be >= 0");
  const double a = std::sqrt(pl_direct);
  const double b = std::sqrt(pl_reflected);
  if (f.elements() == 0 || pl_reflected == 0.0) {
    const double d = a * f.g_direct;
    return d * d;
  }
  if (cfg.mode == PhaseMode::ideal) {
    double sr = 0.0;
    for (std::size_t n = 0; n < f.elements(); ++n) sr += f.h_bs_ris[n] * f.h_ris_ue[n];
    const double amp = a * f.g_direct + b * sr;
    return amp * amp;
  }
  const auto theta = ris_phase_alignment(f, cfg);
  std::complex<double> sum = std::polar(a * f.g_direct, f.direct_phase);
  for (std::size_t n = 0; n < f.elements(); ++n)
    sum += std::polar(b * f.h_bs_ris[n] * f.h_ris_ue[n],
                      f.phase_bs_ris[n] + f.phase_ris_ue[n] + theta[n]);
  return std::norm(sum);
}

/// Convenience overload that draws its own fading.
inline double serving_power_realization(double pl_direct, double pl_reflected, int N, double m1,
                                        double m2, Rng& rng, const PhaseConfig& cfg = {}) {
  return serving_power_realization(pl_direct, pl_reflected,
                                   sample_fading(N, m1, m2, rng, cfg.mode != PhaseMode::ideal), cfg);
}

/// How a misaligned N-element reflection is drawn.
enum class ReflectionSampling {
  aggregate,    ///< |Σ|² ≈ N·Exp(1) (complex-Gaussian limit, exact mean)
  per_element,  ///< explicit sum of N Nakagami products with uniform phases
};

/// How one interfering BS's direct and reflected paths combine.
enum class InterferenceSum {
  power,     ///< powers add (independent per-path fading)
  coherent,  ///< field sum before squaring; same mean, one fading draw per BS
};

struct InterferenceOptions {
  ReflectionSampling reflection = ReflectionSampling::aggregate;
  InterferenceSum combine = InterferenceSum::power;
  double min_distance = 1.0;  ///< distances are clamped here to keep path loss finite
};

/// Power of one misaligned reflection with unit path loss (mean N).
inline double sample_misaligned_reflection(int N, double m1, double m2, Rng& rng,
                                           ReflectionSampling mode) {
  if (mode == ReflectionSampling::aggregate)
    return static_cast<double>(N) * std::exponential_distribution<double>(1.0)(rng);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
  std::complex<double> sum = 0.0;
  for (int n = 0; n < N; ++n)
    sum += std::polar(sample_nakagami(m1, rng) * sample_nakagami(m2, rng), ph(rng));
  return std::norm(sum);
}

/// Interference at `target` from every BS except `serving`: direct
/// C·d^-α·|h|² plus each RIS's misaligned reflection with mean
/// N·C²·(d_ij·d_jk)^-α.
inline double interference_from_bs(const std::vector<Point>& bs, const std::vector<RisSite>& ris,
                                   std::optional<std::size_t> serving, const Point& target,
                                   const ChannelParams& ch, Rng& rng,
                                   const InterferenceOptions& opt = {}) {
  std::exponential_distribution<double> expo(1.0);
  const double NC2 = static_cast<double>(ch.N) * ch.C * ch.C;
  const double min_d2 = opt.min_distance * opt.min_distance;
  auto gain = [&](const Point& a, const Point& b) {
    return inverse_power_sq(std::max(distance_sq(a, b), min_d2), ch.alpha);
  };
  std::vector<double> ris_to_target(ris.size());
  for (std::size_t j = 0; j < ris.size(); ++j) ris_to_target[j] = gain(ris[j].position, target);

  double total = 0.0;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (serving && *serving == i) continue;
    const double direct_mean = ch.C * gain(bs[i], target);
    if (opt.combine == InterferenceSum::coherent && opt.reflection == ReflectionSampling::aggregate) {
      double mean = direct_mean;
      for (std::size_t j = 0; j < ris.size(); ++j)
        mean += NC2 * gain(bs[i], ris[j].position) * ris_to_target[j];
      total += mean * expo(rng);
      continue;
    }
    total += direct_mean * expo(rng);
    for (std::size_t j = 0; j < ris.size(); ++j) {
      const double pl = ch.C * ch.C * gain(bs[i], ris[j].position) * ris_to_target[j];
      total += pl * sample_misaligned_reflection(ch.N, ch.m1, ch.m2, rng, opt.reflection);
    }
  }
  return total;
}

/// Reflected beam a moved UE's serving link leaks onto `target`:
/// N·C²·(d_ij·d_jk)^-α·Exp(1), with d_ij from the mover's BS to its RIS and
/// d_jk from that RIS to the target. Zero when the BS has no RIS.
inline double mover_reflection(const NetworkTopology& topo, const Point& mover,
                               const Point& target, const ChannelParams& ch, Rng& rng,
                               const InterferenceOptions& opt = {}) {
  if (topo.bs.empty()) return 0.0;
  const std::size_t b = associate_nearest(mover, topo.bs);
  const auto r = b < topo.serving_ris.size() ? topo.serving_ris[b] : associate_serving_ris(b, topo);
  if (!r) return 0.0;
  const double d_ij = std::max(distance(topo.bs[b], topo.ris[*r].position), opt.min_distance);
  const double d_jk = std::max(distance(topo.ris[*r].position, target), opt.min_distance);
  const double pl = ch.C * ch.C * std::pow(d_ij * d_jk, -ch.alpha);
  return pl * sample_misaligned_reflection(ch.N, ch.m1, ch.m2, rng, opt.reflection);
}

/// Aggregate interference at UE `target_ue` of a sampled topology. When
/// moved_interferers > 0, that many UEs are placed uniformly within r_I of
/// the target and their reflected beams are added.
inline double interference_power_realization(const NetworkTopology& topo, const ChannelParams& ch,
                                             std::size_t target_ue, Rng& rng,
                                             int moved_interferers = 0, double r_I = 10.0,
                                             const InterferenceOptions& opt = {}) {
  if (target_ue >= topo.ue.size()) throw TopologyError("interference: target UE out of range");
  if (target_ue >= topo.serving_bs.size())
    throw TopologyError("interference: target UE is not associated");
  const Point target = topo.ue[target_ue];
  double total =
      interference_from_bs(topo.bs, topo.ris, topo.serving_bs[target_ue], target, ch, rng, opt);
  if (moved_interferers > 0) {
    if (!(r_I > 0.0)) throw ParameterError("interference: r_I must be > 0");
    const Window near = Window::disk(r_I);
    for (int k = 0; k < moved_interferers; ++k) {
      const Point off = near.sample_uniform(rng);
      total += mover_reflection(topo, {target.x + off.x, target.y + off.y}, target, ch, rng, opt);
    }
  }
  return total;
}

}  // namespace risprop
