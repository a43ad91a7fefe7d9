#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "risprop/errors.hpp"
#include "risprop/jet.hpp"

namespace risprop::quad {

struct Options {
  double abs_tol = 0.0;
  double rel_tol = 1e-11;
  int max_subdivisions = 4000;
};

template <class V>
struct Result {
  V value;
  double error = 0.0;
  int subdivisions = 0;
  long evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Segment {
  double a, b;
  V value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class V, class F>
Segment<V> kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  V fc = f(center);
  V kronrod = fc * kKronrodWeights[7];
  V gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    V f1 = f(center - dx);
    V f2 = f(center + dx);
    V pair = f1 + f2;
    kronrod += pair * kKronrodWeights[j];
    if (j % 2 == 1) gauss += pair * kGaussWeights[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  const double err = max_abs(kronrod - gauss);
  return Segment<V>{a, b, std::move(kronrod), err};
}

}  // namespace detail

/// Adaptive Gauss–Kronrod (7/15) quadrature of f over [a, b]. V may be
/// double or any vector-like type with +, scalar × and max_abs (e.g. Jet).
template <class F>
auto integrate(const F& f, double a, double b, const Options& opt = {}) {
  using V = decltype(f(a));
  if (!(b > a)) throw DomainError("quad::integrate requires b > a");
  std::priority_queue<detail::Segment<V>> heap;
  auto first = detail::kronrod15<V>(f, a, b);
  V total = first.value;
  double total_err = first.error;
  heap.push(std::move(first));
  int splits = 0;
  while (total_err > std::max(opt.abs_tol, opt.rel_tol * max_abs(total))) {
    if (splits >= opt.max_subdivisions) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge on [" << a << ", " << b << "] after "
          << splits << " subdivisions: error estimate " << total_err << ", |value| "
          << max_abs(total) << ", rel_tol " << opt.rel_tol;
      throw NumericError(msg.str());
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::kronrod15<V>(f, worst.a, mid);
    auto right = detail::kronrod15<V>(f, mid, worst.b);
    total -= worst.value;
    total += left.value;
    total += right.value;
    total_err += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++splits;
    if (!std::isfinite(max_abs(total)))
      throw NumericError("adaptive quadrature produced a non-finite value");
  }
  // Re-sum to shed the accumulated rounding of incremental updates.
  V sum = heap.top().value * 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return Result<V>{std::move(sum), err, splits, 15L * (2L * splits + 1L)};
}

/// ∫_a^∞ f, mapped onto [0, 1) by x = a + scale·t/(1 − t).
template <class F>
auto integrate_to_infinity(const F& f, double a, double scale, const Options& opt = {}) {
  if (!(scale > 0.0)) throw DomainError("quad::integrate_to_infinity needs a positive scale");
  auto mapped = [&](double t) {
    const double om = 1.0 - t;
    const double x = a + scale * t / om;
    return f(x) * (scale / (om * om));
  };
  return integrate(mapped, 0.0, 1.0, opt);
}

}  // namespace risprop::quad
