#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "risprop/errors.hpp"

namespace risprop {

/// Truncated Taylor series c[0] + c[1]·δ + ... + c[k]·δ^k around a fixed
/// expansion point. Arithmetic is closed under +, −, ×, ÷, exp, log and
/// real powers; all operands must share the same order.
class Jet {
 public:
  explicit Jet(std::size_t order = 0) : c_(order + 1, 0.0) {}
  explicit Jet(std::vector<double> coefficients) : c_(std::move(coefficients)) {
    if (c_.empty()) c_.push_back(0.0);
  }

  static Jet constant(double value, std::size_t order) {
    Jet j(order);
    j.c_[0] = value;
    return j;
  }

  /// The independent variable expanded at `at`: at + δ.
  static Jet variable(double at, std::size_t order) {
    Jet j = constant(at, order);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  std::size_t order() const noexcept { return c_.size() - 1; }
  double value() const noexcept { return c_[0]; }
  double operator[](std::size_t i) const { return c_.at(i); }
  double& operator[](std::size_t i) { return c_.at(i); }
  std::span<const double> coefficients() const noexcept { return c_; }

  /// k-th derivative at the expansion point: k! · c[k].
  double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f * c_.at(k);
  }

  /// Evaluates the truncated polynomial at displacement δ.
  double evaluate(double delta) const noexcept {
    double r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * delta + *it;
    return r;
  }

  bool all_finite() const noexcept {
    return std::all_of(c_.begin(), c_.end(), [](double v) { return std::isfinite(v); });
  }

  Jet& operator+=(const Jet& o) {
    check_order(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_order(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    check_order(o);
    std::vector<double> r(c_.size(), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k)
      for (std::size_t j = 0; j <= k; ++j) r[k] += c_[j] * o.c_[k - j];
    c_ = std::move(r);
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    check_order(o);
    if (o.c_[0] == 0.0) throw DomainError("Jet division by a series with zero constant term");
    std::vector<double> r(c_.size(), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
      double acc = c_[k];
      for (std::size_t j = 1; j <= k; ++j) acc -= o.c_[j] * r[k - j];
      r[k] = acc / o.c_[0];
    }
    c_ = std::move(r);
    return *this;
  }
  Jet& operator+=(double v) noexcept {
    c_[0] += v;
    return *this;
  }
  Jet& operator-=(double v) noexcept {
    c_[0] -= v;
    return *this;
  }
  Jet& operator*=(double v) noexcept {
    for (double& x : c_) x *= v;
    return *this;
  }
  Jet& operator/=(double v) noexcept {
    for (double& x : c_) x /= v;
    return *this;
  }

  Jet operator-() const {
    Jet r = *this;
    for (double& x : r.c_) x = -x;
    return r;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b) { return (-b) += a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a /= b; }
  friend Jet operator/(double a, const Jet& b) { return constant(a, b.order()) /= b; }

  friend Jet exp(const Jet& a) {
    Jet r(a.order());
    r.c_[0] = std::exp(a.c_[0]);
    for (std::size_t k = 1; k < r.c_.size(); ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j)
        acc += static_cast<double>(j) * a.c_[j] * r.c_[k - j];
      r.c_[k] = acc / static_cast<double>(k);
    }
    return r;
  }

  friend Jet log(const Jet& a) {
    if (!(a.c_[0] > 0.0)) throw DomainError("Jet log requires a positive constant term");
    Jet r(a.order());
    r.c_[0] = std::log(a.c_[0]);
    for (std::size_t k = 1; k < r.c_.size(); ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j < k; ++j)
        acc += static_cast<double>(j) * r.c_[j] * a.c_[k - j];
      r.c_[k] = (a.c_[k] - acc / static_cast<double>(k)) / a.c_[0];
    }
    return r;
  }

  /// a^p for real p; requires a positive constant term.
  friend Jet pow(const Jet& a, double p) {
    if (!(a.c_[0] > 0.0)) throw DomainError("Jet pow requires a positive constant term");
    Jet r(a.order());
    r.c_[0] = std::pow(a.c_[0], p);
    for (std::size_t k = 1; k < r.c_.size(); ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j)
        acc += ((p + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * a.c_[j] *
               r.c_[k - j];
      r.c_[k] = acc / (static_cast<double>(k) * a.c_[0]);
    }
    return r;
  }

  friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }

 private:
  void check_order(const Jet& o) const {
    if (o.c_.size() != c_.size())
      throw ParameterError("Jet order mismatch: " + std::to_string(order()) + " vs " +
                           std::to_string(o.order()));
  }

  std::vector<double> c_;
};

/// Max-abs coefficient; the error norm used by vector-valued quadrature.
inline double max_abs(const Jet& j) noexcept {
  double m = 0.0;
  for (double v : j.coefficients()) m = std::max(m, std::abs(v));
  return m;
}
inline double max_abs(double v) noexcept { return std::abs(v); }

}  // namespace risprop
