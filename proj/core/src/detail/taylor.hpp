#pragma once

// Truncated Taylor series arithmetic ("jets"). A Jet holds the normalized
// coefficients c_k = g^(k)(x0) / k! of a function around a fixed point, so
// composing jets with the usual rules yields exact derivatives up to the
// truncation order without finite differences.

#include <cmath>
#include <vector>

namespace fisherp::detail {

class Jet {
 public:
  explicit Jet(int order, double value = 0.0) : c_(static_cast<std::size_t>(order) + 1, 0.0) {
    c_[0] = value;
  }

  /// The identity map around x0: x0 + h.
  static Jet variable(int order, double x0) {
    Jet j(order, x0);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

  /// k-th derivative at x0.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[static_cast<std::size_t>(k)] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator-(double s, Jet a) {
    a *= -1.0;
    a.c_[0] += s;
    return a;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const int n = a.order();
    Jet r(n);
    for (int k = 0; k <= n; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
      r[k] = s;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    const int n = a.order();
    Jet r(n);
    for (int k = 0; k <= n; ++k) {
      double s = a[k];
      for (int j = 1; j <= k; ++j) s -= b[j] * r[k - j];
      r[k] = s / b[0];
    }
    return r;
  }

  friend Jet exp(const Jet& a) {
    const int n = a.order();
    Jet r(n, std::exp(a[0]));
    for (int k = 1; k <= n; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += j * a[j] * r[k - j];
      r[k] = s / k;
    }
    return r;
  }

  /// a^e for a[0] > 0.
  friend Jet pow(const Jet& a, double e) {
    const int n = a.order();
    Jet r(n, std::pow(a[0], e));
    for (int k = 1; k <= n; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += (e * j - (k - j)) * a[j] * r[k - j];
      r[k] = s / (k * a[0]);
    }
    return r;
  }

 private:
  std::vector<double> c_;
};

}  // namespace fisherp::detail
