#pragma once

#include <array>
#include <cmath>

#include "fbmhd/common.hpp"

namespace fbmhd {

// Truncated power series in time (coefficient convention u = sum u_k t^k),
// used to transport initial data through the interior operator order by
// order.  The combinatorics of products, quotients and real powers are the
// standard exact recursions; lengths stay tiny (jet order cap + 1).
class Jet {
 public:
  static constexpr int kCap = 8;

  Jet() = default;
  explicit Jet(int len) : len_(len) { require(len >= 1 && len <= kCap, "jet length out of range"); }
  static Jet constant(double v, int len) {
    Jet j(len);
    j.c_[0] = v;
    return j;
  }

  int length() const { return len_; }
  double& operator[](int i) { return c_[size_t(i)]; }
  double operator[](int i) const { return c_[size_t(i)]; }

  Jet operator+(const Jet& o) const {
    Jet r(len_);
    for (int i = 0; i < len_; ++i) r.c_[size_t(i)] = c_[size_t(i)] + o.c_[size_t(i)];
    return r;
  }
  Jet operator-(const Jet& o) const {
    Jet r(len_);
    for (int i = 0; i < len_; ++i) r.c_[size_t(i)] = c_[size_t(i)] - o.c_[size_t(i)];
    return r;
  }
  Jet operator-() const {
    Jet r(len_);
    for (int i = 0; i < len_; ++i) r.c_[size_t(i)] = -c_[size_t(i)];
    return r;
  }
  Jet operator*(const Jet& o) const {
    Jet r(len_);
    for (int n = 0; n < len_; ++n) {
      double s = 0.0;
      for (int k = 0; k <= n; ++k) s += c_[size_t(k)] * o.c_[size_t(n - k)];
      r.c_[size_t(n)] = s;
    }
    return r;
  }
  Jet operator/(const Jet& o) const {
    Jet r(len_);
    for (int n = 0; n < len_; ++n) {
      double s = c_[size_t(n)];
      for (int k = 1; k <= n; ++k) s -= o.c_[size_t(k)] * r.c_[size_t(n - k)];
      r.c_[size_t(n)] = s / o.c_[0];
    }
    return r;
  }
  Jet operator+(double v) const {
    Jet r = *this;
    r.c_[0] += v;
    return r;
  }
  Jet operator-(double v) const {
    Jet r = *this;
    r.c_[0] -= v;
    return r;
  }
  Jet operator*(double v) const {
    Jet r(len_);
    for (int i = 0; i < len_; ++i) r.c_[size_t(i)] = v * c_[size_t(i)];
    return r;
  }
  Jet operator/(double v) const { return *this * (1.0 / v); }

  friend Jet operator+(double v, const Jet& j) { return j + v; }
  friend Jet operator-(double v, const Jet& j) { return (-j) + v; }
  friend Jet operator*(double v, const Jet& j) { return j * v; }
  friend Jet operator/(double v, const Jet& j) { return Jet::constant(v, j.len_) / j; }

  // series exp(u)
  friend Jet jet_exp(const Jet& u) {
    Jet w(u.len_);
    w.c_[0] = std::exp(u.c_[0]);
    for (int n = 1; n < u.len_; ++n) {
      double s = 0.0;
      for (int k = 1; k <= n; ++k) s += double(k) * u.c_[size_t(k)] * w.c_[size_t(n - k)];
      w.c_[size_t(n)] = s / double(n);
    }
    return w;
  }

  // series u^alpha for u_0 > 0
  friend Jet jet_pow(const Jet& u, double alpha) {
    Jet w(u.len_);
    w.c_[0] = std::pow(u.c_[0], alpha);
    for (int n = 1; n < u.len_; ++n) {
      double s = 0.0;
      for (int k = 1; k <= n; ++k)
        s += (alpha * double(k) - double(n - k)) * u.c_[size_t(k)] * w.c_[size_t(n - k)];
      w.c_[size_t(n)] = s / (double(n) * u.c_[0]);
    }
    return w;
  }

  friend Jet jet_sqrt(const Jet& u) { return jet_pow(u, 0.5); }

 private:
  int len_ = 1;
  std::array<double, kCap> c_{};
};

}  // namespace fbmhd
