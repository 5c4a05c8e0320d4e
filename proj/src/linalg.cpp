#include "fbmhd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fbmhd {

Mat8 Mat8::identity() {
  Mat8 m;
  for (int i = 0; i < 8; ++i) m(i, i) = 1.0;
  return m;
}

Mat8& Mat8::operator+=(const Mat8& o) {
  for (size_t i = 0; i < 64; ++i) a[i] += o.a[i];
  return *this;
}

Mat8& Mat8::operator-=(const Mat8& o) {
  for (size_t i = 0; i < 64; ++i) a[i] -= o.a[i];
  return *this;
}

Mat8& Mat8::operator*=(double s) {
  for (size_t i = 0; i < 64; ++i) a[i] *= s;
  return *this;
}

Mat8 operator+(Mat8 x, const Mat8& y) { return x += y; }
Mat8 operator-(Mat8 x, const Mat8& y) { return x -= y; }
Mat8 operator*(double s, Mat8 x) { return x *= s; }

Mat8 matmul(const Mat8& x, const Mat8& y) {
  Mat8 r;
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k) {
      double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < 8; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

Mat8 transpose(const Mat8& m) {
  Mat8 r;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) r(i, j) = m(j, i);
  return r;
}

Vec8 matvec(const Mat8& m, const Vec8& v) {
  Vec8 r{};
  for (int i = 0; i < 8; ++i) {
    double s = 0.0;
    for (int j = 0; j < 8; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double max_abs_entry(const Mat8& m) {
  double v = 0.0;
  for (double x : m.a) v = std::max(v, std::abs(x));
  return v;
}

double asymmetry(const Mat8& m) {
  double v = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) v = std::max(v, std::abs(m(i, j) - m(j, i)));
  return v;
}

bool cholesky(const Mat8& m, Mat8& lower) {
  lower = Mat8::zero();
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      if (i == j) {
        if (s <= 0.0) return false;
        lower(i, i) = std::sqrt(s);
      } else {
        lower(i, j) = s / lower(j, j);
      }
    }
  }
  return true;
}

Vec8 cholesky_solve(const Mat8& lower, const Vec8& rhs) {
  Vec8 y{};
  for (int i = 0; i < 8; ++i) {
    double s = rhs[i];
    for (int k = 0; k < i; ++k) s -= lower(i, k) * y[k];
    y[i] = s / lower(i, i);
  }
  Vec8 x{};
  for (int i = 7; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < 8; ++k) s -= lower(k, i) * x[k];
    x[i] = s / lower(i, i);
  }
  return x;
}

std::array<double, 8> symmetric_eigenvalues(Mat8 m) {
  // Cyclic Jacobi; 8x8 converges in a handful of sweeps.
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 8; ++p)
      for (int q = p + 1; q < 8; ++q) off += m(p, q) * m(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < 8; ++p) {
      for (int q = p + 1; q < 8; ++q) {
        double apq = m(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < 8; ++k) {
          double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < 8; ++k) {
          double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  std::array<double, 8> ev;
  for (int i = 0; i < 8; ++i) ev[size_t(i)] = m(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double generalized_spectral_radius(const Mat8& m0, const Mat8& m1) {
  Mat8 lower;
  if (!cholesky(m0, lower)) return std::numeric_limits<double>::infinity();
  // B = L^{-1} m1 L^{-T}: solve L X = m1 (columns), then L Y = X^T.
  Mat8 x;
  for (int j = 0; j < 8; ++j) {
    for (int i = 0; i < 8; ++i) {
      double s = m1(i, j);
      for (int k = 0; k < i; ++k) s -= lower(i, k) * x(k, j);
      x(i, j) = s / lower(i, i);
    }
  }
  Mat8 xt = transpose(x);
  Mat8 b;
  for (int j = 0; j < 8; ++j) {
    for (int i = 0; i < 8; ++i) {
      double s = xt(i, j);
      for (int k = 0; k < i; ++k) s -= lower(i, k) * b(k, j);
      b(i, j) = s / lower(i, i);
    }
  }
  auto ev = symmetric_eigenvalues(b);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

}  // namespace fbmhd
