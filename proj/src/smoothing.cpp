#include "fbmhd/smoothing.hpp"

#include <cmath>
#include <complex>

#include "fbmhd/fft.hpp"
#include "fbmhd/kernels.hpp"

namespace fbmhd {

namespace {

// Positive bump on (-1, 1).
double bump(double t) {
  double a = 1.0 - t * t;
  return a > 1e-12 ? std::exp(-1.0 / a) : 0.0;
}

// Weights over offsets lo..hi (relative sample positions), shaped by a bump
// and corrected by a quadratic multiplier so that the discrete moments are
// sum w = 1, sum w*o = 0, sum w*o^2 = 0.  This makes the mollifier exact on
// quadratics, i.e. third-order accurate.
std::vector<double> moment_weights(int lo, int hi) {
  int n = hi - lo + 1;
  std::vector<double> g(static_cast<size_t>(n));
  double half = 0.5 * double(hi - lo) + 1.0;
  double mid = 0.5 * double(hi + lo);
  for (int o = lo; o <= hi; ++o) g[size_t(o - lo)] = bump((double(o) - mid) / half);
  // moment matrix M_ij = sum g * o^{i+j}, solve M (a,b,c)^T = (1,0,0)^T
  double m[5] = {0, 0, 0, 0, 0};
  for (int o = lo; o <= hi; ++o) {
    double w = g[size_t(o - lo)];
    double p = 1.0;
    for (int k = 0; k <= 4; ++k) {
      m[k] += w * p;
      p *= double(o);
    }
  }
  double A[3][4] = {{m[0], m[1], m[2], 1.0}, {m[1], m[2], m[3], 0.0}, {m[2], m[3], m[4], 0.0}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    for (int c = 0; c < 4; ++c) std::swap(A[piv][c], A[col][c]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      double f = A[r][col] / A[col][col];
      for (int c = col; c < 4; ++c) A[r][c] -= f * A[col][c];
    }
  }
  double a = A[0][3] / A[0][0], b = A[1][3] / A[1][1], c = A[2][3] / A[2][2];
  std::vector<double> w(static_cast<size_t>(n));
  for (int o = lo; o <= hi; ++o)
    w[size_t(o - lo)] = g[size_t(o - lo)] * (a + b * double(o) + c * double(o) * double(o));
  return w;
}

int mollifier_points(double width, double spacing) {
  return int(std::floor(width / spacing));
}

void tangential_cutoff_plane(double* plane, const SlabGrid& g, double theta,
                             std::vector<std::complex<double>>& hat) {
  size_t np = g.points_plane();
  hat.resize(np);
  for (size_t p = 0; p < np; ++p) hat[p] = plane[p];
  fft2_forward(hat.data(), g.n2, g.n3);
  double kscale = 6.283185307179586 / g.tangential_extent;
  for (int m2 = 0; m2 < g.n2; ++m2)
    for (int m3 = 0; m3 < g.n3; ++m3) {
      double k2 = std::abs(kscale * fft_mode(m2, g.n2));
      double k3 = std::abs(kscale * fft_mode(m3, g.n3));
      if (std::max(k2, k3) > theta) hat[size_t(m2) * size_t(g.n3) + size_t(m3)] = 0.0;
    }
  fft2_inverse(hat.data(), g.n2, g.n3);
  for (size_t p = 0; p < np; ++p) plane[p] = hat[p].real();
}

}  // namespace

bool SmoothingFamily::time_active(const SlabGrid& g, double theta) const {
  return mollifier_points(width_ / theta, g.dt()) >= 2;
}
bool SmoothingFamily::x1_active(const SlabGrid& g, double theta) const {
  return mollifier_points(width_ / theta, g.h1()) >= 2;
}
bool SmoothingFamily::tangential_active(const SlabGrid& g, double theta) const {
  double kscale = 6.283185307179586 / g.tangential_extent;
  double kmax = kscale * std::max(g.n2 / 2, g.n3 / 2);
  return theta < kmax;
}

SlabField SmoothingFamily::apply(const SlabField& u, double theta) const {
  require(theta >= 1.0, "smoothing parameter must be >= 1");
  const SlabGrid& g = u.grid();
  size_t np = g.points_plane();
  SlabField out = u;
  const auto& k = kern::ops();

  if (tangential_active(g, theta)) {
    std::vector<std::complex<double>> hat;
    for (int comp = 0; comp < u.ncomp(); ++comp)
      for (int l = 0; l < g.levels(); ++l)
        for (int i = 0; i < g.n1; ++i) tangential_cutoff_plane(out.plane(comp, l, i), g, theta, hat);
  }

  int pt = mollifier_points(width_ / theta, g.dt());
  if (pt >= 2) {
    std::vector<double> w = moment_weights(-pt, 0);  // backward offsets -pt..0
    SlabField tmp = out;
    for (int comp = 0; comp < u.ncomp(); ++comp)
      for (int l = 0; l < g.levels(); ++l)
        for (int i = 0; i < g.n1; ++i) {
          double* dst = out.plane(comp, l, i);
          for (size_t p = 0; p < np; ++p) dst[p] = 0.0;
          for (int o = -pt; o <= 0; ++o) {
            int src = l + o;
            if (src < 0) continue;  // zero past
            k.axpy(np, w[size_t(o + pt)], tmp.plane(comp, src, i), dst);
          }
        }
  }

  int px = mollifier_points(width_ / theta, g.h1());
  if (px >= 2) {
    SlabField tmp = out;
    std::vector<std::vector<double>> wcache(size_t(g.n1));
    for (int i = 0; i < g.n1; ++i) {
      int lo = -std::min(i, px), hi = std::min(g.n1 - 1 - i, px);
      wcache[size_t(i)] = moment_weights(lo, hi);
    }
    for (int comp = 0; comp < u.ncomp(); ++comp)
      for (int l = 0; l < g.levels(); ++l)
        for (int i = 0; i < g.n1; ++i) {
          int lo = -std::min(i, px), hi = std::min(g.n1 - 1 - i, px);
          const std::vector<double>& w = wcache[size_t(i)];
          double* dst = out.plane(comp, l, i);
          for (size_t p = 0; p < np; ++p) dst[p] = 0.0;
          for (int o = lo; o <= hi; ++o)
            k.axpy(np, w[size_t(o - lo)], tmp.plane(comp, l, i + o), dst);
        }
  }
  return out;
}

BoundaryField SmoothingFamily::apply(const BoundaryField& u, double theta) const {
  require(theta >= 1.0, "smoothing parameter must be >= 1");
  const SlabGrid& g = u.grid();
  size_t np = g.points_plane();
  BoundaryField out = u;
  const auto& k = kern::ops();

  if (tangential_active(g, theta)) {
    std::vector<std::complex<double>> hat;
    for (int comp = 0; comp < u.ncomp(); ++comp)
      for (int l = 0; l < g.levels(); ++l) tangential_cutoff_plane(out.level_data(comp, l), g, theta, hat);
  }
  int pt = mollifier_points(width_ / theta, g.dt());
  if (pt >= 2) {
    std::vector<double> w = moment_weights(-pt, 0);
    BoundaryField tmp = out;
    for (int comp = 0; comp < u.ncomp(); ++comp)
      for (int l = 0; l < g.levels(); ++l) {
        double* dst = out.level_data(comp, l);
        for (size_t p = 0; p < np; ++p) dst[p] = 0.0;
        for (int o = -pt; o <= 0; ++o) {
          int src = l + o;
          if (src < 0) continue;
          k.axpy(np, w[size_t(o + pt)], tmp.level_data(comp, src), dst);
        }
      }
  }
  return out;
}

}  // namespace fbmhd
