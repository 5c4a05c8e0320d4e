#include "fbmhd/hstar.hpp"

#include <cmath>
#include <complex>

#include "fbmhd/cutoffs.hpp"
#include "fbmhd/fft.hpp"
#include "fbmhd/kernels.hpp"
#include "fbmhd/stencil.hpp"

namespace fbmhd {

namespace {

void sigma_multiply(SlabField& f) {
  const SlabGrid& g = f.grid();
  for (int comp = 0; comp < f.ncomp(); ++comp)
    for (int l = 0; l < g.levels(); ++l)
      for (int i = 0; i < g.n1; ++i) {
        double s = sigma(g.x1(i));
        double* p = f.plane(comp, l, i);
        for (size_t q = 0; q < g.points_plane(); ++q) p[q] *= s;
      }
}

double trap_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

}  // namespace

SlabField dstar_apply(const SlabField& u, const MultiIndex& alpha, int max_order) {
  require(alpha.weight() <= max_order, "dstar_apply: multi-index weight exceeds the cap");
  SlabField cur = u;
  for (int r = 0; r < alpha.a[4]; ++r) cur = slab_deriv(cur, 1);
  for (int r = 0; r < alpha.a[3]; ++r) cur = slab_deriv(cur, 3);
  for (int r = 0; r < alpha.a[2]; ++r) cur = slab_deriv(cur, 2);
  for (int r = 0; r < alpha.a[1]; ++r) {
    cur = slab_deriv(cur, 1);
    sigma_multiply(cur);
  }
  for (int r = 0; r < alpha.a[0]; ++r) cur = slab_deriv(cur, 0);
  return cur;
}

double l2_level(const SlabField& u, int level) {
  const SlabGrid& g = u.grid();
  const auto& k = kern::ops();
  double cell = g.h1() * g.h2() * g.h3();
  double acc = 0.0;
  for (int comp = 0; comp < u.ncomp(); ++comp)
    for (int i = 0; i < g.n1; ++i)
      acc += trap_weight(i, g.n1) * k.sumsq(g.points_plane(), u.plane(comp, level, i));
  return acc * cell;  // squared integrand sum; caller roots
}

double l2_spacetime(const SlabField& u, int level) {
  const SlabGrid& g = u.grid();
  int last = level < 0 ? g.levels() - 1 : level;
  double acc = 0.0;
  for (int l = 0; l <= last; ++l) acc += trap_weight(l, last + 1) * l2_level(u, l);
  return std::sqrt(acc * g.dt());
}

double l2_boundary(const BoundaryField& u, int level) {
  const SlabGrid& g = u.grid();
  const auto& k = kern::ops();
  int last = level < 0 ? g.levels() - 1 : level;
  double acc = 0.0;
  for (int comp = 0; comp < u.ncomp(); ++comp)
    for (int l = 0; l <= last; ++l)
      acc += trap_weight(l, last + 1) * k.sumsq(g.points_plane(), u.level_data(comp, l));
  return std::sqrt(acc * g.dt() * g.h2() * g.h3());
}

double hstar_norm(const SlabField& u, int m, int level) {
  double acc = 0.0;
  for (const MultiIndex& a : multi_indices_up_to(m)) {
    // component at a time keeps the scratch footprint at two scalar fields
    for (int comp = 0; comp < u.ncomp(); ++comp) {
      SlabField one(u.grid(), 1);
      for (int l = 0; l < u.grid().levels(); ++l)
        for (int i = 0; i < u.grid().n1; ++i) {
          const double* src = u.plane(comp, l, i);
          double* dst = one.plane(0, l, i);
          for (size_t p = 0; p < u.grid().points_plane(); ++p) dst[p] = src[p];
        }
      SlabField d = dstar_apply(one, a, m);
      double nrm = l2_spacetime(d, level);
      acc += nrm * nrm;
    }
  }
  return std::sqrt(acc);
}

double sobolev_norm(const SlabField& u, int m, int level) {
  double acc = 0.0;
  // plain multi-indices over (t, x1, x2, x3)
  for (int a0 = 0; a0 <= m; ++a0)
    for (int a1 = 0; a0 + a1 <= m; ++a1)
      for (int a2 = 0; a0 + a1 + a2 <= m; ++a2)
        for (int a3 = 0; a0 + a1 + a2 + a3 <= m; ++a3) {
          SlabField d = u;
          for (int r = 0; r < a1; ++r) d = slab_deriv(d, 1);
          for (int r = 0; r < a2; ++r) d = slab_deriv(d, 2);
          for (int r = 0; r < a3; ++r) d = slab_deriv(d, 3);
          for (int r = 0; r < a0; ++r) d = slab_deriv(d, 0);
          double nrm = l2_spacetime(d, level);
          acc += nrm * nrm;
        }
  return std::sqrt(acc);
}

double boundary_sobolev_norm(const BoundaryField& psi, int s, int level) {
  const SlabGrid& g = psi.grid();
  int last = level < 0 ? g.levels() - 1 : level;
  size_t np = g.points_plane();
  double two_pi = 6.283185307179586;
  double kscale = two_pi / g.tangential_extent;
  std::vector<std::complex<double>> hat(np);
  std::vector<double> work(np);

  double acc = 0.0;
  for (int comp = 0; comp < psi.ncomp(); ++comp) {
    BoundaryField cur(g, 1);
    for (int l = 0; l < g.levels(); ++l) {
      const double* src = psi.level_data(comp, l);
      double* dst = cur.level_data(0, l);
      for (size_t p = 0; p < np; ++p) dst[p] = src[p];
    }
    for (int j = 0; j <= s; ++j) {  // j time derivatives, s - j tangential weight
      if (j > 0) cur = bdry_deriv(cur, 0);
      int rem = s - j;
      for (int l = 0; l <= last; ++l) {
        const double* plane = cur.level_data(0, l);
        for (size_t p = 0; p < np; ++p) hat[p] = plane[p];
        fft2_forward(hat.data(), g.n2, g.n3);
        double lvl = 0.0;
        for (int m2 = 0; m2 < g.n2; ++m2)
          for (int m3 = 0; m3 < g.n3; ++m3) {
            double k2 = kscale * fft_mode(m2, g.n2);
            double k3 = kscale * fft_mode(m3, g.n3);
            double w = std::pow(1.0 + k2 * k2 + k3 * k3, rem);
            double a = std::abs(hat[size_t(m2) * size_t(g.n3) + size_t(m3)]);
            lvl += w * a * a;
          }
        acc += trap_weight(l, last + 1) * lvl * g.h2() * g.h3() / double(np);
      }
    }
  }
  return std::sqrt(acc * g.dt());
}

double sup_state_bound(const SlabField& u) {
  double m = max_abs(u);
  for (int axis = 0; axis < 4; ++axis) m = std::max(m, max_abs(slab_deriv(u, axis)));
  return m;
}

}  // namespace fbmhd
