#include "fbmhd/operators.hpp"

#include <cmath>

#include "fbmhd/kernels.hpp"
#include "fbmhd/matrices.hpp"
#include "fbmhd/stencil.hpp"

namespace fbmhd {

namespace {

// Coefficient planes of the admissible state on one tangential plane.
void coef_planes(const ThermoModel& eos, const double* const u[8], size_t np, double* c,
                 double* rho) {
  for (size_t p = 0; p < np; ++p) {
    double q = u[0][p], h1 = u[4][p], h2 = u[5][p], h3 = u[6][p], s = u[7][p];
    double pe = q - 0.5 * (h1 * h1 + h2 * h2 + h3 * h3) + eos.p_stiff;
    require_domain(pe > 0.0, "state outside EOS domain inside a field operator");
    double r = std::pow(pe * std::exp(-s / eos.entropy_scale), 1.0 / eos.gamma);
    require_domain(r > eos.rho_floor && r < eos.rho_ceil,
                   "state outside the hyperbolicity window inside a field operator");
    c[p] = 1.0 / (eos.gamma * pe);
    rho[p] = r;
  }
}

}  // namespace

SlabField nonlinear_interior_residual(const ThermoModel& eos, const SlabField& U,
                                      const Lift& interface) {
  require(U.ncomp() == 8, "interior residual expects an 8-component field");
  require(U.grid().same_shape(interface.grid()), "grid mismatch between state and interface");
  const SlabGrid& g = U.grid();
  const size_t np = g.points_plane();
  const auto& k = kern::ops();

  SlabField out(g, 8);
  std::vector<double> du(4 * 8 * np), t(4 * 8 * np), coefs(2 * np), lift_scratch, invp1(np);

  for (int l = 0; l < g.levels(); ++l) {
    for (int i = 0; i < g.n1; ++i) {
      const double* u[8];
      double* y[8];
      for (int comp = 0; comp < 8; ++comp) {
        u[comp] = U.plane(comp, l, i);
        y[comp] = out.plane(comp, l, i);
      }
      const double* duk[4][8];
      for (int a = 0; a < 4; ++a)
        for (int comp = 0; comp < 8; ++comp) {
          double* dst = du.data() + (size_t(a) * 8 + size_t(comp)) * np;
          slab_deriv_plane(U, a, comp, l, i, dst);
          duk[a][comp] = dst;
        }
      double* c = coefs.data();
      double* rho = coefs.data() + np;
      coef_planes(eos, u, np, c, rho);
      Lift::Planes lp = interface.eval(l, i, lift_scratch, false);
      for (size_t p = 0; p < np; ++p) invp1[p] = 1.0 / lp.d[1][p];

      // A0 D_t U + A2 D_2 U + A3 D_3 U
      k.matvec_a0(np, c, rho, u[4], u[5], u[6], duk[0], y, false);
      k.matvec_ai(np, 2, c, rho, u[2], u[5], u[4], u[5], u[6], duk[1 + 1], y, true);
      k.matvec_ai(np, 3, c, rho, u[3], u[6], u[4], u[5], u[6], duk[1 + 2], y, true);

      // straightened normal flux applied to D_1 U
      double* t1[8];
      double* t0[8];
      double* t2[8];
      double* t3[8];
      for (int comp = 0; comp < 8; ++comp) {
        t1[comp] = t.data() + size_t(comp) * np;
        t0[comp] = t.data() + (8 + size_t(comp)) * np;
        t2[comp] = t.data() + (16 + size_t(comp)) * np;
        t3[comp] = t.data() + (24 + size_t(comp)) * np;
      }
      k.matvec_ai(np, 1, c, rho, u[1], u[4], u[4], u[5], u[6], duk[1], t1, false);
      k.matvec_a0(np, c, rho, u[4], u[5], u[6], duk[1], t0, false);
      k.matvec_ai(np, 2, c, rho, u[2], u[5], u[4], u[5], u[6], duk[1], t2, false);
      k.matvec_ai(np, 3, c, rho, u[3], u[6], u[4], u[5], u[6], duk[1], t3, false);
      for (int comp = 0; comp < 8; ++comp) {
        k.wacc(np, -1.0, lp.d[0], t0[comp], t1[comp]);
        k.wacc(np, -1.0, lp.d[2], t2[comp], t1[comp]);
        k.wacc(np, -1.0, lp.d[3], t3[comp], t1[comp]);
        k.wmul(np, invp1.data(), t1[comp]);
        k.axpy(np, 1.0, t1[comp], y[comp]);
      }
    }
  }
  return out;
}

void dfrak_planes(size_t n, const double* xi2, const double* xi3, const double* z2,
                  const double* z3, double* out2, double* out3) {
  for (size_t p = 0; p < n; ++p) {
    double n2 = 1.0 + xi2[p] * xi2[p] + xi3[p] * xi3[p];
    double nn = std::sqrt(n2);
    double dotv = (xi2[p] * z2[p] + xi3[p] * z3[p]) / (n2 * nn);
    out2[p] = z2[p] / nn - dotv * xi2[p];
    out3[p] = z3[p] / nn - dotv * xi3[p];
  }
}

void mean_curvature_plane(const double* phi, int n2, int n3, double h2, double h3, double* out) {
  size_t np = size_t(n2) * size_t(n3);
  std::vector<double> g2(np), g3(np), f2(np), f3(np), d(np);
  plane_d2(phi, n2, n3, h2, g2.data());
  plane_d3(phi, n2, n3, h3, g3.data());
  for (size_t p = 0; p < np; ++p) {
    double nn = std::sqrt(1.0 + g2[p] * g2[p] + g3[p] * g3[p]);
    f2[p] = g2[p] / nn;
    f3[p] = g3[p] / nn;
  }
  plane_d2(f2.data(), n2, n3, h2, out);
  plane_d3(f3.data(), n2, n3, h3, d.data());
  for (size_t p = 0; p < np; ++p) out[p] += d[p];
}

BoundaryField mean_curvature(const BoundaryField& phi) {
  const SlabGrid& g = phi.grid();
  BoundaryField out(g, 1);
  for (int l = 0; l < g.levels(); ++l)
    mean_curvature_plane(phi.level_data(0, l), g.n2, g.n3, g.h2(), g.h3(), out.level_data(0, l));
  return out;
}

double mean_curvature_patch(const std::vector<double>& patch, int half_width, double h2,
                            double h3) {
  int n = 2 * half_width + 1;
  require(int(patch.size()) == n * n && half_width >= 2,
          "patch must be (2r+1)^2 values with r >= 2");
  auto at = [&](int j, int k) { return patch[size_t(j) * size_t(n) + size_t(k)]; };
  // centered first derivatives of phi on the inner 3x3 block around the
  // center c = half_width, then the same centered divergence at the center
  int c = half_width;
  auto f = [&](int j, int k, int comp) {
    double g2 = (at(j + 1, k) - at(j - 1, k)) / (2.0 * h2);
    double g3 = (at(j, k + 1) - at(j, k - 1)) / (2.0 * h3);
    double nn = std::sqrt(1.0 + g2 * g2 + g3 * g3);
    return comp == 2 ? g2 / nn : g3 / nn;
  };
  double d2 = (f(c + 1, c, 2) - f(c - 1, c, 2)) / (2.0 * h2);
  double d3 = (f(c, c + 1, 3) - f(c, c - 1, 3)) / (2.0 * h3);
  return d2 + d3;
}

BoundaryField boundary_residual(const SlabField& U, const Lift& interface,
                                double surface_tension) {
  require(U.ncomp() == 8, "boundary residual expects an 8-component field");
  require(U.grid().same_shape(interface.grid()), "grid mismatch between state and interface");
  require_domain(surface_tension > 0.0, "surface tension must be positive");
  const SlabGrid& g = U.grid();
  size_t np = g.points_plane();
  const BoundaryField& phi = interface.boundary();
  BoundaryField out(g, 2);
  std::vector<double> dtphi(np), d2phi(np), d3phi(np), curv(np);
  for (int l = 0; l < g.levels(); ++l) {
    bdry_dt_plane(phi, 0, l, dtphi.data());
    plane_d2(phi.level_data(0, l), g.n2, g.n3, g.h2(), d2phi.data());
    plane_d3(phi.level_data(0, l), g.n2, g.n3, g.h3(), d3phi.data());
    mean_curvature_plane(phi.level_data(0, l), g.n2, g.n3, g.h2(), g.h3(), curv.data());
    const double* q = U.plane(kQ, l, 0);
    const double* v1 = U.plane(kV1, l, 0);
    const double* v2 = U.plane(kV2, l, 0);
    const double* v3 = U.plane(kV3, l, 0);
    double* r1 = out.level_data(0, l);
    double* r2 = out.level_data(1, l);
    for (size_t p = 0; p < np; ++p) {
      r1[p] = dtphi[p] - (v1[p] - v2[p] * d2phi[p] - v3[p] * d3phi[p]);
      r2[p] = q[p] - surface_tension * curv[p];
    }
  }
  return out;
}

ConstraintResiduals constraint_residuals(const SlabField& U, const Lift& interface) {
  require(U.ncomp() == 8, "constraint residuals expect the full state field");
  require(U.grid().same_shape(interface.grid()), "grid mismatch between state and interface");
  const SlabGrid& g = U.grid();
  size_t np = g.points_plane();
  ConstraintResiduals out{SlabField(g, 1), BoundaryField(g, 1)};
  std::vector<double> d1(3 * np), dtan(np), lift_scratch;
  for (int l = 0; l < g.levels(); ++l) {
    for (int i = 0; i < g.n1; ++i) {
      Lift::Planes lp = interface.eval(l, i, lift_scratch, false);
      for (int m = 0; m < 3; ++m)
        slab_deriv_plane(U, 1, kH1 + m, l, i, d1.data() + size_t(m) * np);
      double* r = out.interior.plane(0, l, i);
      for (size_t p = 0; p < np; ++p) r[p] = d1[p] / lp.d[1][p];
      for (int m = 1; m < 3; ++m) {
        slab_deriv_plane(U, 1 + m, kH1 + m, l, i, dtan.data());
        const double* d1m = d1.data() + size_t(m) * np;
        for (size_t p = 0; p < np; ++p)
          r[p] += dtan[p] - lp.d[size_t(1 + m)][p] / lp.d[1][p] * d1m[p];
      }
    }
    // H.N on the trace
    const BoundaryField& phi = interface.boundary();
    std::vector<double> d2phi(np), d3phi(np);
    plane_d2(phi.level_data(0, l), g.n2, g.n3, g.h2(), d2phi.data());
    plane_d3(phi.level_data(0, l), g.n2, g.n3, g.h3(), d3phi.data());
    const double* H1 = U.plane(kH1, l, 0);
    const double* H2 = U.plane(kH2, l, 0);
    const double* H3 = U.plane(kH3, l, 0);
    double* rb = out.boundary.level_data(0, l);
    for (size_t p = 0; p < np; ++p) rb[p] = H1[p] - H2[p] * d2phi[p] - H3[p] * d3phi[p];
  }
  return out;
}

SlabField partial_phi(const SlabField& u, const Lift& interface, int idx) {
  require(idx >= 0 && idx <= 3, "partial_phi: idx must be 0..3");
  require(u.grid().same_shape(interface.grid()), "grid mismatch");
  const SlabGrid& g = u.grid();
  size_t np = g.points_plane();
  SlabField out(g, u.ncomp());
  std::vector<double> d1(np), da(np), lift_scratch;
  for (int comp = 0; comp < u.ncomp(); ++comp) {
    for (int l = 0; l < g.levels(); ++l) {
      for (int i = 0; i < g.n1; ++i) {
        Lift::Planes lp = interface.eval(l, i, lift_scratch, false);
        slab_deriv_plane(u, 1, comp, l, i, d1.data());
        double* y = out.plane(comp, l, i);
        if (idx == 1) {
          for (size_t p = 0; p < np; ++p) y[p] = d1[p] / lp.d[1][p];
        } else {
          slab_deriv_plane(u, idx, comp, l, i, da.data());
          const double* w = lp.d[size_t(idx == 0 ? 0 : idx)];
          for (size_t p = 0; p < np; ++p) y[p] = da[p] - w[p] / lp.d[1][p] * d1[p];
        }
      }
    }
  }
  return out;
}

}  // namespace fbmhd
