#include "fbmhd/linear_solver.hpp"

#include <cmath>
#include <complex>

#include "fbmhd/cutoffs.hpp"
#include "fbmhd/fft.hpp"
#include "fbmhd/hstar.hpp"
#include "fbmhd/kernels.hpp"
#include "fbmhd/operators.hpp"
#include "fbmhd/stencil.hpp"

namespace fbmhd {
namespace {

// light spatial 8-component buffer for the marching snapshot
struct SpatialFieldLike {
  const SlabGrid* g = nullptr;
  std::vector<double> data;
  void init(const SlabGrid& grid) {
    g = &grid;
    data.assign(8 * grid.points_space(), 0.0);
  }
  double* plane(int comp, int i1) {
    return data.data() + (size_t(comp) * size_t(g->n1) + size_t(i1)) * g->points_plane();
  }
  const double* plane(int comp, int i1) const {
    return data.data() + (size_t(comp) * size_t(g->n1) + size_t(i1)) * g->points_plane();
  }
};

// x1 derivative of a spatial snapshot plane
void snap_d1(const SpatialFieldLike& f, int comp, int i1, double* out) {
  const SlabGrid& g = *f.g;
  TimeStencil s = x1_stencil(i1, g.n1, g.h1());
  kern::ops().comb3(g.points_plane(), s.coeff[0], f.plane(comp, i1 + s.offset[0]), s.coeff[1],
                    f.plane(comp, i1 + s.offset[1]), s.coeff[2], f.plane(comp, i1 + s.offset[2]),
                    out);
}

// base-state coefficient planes and lift data for one (level, i1)
struct BaseSlice {
  size_t np;
  const double* u[8];
  std::vector<double> coef;  // c, rho
  std::vector<double> lift_scratch;
  Lift::Planes lp;
  // entries of dJ: d_a P2, d_a P3 for a = 0..3 (a=1 from the cutoff slope)
  std::vector<double> dj;
  // base derivative planes for the zeroth-order coupling (empty if constant)
  std::vector<double> du;

  BaseSlice(const BasicState& base, int level, int i1, bool need_coupling) {
    const SlabGrid& g = base.grid();
    np = g.points_plane();
    for (int comp = 0; comp < 8; ++comp) u[comp] = base.U().plane(comp, level, i1);
    coef.resize(2 * np);
    const ThermoModel& eos = base.eos();
    for (size_t p = 0; p < np; ++p) {
      double q = u[0][p], h1 = u[4][p], h2 = u[5][p], h3 = u[6][p], sv = u[7][p];
      double pe = q - 0.5 * (h1 * h1 + h2 * h2 + h3 * h3) + eos.p_stiff;
      require_domain(pe > 0.0, "marching base state left the EOS domain");
      coef[p] = 1.0 / (eos.gamma * pe);
      coef[np + p] = std::pow(pe * std::exp(-sv / eos.entropy_scale), 1.0 / eos.gamma);
    }
    lp = base.lift().eval(level, i1, lift_scratch, false);
    // J-entry derivatives
    dj.resize(8 * np);
    double x1 = g.x1(i1);
    double cv = chi(x1), cd = chi_deriv(x1);
    const BoundaryField& d2phi = base.lift().boundary_d2();
    const BoundaryField& d3phi = base.lift().boundary_d3();
    std::vector<double> tmp(np);
    auto put = [&](int slot, const double* src, double w) {
      double* dst = dj.data() + size_t(slot) * np;
      for (size_t p = 0; p < np; ++p) dst[p] = w * src[p];
    };
    // a = 0: chi * Dt(D2 phi), chi * Dt(D3 phi)
    bdry_dt_plane(d2phi, 0, level, tmp.data());
    put(0, tmp.data(), cv);
    bdry_dt_plane(d3phi, 0, level, tmp.data());
    put(4, tmp.data(), cv);
    // a = 1: chi' * D2 phi, chi' * D3 phi
    put(1, d2phi.level_data(0, level), cd);
    put(5, d3phi.level_data(0, level), cd);
    // a = 2,3: chi * D_a D_i phi
    plane_d2(d2phi.level_data(0, level), g.n2, g.n3, g.h2(), tmp.data());
    put(2, tmp.data(), cv);
    plane_d3(d2phi.level_data(0, level), g.n2, g.n3, g.h3(), tmp.data());
    put(3, tmp.data(), cv);
    plane_d2(d3phi.level_data(0, level), g.n2, g.n3, g.h2(), tmp.data());
    put(6, tmp.data(), cv);
    plane_d3(d3phi.level_data(0, level), g.n2, g.n3, g.h3(), tmp.data());
    put(7, tmp.data(), cv);

    if (need_coupling) {
      du.resize(4 * 8 * np);
      for (int a = 0; a < 4; ++a)
        for (int comp = 0; comp < 8; ++comp)
          slab_deriv_plane(base.U(), a, comp, level, i1,
                           du.data() + (size_t(a) * 8 + size_t(comp)) * np);
    }
  }

  const double* dP(int a, int which23) const {  // which23: 0 -> P2, 1 -> P3
    return dj.data() + size_t(a + 4 * which23) * np;
  }
  const double* c() const { return coef.data(); }
  const double* rho() const { return coef.data() + np; }
};

struct TraceCoefs {
  std::vector<double> buf;
  size_t np;
  double *xi2, *xi3, *dvN, *dq, *bv2, *bv3;
  TraceCoefs(const BasicState& base, int level) {
    const SlabGrid& g = base.grid();
    np = g.points_plane();
    buf.resize(6 * np);
    xi2 = buf.data();
    xi3 = buf.data() + np;
    dvN = buf.data() + 2 * np;
    dq = buf.data() + 3 * np;
    bv2 = buf.data() + 4 * np;
    bv3 = buf.data() + 5 * np;
    const BoundaryField& phi = base.lift().boundary();
    plane_d2(phi.level_data(0, level), g.n2, g.n3, g.h2(), xi2);
    plane_d3(phi.level_data(0, level), g.n2, g.n3, g.h3(), xi3);
    std::vector<double> dv1(np), dv2(np), dv3(np);
    slab_deriv_plane(base.U(), 1, kV1, level, 0, dv1.data());
    slab_deriv_plane(base.U(), 1, kV2, level, 0, dv2.data());
    slab_deriv_plane(base.U(), 1, kV3, level, 0, dv3.data());
    slab_deriv_plane(base.U(), 1, kQ, level, 0, dq);
    const double* v2 = base.U().plane(kV2, level, 0);
    const double* v3 = base.U().plane(kV3, level, 0);
    for (size_t p = 0; p < np; ++p) {
      dvN[p] = dv1[p] - dv2[p] * xi2[p] - dv3[p] * xi3[p];
      bv2[p] = v2[p];
      bv3[p] = v3[p];
    }
  }
};

// trace of the pressure component from the capillary boundary condition
void imposed_w1_trace(const BasicState& base, int level, const double* psi, double* out,
                      std::vector<double>& scratch) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  scratch.resize(7 * np);
  double* z2 = scratch.data();
  double* z3 = scratch.data() + np;
  double* f2 = scratch.data() + 2 * np;
  double* f3 = scratch.data() + 3 * np;
  double* dv = scratch.data() + 4 * np;
  double* xi2 = scratch.data() + 5 * np;
  double* xi3 = scratch.data() + 6 * np;
  const BoundaryField& phi = base.lift().boundary();
  plane_d2(phi.level_data(0, level), g.n2, g.n3, g.h2(), xi2);
  plane_d3(phi.level_data(0, level), g.n2, g.n3, g.h3(), xi3);
  plane_d2(psi, g.n2, g.n3, g.h2(), z2);
  plane_d3(psi, g.n2, g.n3, g.h3(), z3);
  dfrak_planes(np, xi2, xi3, z2, z3, f2, f3);
  plane_d2(f2, g.n2, g.n3, g.h2(), out);
  plane_d3(f3, g.n2, g.n3, g.h3(), dv);
  std::vector<double> dq(np);
  slab_deriv_plane(base.U(), 1, kQ, level, 0, dq.data());
  double s = base.surface_tension();
  for (size_t p = 0; p < np; ++p) out[p] = -dq[p] * psi[p] + s * (out[p] + dv[p]);
}

// spectral solve of (1 + w (d2^4 + d3^4)) psi = rhs on the periodic plane
void biharmonic_solve(const SlabGrid& g, double w, double* psi,
                      std::vector<std::complex<double>>& hat) {
  size_t np = g.points_plane();
  hat.resize(np);
  for (size_t p = 0; p < np; ++p) hat[p] = psi[p];
  fft2_forward(hat.data(), g.n2, g.n3);
  double two_pi = 6.283185307179586;
  for (int m2 = 0; m2 < g.n2; ++m2)
    for (int m3 = 0; m3 < g.n3; ++m3) {
      double k2 = two_pi * fft_mode(m2, g.n2) / g.tangential_extent;
      double k3 = two_pi * fft_mode(m3, g.n3) / g.tangential_extent;
      double s2 = 2.0 - 2.0 * std::cos(k2 * g.h2());
      double s3 = 2.0 - 2.0 * std::cos(k3 * g.h3());
      double h2sq = g.h2() * g.h2(), h3sq = g.h3() * g.h3();
      double sym = (s2 * s2) / (h2sq * h2sq) + (s3 * s3) / (h3sq * h3sq);
      hat[size_t(m2) * size_t(g.n3) + size_t(m3)] /= (1.0 + w * sym);
    }
  fft2_inverse(hat.data(), g.n2, g.n3);
  for (size_t p = 0; p < np; ++p) psi[p] = hat[p].real();
}

// discrete fourth-difference boundary operator (explicit mode)
void biharmonic_apply(const SlabGrid& g, const double* psi, double* out) {
  size_t np = g.points_plane();
  std::vector<double> t1(np), t2(np);
  plane_d2_second(psi, g.n2, g.n3, g.h2(), t1.data());
  plane_d2_second(t1.data(), g.n2, g.n3, g.h2(), out);
  plane_d3_second(psi, g.n2, g.n3, g.h3(), t1.data());
  plane_d3_second(t1.data(), g.n2, g.n3, g.h3(), t2.data());
  for (size_t p = 0; p < np; ++p) out[p] += t2[p];
}

struct MarchWorkspace {
  std::vector<double> dw;      // 3*8 derivative planes of the snapshot
  std::vector<double> v;       // 8 planes J W
  std::vector<double> b;       // 8 planes assembly buffer
  std::vector<double> n;       // 8 planes accumulated flux
  std::vector<double> scratch;
};

// time derivative of the marching state at one level
void stage_rhs(const BasicState& base, const SlabField& fsrc, int level, double eps,
               bool explicit_eps, const SpatialFieldLike& W, const std::vector<double>& psi,
               SpatialFieldLike& dW, std::vector<double>& dpsi, MarchWorkspace& ws) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  const auto& k = kern::ops();
  bool const_base = base.constant_coefficients();

  ws.dw.resize(3 * 8 * np);
  ws.v.resize(8 * np);
  ws.b.resize(8 * np);
  ws.n.resize(8 * np);

  // boundary rate first (needs the untouched W2 trace)
  {
    TraceCoefs tc(base, level);
    dpsi.resize(np);
    std::vector<double> z2(np), z3(np);
    plane_d2(psi.data(), g.n2, g.n3, g.h2(), z2.data());
    plane_d3(psi.data(), g.n2, g.n3, g.h3(), z3.data());
    const double* w2 = W.plane(kV1, 0);
    for (size_t p = 0; p < np; ++p)
      dpsi[p] = w2[p] + tc.dvN[p] * psi[p] - tc.bv2[p] * z2[p] - tc.bv3[p] * z3[p];
    if (explicit_eps && eps > 0.0) {
      std::vector<double> bi(np);
      biharmonic_apply(g, psi.data(), bi.data());
      for (size_t p = 0; p < np; ++p) dpsi[p] -= eps * bi[p];
    }
  }

  for (int i = 0; i < g.n1; ++i) {
    BaseSlice bs(base, level, i, !const_base);
    double* dwp[3][8];
    for (int a = 0; a < 3; ++a)
      for (int comp = 0; comp < 8; ++comp) {
        double* dst = ws.dw.data() + (size_t(a) * 8 + size_t(comp)) * np;
        dwp[a][comp] = dst;
        if (a == 0)
          snap_d1(W, comp, i, dst);
        else if (a == 1)
          plane_d2(W.plane(comp, i), g.n2, g.n3, g.h2(), dst);
        else
          plane_d3(W.plane(comp, i), g.n2, g.n3, g.h3(), dst);
      }

    // V = J W
    double* vp[8];
    for (int comp = 0; comp < 8; ++comp) {
      vp[comp] = ws.v.data() + size_t(comp) * np;
      const double* src = W.plane(comp, i);
      for (size_t p = 0; p < np; ++p) vp[comp][p] = src[p];
    }
    k.wacc(np, 1.0, bs.lp.d[2], W.plane(kV2, i), vp[kV1]);
    k.wacc(np, 1.0, bs.lp.d[3], W.plane(kV3, i), vp[kV1]);

    // accumulated flux N (in the physical variables)
    double* nb[8];
    double* bb[8];
    for (int comp = 0; comp < 8; ++comp) {
      nb[comp] = ws.n.data() + size_t(comp) * np;
      bb[comp] = ws.b.data() + size_t(comp) * np;
      for (size_t p = 0; p < np; ++p) nb[comp][p] = 0.0;
    }

    auto jmul_into_b = [&](double* const dwcomp[8], int a /*0:d1 1:d2 2:d3, -1: dtJ only*/) {
      for (int comp = 0; comp < 8; ++comp) {
        if (dwcomp)
          for (size_t p = 0; p < np; ++p) bb[comp][p] = dwcomp[comp][p];
        else
          for (size_t p = 0; p < np; ++p) bb[comp][p] = 0.0;
      }
      if (dwcomp) {
        k.wacc(np, 1.0, bs.lp.d[2], dwcomp[kV2], bb[kV1]);
        k.wacc(np, 1.0, bs.lp.d[3], dwcomp[kV3], bb[kV1]);
      }
      int da = (a < 0) ? 0 : (a == 0 ? 1 : (a == 1 ? 2 : 3));
      k.wacc(np, 1.0, bs.dP(da, 0), W.plane(kV2, i), bb[kV1]);
      k.wacc(np, 1.0, bs.dP(da, 1), W.plane(kV3, i), bb[kV1]);
    };

    const double* bbc[8];
    for (int comp = 0; comp < 8; ++comp) bbc[comp] = bb[comp];

    // straightened normal flux applied to (J d1 W + d1J W)
    jmul_into_b(dwp[0], 0);
    {
      // A1~ action: (A1 - Pt A0 - P2 A2 - P3 A3) / P1
      std::vector<double>& sc = ws.scratch;
      sc.resize(4 * 8 * np + np);
      double* t1[8];
      double* t0[8];
      double* t2[8];
      double* t3[8];
      double* invp1 = sc.data() + 4 * 8 * np;
      for (int comp = 0; comp < 8; ++comp) {
        t1[comp] = sc.data() + size_t(comp) * np;
        t0[comp] = sc.data() + (8 + size_t(comp)) * np;
        t2[comp] = sc.data() + (16 + size_t(comp)) * np;
        t3[comp] = sc.data() + (24 + size_t(comp)) * np;
      }
      for (size_t p = 0; p < np; ++p) invp1[p] = 1.0 / bs.lp.d[1][p];
      k.matvec_ai(np, 1, bs.c(), bs.rho(), bs.u[1], bs.u[4], bs.u[4], bs.u[5], bs.u[6], bbc, t1,
                  false);
      k.matvec_a0(np, bs.c(), bs.rho(), bs.u[4], bs.u[5], bs.u[6], bbc, t0, false);
      k.matvec_ai(np, 2, bs.c(), bs.rho(), bs.u[2], bs.u[5], bs.u[4], bs.u[5], bs.u[6], bbc, t2,
                  false);
      k.matvec_ai(np, 3, bs.c(), bs.rho(), bs.u[3], bs.u[6], bs.u[4], bs.u[5], bs.u[6], bbc, t3,
                  false);
      for (int comp = 0; comp < 8; ++comp) {
        k.wacc(np, -1.0, bs.lp.d[0], t0[comp], t1[comp]);
        k.wacc(np, -1.0, bs.lp.d[2], t2[comp], t1[comp]);
        k.wacc(np, -1.0, bs.lp.d[3], t3[comp], t1[comp]);
        k.wmul(np, invp1, t1[comp]);
        k.axpy(np, 1.0, t1[comp], nb[comp]);
      }
    }

    // tangential fluxes
    jmul_into_b(dwp[1], 1);
    k.matvec_ai(np, 2, bs.c(), bs.rho(), bs.u[2], bs.u[5], bs.u[4], bs.u[5], bs.u[6], bbc, nb,
                true);
    jmul_into_b(dwp[2], 2);
    k.matvec_ai(np, 3, bs.c(), bs.rho(), bs.u[3], bs.u[6], bs.u[4], bs.u[5], bs.u[6], bbc, nb,
                true);
    // temporal coefficient matrix hitting the J time derivative
    jmul_into_b(nullptr, -1);
    k.matvec_a0(np, bs.c(), bs.rho(), bs.u[4], bs.u[5], bs.u[6], bbc, nb, true);

    // zeroth-order coupling C (J W)
    if (!const_base) {
      for (size_t p = 0; p < np; ++p) {
        Vec8 uv, V;
        Vec8 du[4];
        for (int comp = 0; comp < 8; ++comp) {
          uv[size_t(comp)] = bs.u[comp][p];
          V[size_t(comp)] = vp[comp][p];
          for (int a = 0; a < 4; ++a)
            du[a][size_t(comp)] = bs.du[(size_t(a) * 8 + size_t(comp)) * np + p];
        }
        std::array<double, 4> dphi = {bs.lp.d[0][p], bs.lp.d[1][p], bs.lp.d[2][p], bs.lp.d[3][p]};
        Vec8 cc = state_coupling_point(base.eos(), PrimaryState::from_vec(uv), dphi, du, V);
        for (int comp = 0; comp < 8; ++comp) nb[comp][p] += cc[size_t(comp)];
      }
    }
    // RHS = f - J^T N (+ eps relaxation), then dW = J^{-1} A0^{-1} J^{-T} RHS
    double* r[8];
    for (int comp = 0; comp < 8; ++comp) {
      r[comp] = bb[comp];  // reuse the b buffer
      const double* fp = fsrc.plane(comp, level, i);
      for (size_t p = 0; p < np; ++p) r[comp][p] = fp[p] - nb[comp][p];
    }
    // f is stored in the W-form already; apply J^T only to the flux part
    k.wacc(np, -1.0, bs.lp.d[2], nb[kV1], r[kV2]);
    k.wacc(np, -1.0, bs.lp.d[3], nb[kV1], r[kV3]);
    if (eps > 0.0) {
      std::vector<double> d1w2(np);
      snap_d1(W, kV1, i, d1w2.data());
      k.axpy(np, eps, d1w2.data(), r[kV1]);
    }
    // J^{-T}
    k.wacc(np, -1.0, bs.lp.d[2], r[kV1], r[kV2]);
    k.wacc(np, -1.0, bs.lp.d[3], r[kV1], r[kV3]);
    const double* rc[8];
    double* dst[8];
    for (int comp = 0; comp < 8; ++comp) {
      rc[comp] = r[comp];
      dst[comp] = dW.plane(comp, i);
    }
    k.a0inv(np, bs.c(), bs.rho(), bs.u[4], bs.u[5], bs.u[6], rc, dst);
    // J^{-1}
    k.wacc(np, -1.0, bs.lp.d[2], dst[kV2], dst[kV1]);
    k.wacc(np, -1.0, bs.lp.d[3], dst[kV3], dst[kV1]);
  }
}

// cumulative trapezoid integral rows from per-level squared sums
std::vector<double> cumtrap(const std::vector<double>& a, double dt) {
  std::vector<double> out(a.size(), 0.0);
  double run = 0.0;
  for (size_t l = 0; l < a.size(); ++l) {
    run += a[l];
    out[l] = dt * (run - 0.5 * (a[0] + a[l]));
    if (l == 0) out[l] = 0.0;
  }
  return out;
}

// per-level squared L2 of a weighted derivative of W
std::vector<double> level_sums_deriv(const SlabField& W, int axis, bool conormal_weight,
                                     const std::vector<int>& comps) {
  const SlabGrid& g = W.grid();
  size_t np = g.points_plane();
  const auto& k = kern::ops();
  std::vector<double> plane(np), out(size_t(g.levels()), 0.0);
  double cell = g.h1() * g.h2() * g.h3();
  for (int l = 0; l < g.levels(); ++l) {
    double acc = 0.0;
    for (int comp : comps)
      for (int i = 0; i < g.n1; ++i) {
        double wtrap = (i == 0 || i == g.n1 - 1) ? 0.5 : 1.0;
        if (axis < 0) {
          acc += wtrap * k.sumsq(np, W.plane(comp, l, i));
        } else {
          slab_deriv_plane(W, axis, comp, l, i, plane.data());
          double wgt = conormal_weight ? sigma(g.x1(i)) : 1.0;
          acc += wtrap * wgt * wgt * k.sumsq(np, plane.data());
        }
      }
    out[size_t(l)] = acc * cell;
  }
  return out;
}

}  // namespace

SlabField lift_boundary_source(const BasicState& base, const BoundaryField& g) {
  require(g.ncomp() == 2, "boundary source must have two components");
  const SlabGrid& gr = base.grid();
  require(gr.same_shape(g.grid()), "boundary source grid mismatch");
  size_t np = gr.points_plane();
  for (int l = 0; l < gr.levels(); ++l) {
    if (gr.time(l) >= 0.0) break;
    for (int comp = 0; comp < 2; ++comp)
      for (size_t p = 0; p < np; ++p)
        require_domain(g.level_data(comp, l)[p] == 0.0,
                       "boundary source must vanish in the past");
  }
  SlabField out(gr, 8);
  std::vector<double> xi2(np), xi3(np);
  const BoundaryField& phi = base.lift().boundary();
  for (int l = 0; l < gr.levels(); ++l) {
    plane_d2(phi.level_data(0, l), gr.n2, gr.n3, gr.h2(), xi2.data());
    plane_d3(phi.level_data(0, l), gr.n2, gr.n3, gr.h3(), xi3.data());
    const double* g1 = g.level_data(0, l);
    const double* g2 = g.level_data(1, l);
    for (int i = 0; i < gr.n1; ++i) {
      double cv = chi(gr.x1(i));
      double* q = out.plane(kQ, l, i);
      double* v1 = out.plane(kV1, l, i);
      double* v2 = out.plane(kV2, l, i);
      double* v3 = out.plane(kV3, l, i);
      for (size_t p = 0; p < np; ++p) {
        double n2 = 1.0 + xi2[p] * xi2[p] + xi3[p] * xi3[p];
        double w = -g1[p] / n2;
        q[p] = cv * g2[p];
        v1[p] = cv * w;
        v2[p] = cv * (-w * xi2[p]);
        v3[p] = cv * (-w * xi3[p]);
      }
    }
  }
  return out;
}

double max_stable_dt(const BasicState& base, const SchemeParams& sp) {
  const SlabGrid& g = base.grid();
  double lam[3] = {0.0, 0.0, 0.0};
  int sl = std::max(1, g.levels() / 4), s1 = std::max(1, g.n1 / 5),
      s2 = std::max(1, g.n2 / 4), s3 = std::max(1, g.n3 / 4);
  for (int l = 0; l < g.levels(); l += sl)
    for (int i = 0; i < g.n1; i += s1)
      for (int j = 0; j < g.n2; j += s2)
        for (int kk = 0; kk < g.n3; kk += s3) {
          PrimaryState u;
          u.q = base.U().at(kQ, l, i, j, kk);
          u.v = {base.U().at(kV1, l, i, j, kk), base.U().at(kV2, l, i, j, kk),
                 base.U().at(kV3, l, i, j, kk)};
          u.H = {base.U().at(kH1, l, i, j, kk), base.U().at(kH2, l, i, j, kk),
                 base.U().at(kH3, l, i, j, kk)};
          u.S = base.U().at(kS, l, i, j, kk);
          Mat8 a0 = assemble_A0(base.eos(), u);
          Mat8 a1t = assemble_A1_tilde(base.eos(), u, base.lift().dphi_at(l, i, j, kk));
          lam[0] = std::max(lam[0], generalized_spectral_radius(a0, a1t));
          lam[1] = std::max(lam[1], generalized_spectral_radius(a0, assemble_Ai(base.eos(), u, 2)));
          lam[2] = std::max(lam[2], generalized_spectral_radius(a0, assemble_Ai(base.eos(), u, 3)));
        }
  double rate = lam[0] / g.h1() + lam[1] / g.h2() + lam[2] / g.h3();
  return sp.cfl / std::max(rate, 1e-12);
}

LinearSolveReport solve_regularized(const BasicState& base, const SlabField& f,
                                    const BoundaryField& g, double eps, const SchemeParams& sp) {
  require(eps >= 0.0, "regularization parameter must be nonnegative");
  const SlabGrid& gr = base.grid();
  require(f.ncomp() == 8 && gr.same_shape(f.grid()), "interior source shape");
  require(gr.same_shape(g.grid()) && g.ncomp() == 2, "boundary source shape");
  double dt_max = max_stable_dt(base, sp);
  if (gr.dt() > dt_max)
    throw DomainError("time step violates the stability bound; need dt <= " +
                      std::to_string(dt_max));
  if (eps > 0.0 && !sp.implicit_eps) {
    double h2 = gr.h2(), h3 = gr.h3();
    double sym = 16.0 / (h2 * h2 * h2 * h2) + 16.0 / (h3 * h3 * h3 * h3);
    double need = 2.0 * sp.eps_cfl / (eps * sym);
    if (gr.dt() > need)
      throw DomainError("explicit boundary relaxation needs dt <= " + std::to_string(need));
  }

  size_t np = gr.points_plane();
  // homogenize the boundary source
  bool has_g = g.max_abs() > 0.0;
  SlabField vnat = has_g ? lift_boundary_source(base, g) : SlabField(gr, 8);
  SlabField ftilde = f;
  double vnat_ratio = 0.0;
  if (has_g) {
    SlabField lif = apply_Le_prime(base, vnat);
    add_scaled(ftilde, -1.0, lif);
    double gn = l2_boundary(g);
    vnat_ratio = gn > 0 ? hstar_norm(vnat, 1) / gn : 0.0;
  }
  // source in the noncharacteristic variables: J^T ftilde
  {
    std::vector<double> ls;
    for (int l = 0; l < gr.levels(); ++l)
      for (int i = 0; i < gr.n1; ++i) {
        Lift::Planes lp = base.lift().eval(l, i, ls, false);
        double* f1 = ftilde.plane(kV1, l, i);
        double* f2 = ftilde.plane(kV2, l, i);
        double* f3 = ftilde.plane(kV3, l, i);
        for (size_t p = 0; p < np; ++p) {
          f2[p] += lp.d[2][p] * f1[p];
          f3[p] += lp.d[3][p] * f1[p];
        }
      }
  }

  LinearSolveReport rep;
  rep.eps = eps;
  rep.W = SlabField(gr, 8);
  rep.psi = BoundaryField(gr, 1);

  SpatialFieldLike cur, stage, acc;
  cur.init(gr);
  stage.init(gr);
  acc.init(gr);
  std::vector<double> psi(np, 0.0), psi_stage(np), dpsi1, dpsi2, trace_scratch;
  std::vector<std::complex<double>> hat;
  MarchWorkspace ws;
  double dt = gr.dt();

  for (int l = 0; l + 1 < gr.levels(); ++l) {
    if (sp.implicit_eps && eps > 0.0) biharmonic_solve(gr, 0.5 * eps * dt, psi.data(), hat);

    stage_rhs(base, ftilde, l, eps, !sp.implicit_eps, cur, psi, acc, dpsi1, ws);
    for (size_t i = 0; i < stage.data.size(); ++i) stage.data[i] = cur.data[i] + dt * acc.data[i];
    psi_stage = psi;
    for (size_t p = 0; p < np; ++p) psi_stage[p] += dt * dpsi1[p];
    {
      std::vector<double> w1(np);
      imposed_w1_trace(base, l + 1, psi_stage.data(), w1.data(), trace_scratch);
      double* tr = stage.plane(kQ, 0);
      for (size_t p = 0; p < np; ++p) tr[p] = w1[p];
    }

    stage_rhs(base, ftilde, l + 1, eps, !sp.implicit_eps, stage, psi_stage, acc, dpsi2, ws);
    for (size_t i = 0; i < cur.data.size(); ++i)
      cur.data[i] = 0.5 * (cur.data[i] + stage.data[i] + dt * acc.data[i]);
    for (size_t p = 0; p < np; ++p) psi[p] = 0.5 * (psi[p] + psi_stage[p] + dt * dpsi2[p]);

    if (sp.implicit_eps && eps > 0.0) biharmonic_solve(gr, 0.5 * eps * dt, psi.data(), hat);
    {
      std::vector<double> w1(np);
      imposed_w1_trace(base, l + 1, psi.data(), w1.data(), trace_scratch);
      double* tr = cur.plane(kQ, 0);
      for (size_t p = 0; p < np; ++p) tr[p] = w1[p];
    }

    // detect blow-up early
    double mx = 0.0;
    for (double v : cur.data) mx = std::max(mx, std::abs(v));
    if (!std::isfinite(mx) || mx > 1e12) {
      rep.stable = false;
      break;
    }
    // record level l+1
    for (int comp = 0; comp < 8; ++comp)
      for (int i = 0; i < gr.n1; ++i) {
        const double* src = cur.plane(comp, i);
        double* dst = rep.W.plane(comp, l + 1, i);
        for (size_t p = 0; p < np; ++p) dst[p] = src[p];
      }
    double* pd = rep.psi.level_data(0, l + 1);
    for (size_t p = 0; p < np; ++p) pd[p] = psi[p];
  }

  // good-unknown variables
  rep.Vdot = from_W(base, rep.W);
  if (has_g) add_scaled(rep.Vdot, 1.0, vnat);
  rep.vnat_ratio = vnat_ratio;

  // energy trace
  std::vector<int> all = {0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<int> nc = {kQ, kV1};
  std::vector<std::vector<double>> parts;
  parts.push_back(level_sums_deriv(rep.W, -1, false, all));
  parts.push_back(level_sums_deriv(rep.W, 0, false, all));
  parts.push_back(level_sums_deriv(rep.W, 1, true, all));
  parts.push_back(level_sums_deriv(rep.W, 2, false, all));
  parts.push_back(level_sums_deriv(rep.W, 3, false, all));
  std::vector<double> d1nc = level_sums_deriv(rep.W, 1, false, nc);

  std::vector<double> trace_sq(size_t(gr.levels()), 0.0), psi_sq(size_t(gr.levels()), 0.0);
  {
    const auto& k = kern::ops();
    BoundaryField psi3(gr, 3);  // (psi, d2 psi, d3 psi)
    for (int l = 0; l < gr.levels(); ++l) {
      const double* p0 = rep.psi.level_data(0, l);
      for (size_t p = 0; p < np; ++p) psi3.level_data(0, l)[p] = p0[p];
      plane_d2(p0, gr.n2, gr.n3, gr.h2(), psi3.level_data(1, l));
      plane_d3(p0, gr.n2, gr.n3, gr.h3(), psi3.level_data(2, l));
      trace_sq[size_t(l)] =
          (k.sumsq(np, rep.W.plane(kQ, l, 0)) + k.sumsq(np, rep.W.plane(kV1, l, 0))) * gr.h2() *
          gr.h3();
    }
    std::vector<double> plane(np);
    for (int l = 0; l < gr.levels(); ++l) {
      double acc2 = 0.0;
      for (int comp = 0; comp < 3; ++comp) {
        acc2 += k.sumsq(np, psi3.level_data(comp, l));
        bdry_dt_plane(psi3, comp, l, plane.data());
        acc2 += k.sumsq(np, plane.data());
        plane_d2(psi3.level_data(comp, l), gr.n2, gr.n3, gr.h2(), plane.data());
        acc2 += k.sumsq(np, plane.data());
        plane_d3(psi3.level_data(comp, l), gr.n2, gr.n3, gr.h3(), plane.data());
        acc2 += k.sumsq(np, plane.data());
      }
      psi_sq[size_t(l)] = acc2 * gr.h2() * gr.h3();
    }
  }

  std::vector<std::vector<double>> cums;
  for (auto& a : parts) cums.push_back(cumtrap(a, gr.dt()));
  std::vector<double> cd1 = cumtrap(d1nc, gr.dt());
  std::vector<double> ctr = cumtrap(trace_sq, gr.dt());
  std::vector<double> cps = cumtrap(psi_sq, gr.dt());
  rep.energy.resize(size_t(gr.levels()));
  for (int l = 0; l < gr.levels(); ++l) {
    auto& row = rep.energy[size_t(l)];
    row.t = gr.time(l);
    double h1 = 0.0;
    for (auto& c : cums) h1 += c[size_t(l)];
    row.w_h1 = std::sqrt(h1);
    row.d1wnc = std::sqrt(cd1[size_t(l)]);
    row.wnc_trace = std::sqrt(ctr[size_t(l)]);
    row.psi_h1 = std::sqrt(cps[size_t(l)]);
  }
  rep.f_h1 = hstar_norm(ftilde, 1);
  const auto& last = rep.energy.back();
  double lhs = last.w_h1 + last.d1wnc + last.wnc_trace + last.psi_h1;
  rep.est_ratio = rep.f_h1 > 0.0 ? lhs / rep.f_h1 : 0.0;
  return rep;
}

LinearSolveReport solve_linearized(const BasicState& base, const SlabField& f,
                                   const BoundaryField& g, const SchemeParams& sp) {
  return solve_regularized(base, f, g, 0.0, sp);
}

NormTable energy_report(const BasicState& base, const LinearSolveReport& rep, const SlabField& f,
                        const BoundaryField& g, int m, int cap) {
  NormTable t;
  t.m = m;
  t.w_m = hstar_norm(rep.W, std::min(m, cap));
  BoundaryField pair(base.grid(), 3);
  const SlabGrid& gr = base.grid();
  for (int l = 0; l < gr.levels(); ++l) {
    const double* p0 = rep.psi.level_data(0, l);
    for (size_t p = 0; p < gr.points_plane(); ++p) pair.level_data(0, l)[p] = p0[p];
    plane_d2(p0, gr.n2, gr.n3, gr.h2(), pair.level_data(1, l));
    plane_d3(p0, gr.n2, gr.n3, gr.h3(), pair.level_data(2, l));
  }
  t.psi_m = boundary_sobolev_norm(pair, std::min(m, cap));
  t.f_m = hstar_norm(f, std::min(m, cap));
  t.g_m1 = boundary_sobolev_norm(g, std::min(m + 1, cap + 1));
  // basic-state perturbation norm at the clamped order
  SlabField pert = base.U();
  Vec8 mean{};
  {
    // subtract the far-field constant (sampled at the top corner)
    for (int comp = 0; comp < 8; ++comp)
      mean[size_t(comp)] = base.U().at(comp, 0, gr.n1 - 1, 0, 0);
    for (int comp = 0; comp < 8; ++comp)
      for (int l = 0; l < gr.levels(); ++l)
        for (int i = 0; i < gr.n1; ++i) {
          double* p = pert.plane(comp, l, i);
          for (size_t q = 0; q < gr.points_plane(); ++q) p[q] -= mean[size_t(comp)];
        }
  }
  t.base_m4 = hstar_norm(pert, std::min(m + 4, cap + 1));
  t.f_low = hstar_norm(f, std::min(2, cap));
  t.g_low = boundary_sobolev_norm(g, std::min(3, cap + 1));
  double lhs = t.w_m + t.psi_m;
  double rhs = t.f_m + t.g_m1 + t.base_m4 * (t.f_low + t.g_low);
  t.tame_constant = rhs > 0.0 ? lhs / rhs : 0.0;
  return t;
}

double adjoint_identity_defect(const BasicState& base, const SlabField& W, const SlabField& Wstar,
                               double eps) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  const ThermoModel& eos = base.eos();

  // entry planes of the conjugated matrices on one (level, i1) slice,
  // row-major 64 planes per matrix
  auto assemble_planes = [&](int which, int l, int i, std::vector<double>& out) {
    out.resize(64 * np);
    std::vector<double> ls;
    Lift::Planes lp = base.lift().eval(l, i, ls, false);
    for (int j = 0; j < g.n2; ++j)
      for (int k2 = 0; k2 < g.n3; ++k2) {
        size_t p = size_t(j) * size_t(g.n3) + size_t(k2);
        PrimaryState u;
        u.q = base.U().at(kQ, l, i, j, k2);
        u.v = {base.U().at(kV1, l, i, j, k2), base.U().at(kV2, l, i, j, k2),
               base.U().at(kV3, l, i, j, k2)};
        u.H = {base.U().at(kH1, l, i, j, k2), base.U().at(kH2, l, i, j, k2),
               base.U().at(kH3, l, i, j, k2)};
        u.S = base.U().at(kS, l, i, j, k2);
        PointCoefs pc = point_coefs(eos, u);
        Mat8 a;
        if (which == 0)
          a = assemble_A0(pc);
        else if (which == 1)
          a = assemble_A1_tilde(pc, {lp.d[0][p], lp.d[1][p], lp.d[2][p], lp.d[3][p]});
        else
          a = assemble_Ai(pc, which);
        Mat8 jm = Mat8::identity();
        jm(kV1, kV2) = lp.d[2][p];
        jm(kV1, kV3) = lp.d[3][p];
        Mat8 b = matmul(transpose(jm), matmul(a, jm));
        for (int e = 0; e < 64; ++e) out[size_t(e) * np + p] = b.a[size_t(e)];
      }
  };

  // zeroth-order matrix planes (state coupling plus J derivatives, conjugated)
  auto assemble_a4_planes = [&](int l, int i, std::vector<double>& out) {
    out.resize(64 * np);
    std::vector<double> ls;
    Lift::Planes lp = base.lift().eval(l, i, ls, false);
    std::vector<double> du(4 * 8 * np);
    for (int a = 0; a < 4; ++a)
      for (int comp = 0; comp < 8; ++comp)
        slab_deriv_plane(base.U(), a, comp, l, i, du.data() + (size_t(a) * 8 + size_t(comp)) * np);
    // J-entry derivative planes
    double cv = chi(g.x1(i)), cd = chi_deriv(g.x1(i));
    const BoundaryField& d2f = base.lift().boundary_d2();
    const BoundaryField& d3f = base.lift().boundary_d3();
    std::vector<double> dj(8 * np), tmp(np);
    auto put = [&](int slot, const double* src, double w) {
      for (size_t p = 0; p < np; ++p) dj[size_t(slot) * np + p] = w * src[p];
    };
    bdry_dt_plane(d2f, 0, l, tmp.data());
    put(0, tmp.data(), cv);
    put(1, d2f.level_data(0, l), cd);
    plane_d2(d2f.level_data(0, l), g.n2, g.n3, g.h2(), tmp.data());
    put(2, tmp.data(), cv);
    plane_d3(d2f.level_data(0, l), g.n2, g.n3, g.h3(), tmp.data());
    put(3, tmp.data(), cv);
    bdry_dt_plane(d3f, 0, l, tmp.data());
    put(4, tmp.data(), cv);
    put(5, d3f.level_data(0, l), cd);
    plane_d2(d3f.level_data(0, l), g.n2, g.n3, g.h2(), tmp.data());
    put(6, tmp.data(), cv);
    plane_d3(d3f.level_data(0, l), g.n2, g.n3, g.h3(), tmp.data());
    put(7, tmp.data(), cv);

    for (int j = 0; j < g.n2; ++j)
      for (int k2 = 0; k2 < g.n3; ++k2) {
        size_t p = size_t(j) * size_t(g.n3) + size_t(k2);
        PrimaryState u;
        u.q = base.U().at(kQ, l, i, j, k2);
        u.v = {base.U().at(kV1, l, i, j, k2), base.U().at(kV2, l, i, j, k2),
               base.U().at(kV3, l, i, j, k2)};
        u.H = {base.U().at(kH1, l, i, j, k2), base.U().at(kH2, l, i, j, k2),
               base.U().at(kH3, l, i, j, k2)};
        u.S = base.U().at(kS, l, i, j, k2);
        PointCoefs pc = point_coefs(eos, u);
        std::array<double, 4> dphi = {lp.d[0][p], lp.d[1][p], lp.d[2][p], lp.d[3][p]};
        Vec8 duv[4];
        for (int a = 0; a < 4; ++a)
          for (int comp = 0; comp < 8; ++comp)
            duv[a][size_t(comp)] = du[(size_t(a) * 8 + size_t(comp)) * np + p];
        Mat8 sum;
        for (int col = 0; col < 8; ++col) {
          Vec8 e{};
          e[size_t(col)] = 1.0;
          Vec8 c = state_coupling_point(eos, u, dphi, duv, e);
          for (int r = 0; r < 8; ++r) sum(r, col) = c[size_t(r)];
        }
        Mat8 mats[4] = {assemble_A0(pc), assemble_A1_tilde(pc, dphi), assemble_Ai(pc, 2),
                        assemble_Ai(pc, 3)};
        for (int a = 0; a < 4; ++a) {
          Mat8 djm;
          djm(kV1, kV2) = dj[size_t(a) * np + p];
          djm(kV1, kV3) = dj[size_t(4 + a) * np + p];
          sum += matmul(mats[a], djm);
        }
        Mat8 jm = Mat8::identity();
        jm(kV1, kV2) = lp.d[2][p];
        jm(kV1, kV3) = lp.d[3][p];
        Mat8 b = matmul(transpose(jm), sum);
        for (int e = 0; e < 64; ++e) out[size_t(e) * np + p] = b.a[size_t(e)];
      }
  };

  auto wtrap = [](int idx, int n) { return (idx == 0 || idx == n - 1) ? 0.5 : 1.0; };
  double cell = g.h1() * g.h2() * g.h3() * g.dt();

  double interior = 0.0;
  double boundary = 0.0;
  std::vector<double> a_here[4], a_t[3], a_n[3], a4;
  std::vector<double> dW(4 * 8 * np), dWs(4 * 8 * np);
  for (int l = 0; l < g.levels(); ++l) {
    for (int i = 0; i < g.n1; ++i) {
      for (int a = 0; a < 4; ++a)
        for (int comp = 0; comp < 8; ++comp) {
          slab_deriv_plane(W, a, comp, l, i, dW.data() + (size_t(a) * 8 + size_t(comp)) * np);
          slab_deriv_plane(Wstar, a, comp, l, i,
                           dWs.data() + (size_t(a) * 8 + size_t(comp)) * np);
        }
      for (int a = 0; a < 4; ++a) assemble_planes(a, l, i, a_here[a]);
      assemble_a4_planes(l, i, a4);
      TimeStencil st = time_stencil(l, g.levels(), g.dt());
      TimeStencil sx = x1_stencil(i, g.n1, g.h1());
      for (int r = 0; r < 3; ++r) {
        assemble_planes(0, l + st.offset[r], i, a_t[r]);
        assemble_planes(1, l, i + sx.offset[r], a_n[r]);
      }

      for (int j = 0; j < g.n2; ++j)
        for (int k2 = 0; k2 < g.n3; ++k2) {
          size_t p = size_t(j) * size_t(g.n3) + size_t(k2);
          Vec8 w, ws, dwv[4], dwsv[4];
          for (int comp = 0; comp < 8; ++comp) {
            w[size_t(comp)] = W.at(comp, l, i, j, k2);
            ws[size_t(comp)] = Wstar.at(comp, l, i, j, k2);
            for (int a = 0; a < 4; ++a) {
              dwv[a][size_t(comp)] = dW[(size_t(a) * 8 + size_t(comp)) * np + p];
              dwsv[a][size_t(comp)] = dWs[(size_t(a) * 8 + size_t(comp)) * np + p];
            }
          }
          size_t pjp = size_t((j + 1) % g.n2) * size_t(g.n3) + size_t(k2);
          size_t pjm = size_t((j + g.n2 - 1) % g.n2) * size_t(g.n3) + size_t(k2);
          size_t pkp = size_t(j) * size_t(g.n3) + size_t((k2 + 1) % g.n3);
          size_t pkm = size_t(j) * size_t(g.n3) + size_t((k2 + g.n3 - 1) % g.n3);
          Mat8 A[4], A4, divA;
          for (int a = 0; a < 4; ++a)
            for (int e = 0; e < 64; ++e) A[a].a[size_t(e)] = a_here[a][size_t(e) * np + p];
          for (int e = 0; e < 64; ++e) {
            A4.a[size_t(e)] = a4[size_t(e) * np + p];
            double d = 0.0;
            for (int r = 0; r < 3; ++r)
              d += st.coeff[r] * a_t[r][size_t(e) * np + p] +
                   sx.coeff[r] * a_n[r][size_t(e) * np + p];
            d += 0.5 / g.h2() * (a_here[2][size_t(e) * np + pjp] - a_here[2][size_t(e) * np + pjm]);
            d += 0.5 / g.h3() * (a_here[3][size_t(e) * np + pkp] - a_here[3][size_t(e) * np + pkm]);
            divA.a[size_t(e)] = d;
          }
          Vec8 LW{}, LsWs{};
          for (int a = 0; a < 4; ++a) {
            Vec8 t1 = matvec(A[a], dwv[a]);
            Vec8 t2 = matvec(A[a], dwsv[a]);
            for (size_t c = 0; c < 8; ++c) {
              LW[c] += t1[c];
              LsWs[c] -= t2[c];
            }
          }
          Vec8 a4w = matvec(A4, w);
          Vec8 a4tws = matvec(transpose(A4), ws);
          Vec8 divws = matvec(divA, ws);
          for (size_t c = 0; c < 8; ++c) {
            LW[c] += a4w[c];
            LsWs[c] += a4tws[c] - divws[c];
          }
          LW[kV1] -= eps * dwv[1][kV1];
          LsWs[kV1] += eps * dwsv[1][kV1];
          double integrand = 0.0;
          for (size_t c = 0; c < 8; ++c) integrand += LW[c] * ws[c] - w[c] * LsWs[c];
          interior += wtrap(l, g.levels()) * wtrap(i, g.n1) * integrand * cell;
          if (i == 0) {
            Vec8 aw = matvec(A[1], w);
            double pair = eps * w[kV1] * ws[kV1];
            for (size_t c = 0; c < 8; ++c) pair -= aw[c] * ws[c];
            boundary += wtrap(l, g.levels()) * pair * g.h2() * g.h3() * g.dt();
          }
        }
    }
  }
  return std::abs(interior - boundary);
}

}  // namespace fbmhd
