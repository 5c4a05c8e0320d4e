#include "fbmhd/linearized.hpp"

#include <cmath>
#include <limits>

#include "fbmhd/hstar.hpp"
#include "fbmhd/stencil.hpp"

namespace fbmhd {

namespace {

// Derivative planes of an 8-component field on one (level, i1) slice.
struct StateSlice {
  size_t np = 0;
  const double* val[8];
  std::vector<double> store;  // [axis][comp] first planes, then D1 Da planes

  StateSlice(const SlabField& f, int level, int i1, bool second) {
    const SlabGrid& g = f.grid();
    np = g.points_plane();
    store.resize((second ? 8 : 4) * 8 * np);
    for (int comp = 0; comp < 8; ++comp) val[comp] = f.plane(comp, level, i1);
    for (int a = 0; a < 4; ++a)
      for (int comp = 0; comp < 8; ++comp)
        slab_deriv_plane(f, a, comp, level, i1, first(a, comp));
    if (second) {
      // D1(Da f) by combining Da planes at the x1 stencil of i1
      TimeStencil s = x1_stencil(i1, g.n1, g.h1());
      std::vector<double> tmp(3 * np);
      for (int a = 0; a < 4; ++a)
        for (int comp = 0; comp < 8; ++comp) {
          for (int r = 0; r < 3; ++r)
            slab_deriv_plane(f, a, comp, level, i1 + s.offset[r], tmp.data() + size_t(r) * np);
          double* dst = d1(a, comp);
          for (size_t p = 0; p < np; ++p)
            dst[p] = s.coeff[0] * tmp[p] + s.coeff[1] * tmp[np + p] + s.coeff[2] * tmp[2 * np + p];
        }
    }
  }

  double* first(int a, int comp) { return store.data() + (size_t(a) * 8 + size_t(comp)) * np; }
  const double* first(int a, int comp) const {
    return store.data() + (size_t(a) * 8 + size_t(comp)) * np;
  }
  double* d1(int a, int comp) { return store.data() + ((4 + size_t(a)) * 8 + size_t(comp)) * np; }
  const double* d1(int a, int comp) const {
    return store.data() + ((4 + size_t(a)) * 8 + size_t(comp)) * np;
  }

  Vec8 value(size_t p) const {
    Vec8 u;
    for (int comp = 0; comp < 8; ++comp) u[size_t(comp)] = val[comp][p];
    return u;
  }
  Vec8 deriv(int a, size_t p) const {
    Vec8 u;
    for (int comp = 0; comp < 8; ++comp) u[size_t(comp)] = first(a, comp)[p];
    return u;
  }
  Vec8 d1deriv(int a, size_t p) const {
    Vec8 u;
    for (int comp = 0; comp < 8; ++comp) u[size_t(comp)] = d1(a, comp)[p];
    return u;
  }
};

inline std::array<double, 4> planes_at(const Lift::Planes& lp, size_t p) {
  return {lp.d[0][p], lp.d[1][p], lp.d[2][p], lp.d[3][p]};
}
inline std::array<double, 4> planes2_at(const Lift::Planes& lp, size_t p) {
  return {lp.d1d[0][p], lp.d1d[1][p], lp.d1d[2][p], lp.d1d[3][p]};
}

inline Vec8 add8(const Vec8& a, const Vec8& b) {
  Vec8 r;
  for (size_t i = 0; i < 8; ++i) r[i] = a[i] + b[i];
  return r;
}
inline Vec8 sub8(const Vec8& a, const Vec8& b) {
  Vec8 r;
  for (size_t i = 0; i < 8; ++i) r[i] = a[i] - b[i];
  return r;
}
inline Vec8 scale8(double s, const Vec8& a) {
  Vec8 r;
  for (size_t i = 0; i < 8; ++i) r[i] = s * a[i];
  return r;
}

// C V = dA0(U;V) DtU + dA1~_state(U;V) D1U + dA2(U;V) D2U + dA3(U;V) D3U
Vec8 zeroth_order_point(const ThermoModel& eos, const PrimaryState& u,
                        const std::array<double, 4>& dphi, const Vec8 du[4], const Vec8& V) {
  Vec8 y = matvec(dA0(eos, u, V), du[0]);
  y = add8(y, matvec(dA1_tilde_state(eos, u, V, dphi), du[1]));
  y = add8(y, matvec(dAi(eos, u, V, 2), du[2]));
  y = add8(y, matvec(dAi(eos, u, V, 3), du[3]));
  return y;
}

Vec8 leprime_point(const ThermoModel& eos, const PrimaryState& u, const PointCoefs& pc,
                   const std::array<double, 4>& dphi, const Vec8 du[4], const Vec8& Vd,
                   const Vec8 dVd[4]) {
  Vec8 y = a0_apply(pc, dVd[0]);
  y = add8(y, a1_tilde_apply(pc, dphi, dVd[1]));
  y = add8(y, ai_apply(pc, 2, dVd[2]));
  y = add8(y, ai_apply(pc, 3, dVd[3]));
  y = add8(y, zeroth_order_point(eos, u, dphi, du, Vd));
  return y;
}

}  // namespace

Vec8 state_coupling_point(const ThermoModel& eos, const PrimaryState& u,
                          const std::array<double, 4>& dphi, const Vec8 du[4], const Vec8& V) {
  return zeroth_order_point(eos, u, dphi, du, V);
}

// ---- BasicState -----------------------------------------------------------

double BasicState::boundary_compat_defect(const SlabField& U, const BoundaryField& phi) {
  const SlabGrid& g = U.grid();
  size_t np = g.points_plane();
  std::vector<double> dtphi(np), d2phi(np), d3phi(np);
  double defect = 0.0;
  for (int l = 0; l < g.levels(); ++l) {
    bdry_dt_plane(phi, 0, l, dtphi.data());
    plane_d2(phi.level_data(0, l), g.n2, g.n3, g.h2(), d2phi.data());
    plane_d3(phi.level_data(0, l), g.n2, g.n3, g.h3(), d3phi.data());
    const double* v1 = U.plane(kV1, l, 0);
    const double* v2 = U.plane(kV2, l, 0);
    const double* v3 = U.plane(kV3, l, 0);
    const double* H1 = U.plane(kH1, l, 0);
    const double* H2 = U.plane(kH2, l, 0);
    const double* H3 = U.plane(kH3, l, 0);
    for (size_t p = 0; p < np; ++p) {
      double kin = dtphi[p] - (v1[p] - v2[p] * d2phi[p] - v3[p] * d3phi[p]);
      double mag = H1[p] - H2[p] * d2phi[p] - H3[p] * d3phi[p];
      defect = std::max(defect, std::max(std::abs(kin), std::abs(mag)));
    }
  }
  return defect;
}

BasicState BasicState::make(const ThermoModel& eos, double surface_tension, SlabField U,
                            BoundaryField phi, double compat_tol) {
  require(U.ncomp() == 8, "basic state needs the 8-component field");
  require(U.grid().same_shape(phi.grid()), "basic state grid mismatch");
  require_domain(surface_tension > 0.0, "surface tension must be positive");
  BasicState b;
  b.eos_ = eos;
  b.s_ = surface_tension;
  b.lift_ = Lift::interface(phi);

  const SlabGrid& g = U.grid();
  double margin = std::numeric_limits<double>::infinity();
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) {
          PrimaryState u;
          u.q = U.at(kQ, l, i, j, k);
          u.v = {U.at(kV1, l, i, j, k), U.at(kV2, l, i, j, k), U.at(kV3, l, i, j, k)};
          u.H = {U.at(kH1, l, i, j, k), U.at(kH2, l, i, j, k), U.at(kH3, l, i, j, k)};
          u.S = U.at(kS, l, i, j, k);
          margin = std::min(margin, eos.hyperbolicity_margin(u));
        }
  require_domain(margin > 0.0, "basic state violates the hyperbolicity window");
  b.margin_ = margin;
  b.bas1b_ = boundary_compat_defect(U, phi);
  if (compat_tol >= 0.0) {
    double h = std::max(g.h2(), std::max(g.h3(), g.h1()));
    double tol = compat_tol * (h * h + g.dt() * g.dt());
    require_domain(b.bas1b_ <= tol, "basic state fails boundary compatibility");
  }
  b.bound_ = sup_state_bound(U);
  double dmax = 0.0;
  for (int axis = 0; axis < 4; ++axis) dmax = std::max(dmax, max_abs(slab_deriv(U, axis)));
  b.const_coef_ = (dmax == 0.0) && (phi.max_abs() == 0.0);
  b.U_ = std::move(U);
  return b;
}

// ---- interior operators -----------------------------------------------------

SlabField apply_Le_prime(const BasicState& base, const SlabField& Vdot) {
  require(Vdot.ncomp() == 8 && Vdot.grid().same_shape(base.grid()), "apply_Le_prime shape");
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  SlabField out(g, 8);
  std::vector<double> lift_scratch;
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i) {
      StateSlice us(base.U(), l, i, false);
      StateSlice vs(Vdot, l, i, false);
      Lift::Planes lp = base.lift().eval(l, i, lift_scratch, false);
      for (size_t p = 0; p < np; ++p) {
        PrimaryState u = PrimaryState::from_vec(us.value(p));
        PointCoefs pc = point_coefs(base.eos(), u);
        Vec8 du[4] = {us.deriv(0, p), us.deriv(1, p), us.deriv(2, p), us.deriv(3, p)};
        Vec8 dv[4] = {vs.deriv(0, p), vs.deriv(1, p), vs.deriv(2, p), vs.deriv(3, p)};
        Vec8 y = leprime_point(base.eos(), u, pc, planes_at(lp, p), du, vs.value(p), dv);
        for (int comp = 0; comp < 8; ++comp) out.plane(comp, l, i)[p] = y[size_t(comp)];
      }
    }
  return out;
}

SlabField apply_L_prime(const BasicState& base, const SlabField& V, const BoundaryField& psi) {
  require(V.ncomp() == 8 && V.grid().same_shape(base.grid()), "apply_L_prime shape");
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  Lift pert = Lift::perturbation(psi);
  SlabField out(g, 8);
  std::vector<double> ls1, ls2;
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i) {
      StateSlice us(base.U(), l, i, false);
      StateSlice vs(V, l, i, false);
      Lift::Planes lp = base.lift().eval(l, i, ls1, false);
      Lift::Planes pp = pert.eval(l, i, ls2, false);
      for (size_t p = 0; p < np; ++p) {
        PrimaryState u = PrimaryState::from_vec(us.value(p));
        PointCoefs pc = point_coefs(base.eos(), u);
        auto dphi = planes_at(lp, p);
        auto dpsi = planes_at(pp, p);
        Vec8 du[4] = {us.deriv(0, p), us.deriv(1, p), us.deriv(2, p), us.deriv(3, p)};
        Vec8 dv[4] = {vs.deriv(0, p), vs.deriv(1, p), vs.deriv(2, p), vs.deriv(3, p)};
        // principal part on V plus state and lift derivatives of the matrices
        Vec8 y = a0_apply(pc, dv[0]);
        y = add8(y, a1_tilde_apply(pc, dphi, dv[1]));
        y = add8(y, ai_apply(pc, 2, dv[2]));
        y = add8(y, ai_apply(pc, 3, dv[3]));
        y = add8(y, zeroth_order_point(base.eos(), u, dphi, du, vs.value(p)));
        y = add8(y, matvec(dA1_tilde_lift(base.eos(), u, dphi, dpsi), du[1]));
        for (int comp = 0; comp < 8; ++comp) out.plane(comp, l, i)[p] = y[size_t(comp)];
      }
    }
  return out;
}

SlabField good_unknown_shift(const BasicState& base, const BoundaryField& psi) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  Lift pert = Lift::perturbation(psi);
  SlabField out(g, 8);
  std::vector<double> ls1, ls2;
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i) {
      StateSlice us(base.U(), l, i, true);
      Lift::Planes lp = base.lift().eval(l, i, ls1, true);
      Lift::Planes pp = pert.eval(l, i, ls2, false);
      for (size_t p = 0; p < np; ++p) {
        PrimaryState u = PrimaryState::from_vec(us.value(p));
        PointCoefs pc = point_coefs(base.eos(), u);
        auto dphi = planes_at(lp, p);
        auto t1 = planes2_at(lp, p);
        Vec8 du[4] = {us.deriv(0, p), us.deriv(1, p), us.deriv(2, p), us.deriv(3, p)};
        // chain-rule d1 of the residual
        Vec8 y = matvec(dA0(base.eos(), u, du[1]), du[0]);
        y = add8(y, a0_apply(pc, us.d1deriv(0, p)));
        y = add8(y, matvec(dA1_tilde_state(base.eos(), u, du[1], dphi), du[1]));
        y = add8(y, matvec(dA1_tilde_lift(base.eos(), u, dphi, t1), du[1]));
        y = add8(y, a1_tilde_apply(pc, dphi, us.d1deriv(1, p)));
        y = add8(y, matvec(dAi(base.eos(), u, du[1], 2), du[2]));
        y = add8(y, ai_apply(pc, 2, us.d1deriv(2, p)));
        y = add8(y, matvec(dAi(base.eos(), u, du[1], 3), du[3]));
        y = add8(y, ai_apply(pc, 3, us.d1deriv(3, p)));
        double w = pp.val[p] / dphi[1];
        for (int comp = 0; comp < 8; ++comp) out.plane(comp, l, i)[p] = w * y[size_t(comp)];
      }
    }
  return out;
}

SlabField apply_Le_prime_good(const BasicState& base, const SlabField& V,
                              const BoundaryField& psi) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  Lift pert = Lift::perturbation(psi);
  SlabField out(g, 8);
  std::vector<double> ls1, ls2;
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i) {
      StateSlice us(base.U(), l, i, true);
      StateSlice vs(V, l, i, false);
      Lift::Planes lp = base.lift().eval(l, i, ls1, true);
      Lift::Planes pp = pert.eval(l, i, ls2, false);
      for (size_t p = 0; p < np; ++p) {
        PrimaryState u = PrimaryState::from_vec(us.value(p));
        PointCoefs pc = point_coefs(base.eos(), u);
        auto dphi = planes_at(lp, p);
        auto t1 = planes2_at(lp, p);
        Vec8 du[4] = {us.deriv(0, p), us.deriv(1, p), us.deriv(2, p), us.deriv(3, p)};
        // good unknown with Leibniz-consistent planes:
        //   R = D1 U / d1 Phi,  Da R = (D1 Da U * d1 Phi - D1 U * D1 Da Phi)/(d1 Phi)^2
        double inv = 1.0 / dphi[1];
        Vec8 R = scale8(inv, du[1]);
        Vec8 vd = sub8(vs.value(p), scale8(pp.val[p], R));
        Vec8 dvd[4];
        for (int a = 0; a < 4; ++a) {
          Vec8 dR = scale8(inv, sub8(us.d1deriv(a, p), scale8(t1[size_t(a)] * inv, du[1])));
          dvd[a] = sub8(vs.deriv(a, p),
                        add8(scale8(pp.d[size_t(a)][p], R), scale8(pp.val[p], dR)));
        }
        Vec8 y = leprime_point(base.eos(), u, pc, dphi, du, vd, dvd);
        for (int comp = 0; comp < 8; ++comp) out.plane(comp, l, i)[p] = y[size_t(comp)];
      }
    }
  return out;
}

SlabField good_unknown(const BasicState& base, const SlabField& V, const BoundaryField& psi) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  Lift pert = Lift::perturbation(psi);
  SlabField out = V;
  std::vector<double> ls1, ls2, d1u(np);
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i) {
      Lift::Planes lp = base.lift().eval(l, i, ls1, false);
      Lift::Planes pp = pert.eval(l, i, ls2, false);
      for (int comp = 0; comp < 8; ++comp) {
        slab_deriv_plane(base.U(), 1, comp, l, i, d1u.data());
        double* y = out.plane(comp, l, i);
        for (size_t p = 0; p < np; ++p) y[p] -= d1u[p] / lp.d[1][p] * pp.val[p];
      }
    }
  return out;
}

SlabField invert_good_unknown(const BasicState& base, const SlabField& Vdot,
                              const BoundaryField& psi) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  Lift pert = Lift::perturbation(psi);
  SlabField out = Vdot;
  std::vector<double> ls1, ls2, d1u(np);
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i) {
      Lift::Planes lp = base.lift().eval(l, i, ls1, false);
      Lift::Planes pp = pert.eval(l, i, ls2, false);
      for (int comp = 0; comp < 8; ++comp) {
        slab_deriv_plane(base.U(), 1, comp, l, i, d1u.data());
        double* y = out.plane(comp, l, i);
        for (size_t p = 0; p < np; ++p) y[p] += d1u[p] / lp.d[1][p] * pp.val[p];
      }
    }
  return out;
}

// ---- boundary operators -----------------------------------------------------

namespace {

// Hessian contraction of the normalized-gradient map:
//   d2f(xi)[z, zt] = -(xi.zt) z / |N|^3 - (z.zt) xi / |N|^3 - (xi.z) zt / |N|^3
//                    + 3 (xi.z)(xi.zt) xi / |N|^5
void d2frak_planes(size_t n, const double* xi2, const double* xi3, const double* z2,
                   const double* z3, const double* zt2, const double* zt3, double* out2,
                   double* out3) {
  for (size_t p = 0; p < n; ++p) {
    double nsq = 1.0 + xi2[p] * xi2[p] + xi3[p] * xi3[p];
    double n3 = nsq * std::sqrt(nsq);
    double n5 = n3 * nsq;
    double xz = xi2[p] * z2[p] + xi3[p] * z3[p];
    double xzt = xi2[p] * zt2[p] + xi3[p] * zt3[p];
    double zzt = z2[p] * zt2[p] + z3[p] * zt3[p];
    out2[p] = -(xzt * z2[p] + zzt * xi2[p] + xz * zt2[p]) / n3 + 3.0 * xz * xzt * xi2[p] / n5;
    out3[p] = -(xzt * z3[p] + zzt * xi3[p] + xz * zt3[p]) / n3 + 3.0 * xz * xzt * xi3[p] / n5;
  }
}

struct TracePlanes {
  std::vector<double> buf;
  size_t np;
  double *xi2, *xi3, *dtphi;  // base interface gradients
  double *dv1, *dv2, *dv3, *dq;  // one-sided d1 of base traces
  TracePlanes(const BasicState& base, int level) {
    const SlabGrid& g = base.grid();
    np = g.points_plane();
    buf.resize(7 * np);
    xi2 = buf.data();
    xi3 = buf.data() + np;
    dtphi = buf.data() + 2 * np;
    dv1 = buf.data() + 3 * np;
    dv2 = buf.data() + 4 * np;
    dv3 = buf.data() + 5 * np;
    dq = buf.data() + 6 * np;
    const BoundaryField& phi = base.lift().boundary();
    plane_d2(phi.level_data(0, level), g.n2, g.n3, g.h2(), xi2);
    plane_d3(phi.level_data(0, level), g.n2, g.n3, g.h3(), xi3);
    bdry_dt_plane(phi, 0, level, dtphi);
    slab_deriv_plane(base.U(), 1, kV1, level, 0, dv1);
    slab_deriv_plane(base.U(), 1, kV2, level, 0, dv2);
    slab_deriv_plane(base.U(), 1, kV3, level, 0, dv3);
    slab_deriv_plane(base.U(), 1, kQ, level, 0, dq);
  }
};

// divergence of a tangential vector plane
void div_planes(const SlabGrid& g, const double* f2, const double* f3, double* out) {
  size_t np = g.points_plane();
  std::vector<double> tmp(np);
  plane_d2(f2, g.n2, g.n3, g.h2(), out);
  plane_d3(f3, g.n2, g.n3, g.h3(), tmp.data());
  for (size_t p = 0; p < np; ++p) out[p] += tmp[p];
}

}  // namespace

BoundaryField apply_B_prime(const BasicState& base, const SlabField& V, const BoundaryField& psi) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  BoundaryField out(g, 2);
  std::vector<double> z2(np), z3(np), dtpsi(np), f2(np), f3(np), div(np);
  for (int l = 0; l < g.levels(); ++l) {
    TracePlanes tp(base, l);
    plane_d2(psi.level_data(0, l), g.n2, g.n3, g.h2(), z2.data());
    plane_d3(psi.level_data(0, l), g.n2, g.n3, g.h3(), z3.data());
    bdry_dt_plane(psi, 0, l, dtpsi.data());
    dfrak_planes(np, tp.xi2, tp.xi3, z2.data(), z3.data(), f2.data(), f3.data());
    div_planes(g, f2.data(), f3.data(), div.data());
    const double* bv2 = base.U().plane(kV2, l, 0);
    const double* bv3 = base.U().plane(kV3, l, 0);
    const double* vq = V.plane(kQ, l, 0);
    const double* vv1 = V.plane(kV1, l, 0);
    const double* vv2 = V.plane(kV2, l, 0);
    const double* vv3 = V.plane(kV3, l, 0);
    double* r1 = out.level_data(0, l);
    double* r2 = out.level_data(1, l);
    for (size_t p = 0; p < np; ++p) {
      r1[p] = dtpsi[p] + bv2[p] * z2[p] + bv3[p] * z3[p] -
              (vv1[p] - vv2[p] * tp.xi2[p] - vv3[p] * tp.xi3[p]);
      r2[p] = vq[p] - base.surface_tension() * div[p];
    }
  }
  return out;
}

BoundaryField apply_Be_prime(const BasicState& base, const SlabField& Vdot,
                             const BoundaryField& psi) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  BoundaryField out(g, 2);
  std::vector<double> z2(np), z3(np), dtpsi(np), f2(np), f3(np), div(np);
  for (int l = 0; l < g.levels(); ++l) {
    TracePlanes tp(base, l);
    const double* ps = psi.level_data(0, l);
    plane_d2(ps, g.n2, g.n3, g.h2(), z2.data());
    plane_d3(ps, g.n2, g.n3, g.h3(), z3.data());
    bdry_dt_plane(psi, 0, l, dtpsi.data());
    dfrak_planes(np, tp.xi2, tp.xi3, z2.data(), z3.data(), f2.data(), f3.data());
    div_planes(g, f2.data(), f3.data(), div.data());
    const double* bv2 = base.U().plane(kV2, l, 0);
    const double* bv3 = base.U().plane(kV3, l, 0);
    const double* vq = Vdot.plane(kQ, l, 0);
    const double* vv1 = Vdot.plane(kV1, l, 0);
    const double* vv2 = Vdot.plane(kV2, l, 0);
    const double* vv3 = Vdot.plane(kV3, l, 0);
    double* r1 = out.level_data(0, l);
    double* r2 = out.level_data(1, l);
    for (size_t p = 0; p < np; ++p) {
      double dvN = tp.dv1[p] - tp.dv2[p] * tp.xi2[p] - tp.dv3[p] * tp.xi3[p];
      r1[p] = dtpsi[p] + bv2[p] * z2[p] + bv3[p] * z3[p] - dvN * ps[p] -
              (vv1[p] - vv2[p] * tp.xi2[p] - vv3[p] * tp.xi3[p]);
      r2[p] = vq[p] + tp.dq[p] * ps[p] - base.surface_tension() * div[p];
    }
  }
  return out;
}

BoundaryField apply_B_second(const BasicState& base, const SlabField& V1,
                             const BoundaryField& psi1, const SlabField& V2,
                             const BoundaryField& psi2) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  BoundaryField out(g, 2);
  std::vector<double> z2(np), z3(np), w2(np), w3(np), f2(np), f3(np), div(np);
  for (int l = 0; l < g.levels(); ++l) {
    TracePlanes tp(base, l);
    plane_d2(psi1.level_data(0, l), g.n2, g.n3, g.h2(), z2.data());
    plane_d3(psi1.level_data(0, l), g.n2, g.n3, g.h3(), z3.data());
    plane_d2(psi2.level_data(0, l), g.n2, g.n3, g.h2(), w2.data());
    plane_d3(psi2.level_data(0, l), g.n2, g.n3, g.h3(), w3.data());
    d2frak_planes(np, tp.xi2, tp.xi3, z2.data(), z3.data(), w2.data(), w3.data(), f2.data(),
                  f3.data());
    div_planes(g, f2.data(), f3.data(), div.data());
    const double* a2 = V1.plane(kV2, l, 0);
    const double* a3 = V1.plane(kV3, l, 0);
    const double* b2 = V2.plane(kV2, l, 0);
    const double* b3 = V2.plane(kV3, l, 0);
    double* r1 = out.level_data(0, l);
    double* r2 = out.level_data(1, l);
    for (size_t p = 0; p < np; ++p) {
      r1[p] = b2[p] * z2[p] + b3[p] * z3[p] + a2[p] * w2[p] + a3[p] * w3[p];
      r2[p] = -base.surface_tension() * div[p];
    }
  }
  return out;
}

// ---- W form -----------------------------------------------------------------

SlabField to_W(const BasicState& base, const SlabField& Vdot) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  SlabField out = Vdot;
  std::vector<double> ls;
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i) {
      Lift::Planes lp = base.lift().eval(l, i, ls, false);
      const double* v2 = Vdot.plane(kV2, l, i);
      const double* v3 = Vdot.plane(kV3, l, i);
      double* w = out.plane(kV1, l, i);
      for (size_t p = 0; p < np; ++p) w[p] -= lp.d[2][p] * v2[p] + lp.d[3][p] * v3[p];
    }
  return out;
}

SlabField from_W(const BasicState& base, const SlabField& W) {
  const SlabGrid& g = base.grid();
  size_t np = g.points_plane();
  SlabField out = W;
  std::vector<double> ls;
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i) {
      Lift::Planes lp = base.lift().eval(l, i, ls, false);
      const double* w3 = W.plane(kV2, l, i);
      const double* w4 = W.plane(kV3, l, i);
      double* v1 = out.plane(kV1, l, i);
      for (size_t p = 0; p < np; ++p) v1[p] += lp.d[2][p] * w3[p] + lp.d[3][p] * w4[p];
    }
  return out;
}

Mat8 bold_A(const BasicState& base, int which, int level, int i1, int i2, int i3) {
  require(which >= 0 && which <= 3, "bold_A: which must be 0..3");
  PrimaryState u;
  u.q = base.U().at(kQ, level, i1, i2, i3);
  u.v = {base.U().at(kV1, level, i1, i2, i3), base.U().at(kV2, level, i1, i2, i3),
         base.U().at(kV3, level, i1, i2, i3)};
  u.H = {base.U().at(kH1, level, i1, i2, i3), base.U().at(kH2, level, i1, i2, i3),
         base.U().at(kH3, level, i1, i2, i3)};
  u.S = base.U().at(kS, level, i1, i2, i3);
  Mat8 a;
  if (which == 0)
    a = assemble_A0(base.eos(), u);
  else if (which == 1)
    a = assemble_A1_tilde(base.eos(), u, base.lift().dphi_at(level, i1, i2, i3));
  else
    a = assemble_Ai(base.eos(), u, which);
  auto dphi = base.lift().dphi_at(level, i1, i2, i3);
  Mat8 j = Mat8::identity();
  j(kV1, kV2) = dphi[2];
  j(kV1, kV3) = dphi[3];
  return matmul(transpose(j), matmul(a, j));
}

Mat8 boldA1_boundary_coupling() {
  Mat8 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

double boldA1_boundary_defect(const BasicState& base) {
  const SlabGrid& g = base.grid();
  Mat8 ref = boldA1_boundary_coupling();
  double defect = 0.0;
  for (int l = 0; l < g.levels(); ++l)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k)
        defect = std::max(defect, max_abs_entry(bold_A(base, 1, l, 0, j, k) - ref));
  return defect;
}

}  // namespace fbmhd
