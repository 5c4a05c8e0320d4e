#include "fbmhd/nash_moser.hpp"

#include <cmath>

#include "fbmhd/cutoffs.hpp"
#include "fbmhd/hstar.hpp"
#include "fbmhd/operators.hpp"
#include "fbmhd/stencil.hpp"

namespace fbmhd {

namespace {

// L2 over the physical window t >= 0 only
double l2_physical(const SlabField& f) {
  SlabField g = f;
  const SlabGrid& gr = f.grid();
  for (int comp = 0; comp < f.ncomp(); ++comp)
    for (int l = 0; l < gr.levels(); ++l) {
      if (gr.time(l) > 0.0) continue;
      for (int i = 0; i < gr.n1; ++i) {
        double* p = g.plane(comp, l, i);
        for (size_t q = 0; q < gr.points_plane(); ++q) p[q] = 0.0;
      }
    }
  return l2_spacetime(g);
}

double l2_physical(const BoundaryField& f) {
  BoundaryField g = f;
  const SlabGrid& gr = f.grid();
  for (int comp = 0; comp < f.ncomp(); ++comp)
    for (int l = 0; l < gr.levels(); ++l) {
      if (gr.time(l) > 0.0) continue;
      double* p = g.level_data(comp, l);
      for (size_t q = 0; q < gr.points_plane(); ++q) p[q] = 0.0;
    }
  return l2_boundary(g);
}

void zero_past(SlabField& f) {
  const SlabGrid& g = f.grid();
  for (int comp = 0; comp < f.ncomp(); ++comp)
    for (int l = 0; l < g.levels(); ++l) {
      if (g.time(l) > 0.0) continue;
      for (int i = 0; i < g.n1; ++i) {
        double* p = f.plane(comp, l, i);
        for (size_t q = 0; q < g.points_plane(); ++q) p[q] = 0.0;
      }
    }
}

void zero_past(BoundaryField& f) {
  const SlabGrid& g = f.grid();
  for (int comp = 0; comp < f.ncomp(); ++comp)
    for (int l = 0; l < g.levels(); ++l) {
      if (g.time(l) > 0.0) continue;
      double* p = f.level_data(comp, l);
      for (size_t q = 0; q < g.points_plane(); ++q) p[q] = 0.0;
    }
}

SlabField add_fields(const SlabField& a, const SlabField& b) {
  SlabField out = a;
  add_scaled(out, 1.0, b);
  return out;
}

BoundaryField add_fields(const BoundaryField& a, const BoundaryField& b) {
  BoundaryField out = a;
  add_scaled(out, 1.0, b);
  return out;
}

}  // namespace

NashMoserIteration::NashMoserIteration(const ThermoModel& eos, double surface_tension,
                                       ApproximateSolution approx, SlabField forcing,
                                       IterationParams params)
    : eos_(eos),
      s_(surface_tension),
      app_(std::move(approx)),
      fa_(std::move(forcing)),
      prm_(params),
      smoother_(params.smoothing_width),
      theta0_(params.theta0),
      V_(app_.U.grid(), 8),
      psi_(app_.U.grid(), 1),
      Esum_(app_.U.grid(), 8),
      Etsum_(app_.U.grid(), 2),
      fsum_(app_.U.grid(), 8),
      gsum_(app_.U.grid(), 2) {
  require(theta0_ >= 1.0, "iteration needs theta0 >= 1");
  // boundary target: minus the defect of the approximate solution for t > 0
  ga_ = boundary_residual(app_.U, Lift::interface(app_.phi), s_);
  scale(ga_, -1.0);
  const SlabGrid& g = app_.U.grid();
  for (int comp = 0; comp < 2; ++comp)
    for (int l = 0; l < g.levels(); ++l) {
      if (g.time(l) > 0.0) continue;
      double* p = ga_.level_data(comp, l);
      for (size_t q = 0; q < g.points_plane(); ++q) p[q] = 0.0;
    }
}

NashMoserIteration::ModifiedState NashMoserIteration::modified_state() const {
  const SlabGrid& g = app_.U.grid();
  size_t np = g.points_plane();
  double th = theta(n_);

  ModifiedState ms;
  ms.psi = smoother_.apply(psi_, th);
  ms.V = smoother_.apply(V_, th);

  // total interface and its tangential gradients / time derivative
  BoundaryField phi_tot = add_fields(app_.phi, ms.psi);
  std::vector<double> dtphi(np), d2phi(np), d3phi(np);
  std::vector<double> dtphia(np), d2phia(np), d3phia(np);
  for (int l = 0; l < g.levels(); ++l) {
    bdry_dt_plane(phi_tot, 0, l, dtphi.data());
    plane_d2(phi_tot.level_data(0, l), g.n2, g.n3, g.h2(), d2phi.data());
    plane_d3(phi_tot.level_data(0, l), g.n2, g.n3, g.h3(), d3phi.data());
    bdry_dt_plane(app_.phi, 0, l, dtphia.data());
    plane_d2(app_.phi.level_data(0, l), g.n2, g.n3, g.h2(), d2phia.data());
    plane_d3(app_.phi.level_data(0, l), g.n2, g.n3, g.h3(), d3phia.data());

    const double* av1 = app_.U.plane(kV1, l, 0);
    const double* av2 = app_.U.plane(kV2, l, 0);
    const double* av3 = app_.U.plane(kV3, l, 0);
    const double* aH1 = app_.U.plane(kH1, l, 0);
    const double* aH2 = app_.U.plane(kH2, l, 0);
    const double* aH3 = app_.U.plane(kH3, l, 0);
    const double* pv2 = ms.V.plane(kV2, l, 0);
    const double* pv3 = ms.V.plane(kV3, l, 0);
    const double* pH2 = ms.V.plane(kH2, l, 0);
    const double* pH3 = ms.V.plane(kH3, l, 0);

    std::vector<double> vneed(np), hneed(np);
    for (size_t p = 0; p < np; ++p) {
      // approximate solution's own defects (same stencils)
      double dkin = dtphia[p] - (av1[p] - av2[p] * d2phia[p] - av3[p] * d3phia[p]);
      double dmag = aH1[p] - aH2[p] * d2phia[p] - aH3[p] * d3phia[p];
      double v2t = av2[p] + pv2[p];
      double v3t = av3[p] + pv3[p];
      double H2t = aH2[p] + pH2[p];
      double H3t = aH3[p] + pH3[p];
      vneed[p] = dtphi[p] + v2t * d2phi[p] + v3t * d3phi[p] - dkin - av1[p];
      hneed[p] = H2t * d2phi[p] + H3t * d3phi[p] + dmag - aH1[p];
    }
    std::vector<double> v1tr(ms.V.plane(kV1, l, 0), ms.V.plane(kV1, l, 0) + np);
    std::vector<double> H1tr(ms.V.plane(kH1, l, 0), ms.V.plane(kH1, l, 0) + np);
    for (int i = 0; i < g.n1; ++i) {
      double e = 1.0 - smoothstep01(g.x1(i) / 1.5);
      double* v1 = ms.V.plane(kV1, l, i);
      double* H1 = ms.V.plane(kH1, l, i);
      for (size_t p = 0; p < np; ++p) {
        v1[p] += e * (vneed[p] - v1tr[p]);
        H1[p] += e * (hneed[p] - H1tr[p]);
      }
    }
  }
  return ms;
}

BasicState NashMoserIteration::make_base(const ModifiedState& ms) const {
  SlabField U = add_fields(app_.U, ms.V);
  BoundaryField phi = add_fields(app_.phi, ms.psi);
  return BasicState::make(eos_, s_, std::move(U), std::move(phi), -1.0);
}

double NashMoserIteration::residual_interior() const {
  // defect of the absorbed problem: [L(U^a+V) - L(U^a)] - f^a
  SlabField U = add_fields(app_.U, V_);
  BoundaryField phi = add_fields(app_.phi, psi_);
  SlabField res = nonlinear_interior_residual(eos_, U, Lift::interface(phi));
  SlabField base = nonlinear_interior_residual(eos_, app_.U, Lift::interface(app_.phi));
  add_scaled(res, -1.0, base);
  add_scaled(res, -1.0, fa_);
  return l2_physical(res);
}

double NashMoserIteration::residual_boundary() const {
  SlabField U = add_fields(app_.U, V_);
  BoundaryField phi = add_fields(app_.phi, psi_);
  BoundaryField res = boundary_residual(U, Lift::interface(phi), s_);
  return l2_physical(res);
}

StepRecord NashMoserIteration::step() {
  const SlabGrid& g = app_.U.grid();
  StepRecord rec;
  rec.n = n_;
  double th = theta(n_);
  rec.theta = th;
  rec.delta = theta(n_ + 1) - th;

  // modified state and its admission
  ModifiedState ms = modified_state();
  BasicState base = make_base(ms);
  rec.mod_bas1b = base.bas1b_defect();

  // sources from the recurrences (achieved sums kept on the right)
  SlabField Sfa = smoother_.apply(fa_, th);
  SlabField SE = smoother_.apply(Esum_, th);
  SlabField fn = Sfa;
  add_scaled(fn, -1.0, SE);
  add_scaled(fn, -1.0, fsum_);
  BoundaryField target = ga_;
  add_scaled(target, -1.0, Etsum_);
  BoundaryField gn = smoother_.apply(target, th);
  add_scaled(gn, -1.0, gsum_);
  {
    // bookkeeping identity: the requested source closes the recurrence
    SlabField check = fsum_;
    add_scaled(check, 1.0, fn);
    add_scaled(check, 1.0, SE);
    add_scaled(check, -1.0, Sfa);
    rec.source_defect = max_abs(check);
  }

  // effective linear solve for the good-unknown increment
  LinearSolveReport rep = solve_linearized(base, fn, gn, prm_.scheme);
  if (!rep.stable) throw DomainError("linear solve diverged inside the iteration");
  SlabField dVdot = rep.Vdot;
  BoundaryField dpsi = rep.psi;
  SlabField dV = invert_good_unknown(base, dVdot, dpsi);

  rec.dv_h1 = hstar_norm(dV, 1);
  rec.dpsi = l2_boundary(dpsi);
  for (double s : prm_.monitor_orders) {
    int ord = std::min(3, int(s));
    double nrm = hstar_norm(dV, ord);
    rec.hyp_ratio.push_back(nrm * std::pow(th, prm_.alpha + 1.0 - s) / rec.delta);
  }

  // previous and updated iterates
  SlabField V_old = V_;
  BoundaryField psi_old = psi_;
  add_scaled(V_, 1.0, dV);
  add_scaled(psi_, 1.0, dpsi);

  // error decomposition by direct operator evaluations
  SlabField U_old = add_fields(app_.U, V_old);
  BoundaryField phi_old = add_fields(app_.phi, psi_old);
  SlabField U_new = add_fields(app_.U, V_);
  BoundaryField phi_new = add_fields(app_.phi, psi_);

  SlabField Ldiff = nonlinear_interior_residual(eos_, U_new, Lift::interface(phi_new));
  {
    SlabField prev = nonlinear_interior_residual(eos_, U_old, Lift::interface(phi_old));
    add_scaled(Ldiff, -1.0, prev);
  }
  BoundaryField Bdiff = boundary_residual(U_new, Lift::interface(phi_new), s_);
  {
    BoundaryField prev = boundary_residual(U_old, Lift::interface(phi_old), s_);
    add_scaled(Bdiff, -1.0, prev);
  }

  BasicState base_old = BasicState::make(eos_, s_, U_old, phi_old, -1.0);
  SlabField SV = smoother_.apply(V_old, th);
  BoundaryField Spsi = smoother_.apply(psi_old, th);
  BasicState base_sm =
      BasicState::make(eos_, s_, add_fields(app_.U, SV), add_fields(app_.phi, Spsi), -1.0);

  SlabField Lp_old = apply_L_prime(base_old, dV, dpsi);
  SlabField Lp_sm = apply_L_prime(base_sm, dV, dpsi);
  SlabField Lp_mod = apply_L_prime(base, dV, dpsi);
  SlabField Le_good = apply_Le_prime_good(base, dV, dpsi);
  SlabField shift = good_unknown_shift(base, dpsi);

  SlabField e_quad = Ldiff;
  add_scaled(e_quad, -1.0, Lp_old);
  SlabField e_sub1 = Lp_old;
  add_scaled(e_sub1, -1.0, Lp_sm);
  SlabField e_sub2 = Lp_sm;
  add_scaled(e_sub2, -1.0, Lp_mod);
  rec.e_quad = l2_spacetime(e_quad);
  rec.e_sub1 = l2_spacetime(e_sub1);
  rec.e_sub2 = l2_spacetime(e_sub2);
  rec.e_last = l2_spacetime(shift);

  // exact interior bookkeeping on the physical window: e_n := Ldiff - achieved
  // source; the pre-history levels carry only stencil spill-over from t > 0
  // and are masked so every source stays admissible for the march
  SlabField f_ach = Le_good;
  zero_past(f_ach);
  zero_past(Ldiff);
  SlabField e_n = Ldiff;
  add_scaled(e_n, -1.0, f_ach);
  {
    SlabField split = e_quad;
    add_scaled(split, 1.0, e_sub1);
    add_scaled(split, 1.0, e_sub2);
    add_scaled(split, 1.0, shift);
    zero_past(split);
    add_scaled(split, -1.0, e_n);
    rec.decomp_defect = max_abs(split);
  }

  // boundary errors
  BoundaryField Bp_old = apply_B_prime(base_old, dV, dpsi);
  BoundaryField Bp_sm = apply_B_prime(base_sm, dV, dpsi);
  BoundaryField Be_mod = apply_Be_prime(base, dVdot, dpsi);
  BoundaryField et_quad = Bdiff;
  add_scaled(et_quad, -1.0, Bp_old);
  BoundaryField et_sub1 = Bp_old;
  add_scaled(et_sub1, -1.0, Bp_sm);
  BoundaryField et_sub2 = Bp_sm;
  add_scaled(et_sub2, -1.0, Be_mod);
  rec.et_quad = l2_boundary(et_quad);
  rec.et_sub1 = l2_boundary(et_sub1);
  rec.et_sub2 = l2_boundary(et_sub2);

  BoundaryField g_ach = Be_mod;
  zero_past(g_ach);
  zero_past(Bdiff);
  BoundaryField et_n = Bdiff;
  add_scaled(et_n, -1.0, g_ach);

  // accumulate
  add_scaled(Esum_, 1.0, e_n);
  add_scaled(Etsum_, 1.0, et_n);
  add_scaled(fsum_, 1.0, f_ach);
  add_scaled(gsum_, 1.0, g_ach);

  ++n_;
  rec.residual_int = residual_interior();
  rec.residual_bdy = residual_boundary();
  records_.push_back(rec);
  return rec;
}

IterationResult NashMoserIteration::run() {
  IterationResult out;
  double r0i = residual_interior();
  double r0b = residual_boundary();
  StepRecord init;
  init.n = -1;
  init.residual_int = r0i;
  init.residual_bdy = r0b;
  out.steps.push_back(init);

  int grow = 0;
  double prev = r0i + r0b;
  for (int k = 0; k < prm_.max_steps; ++k) {
    StepRecord rec;
    try {
      rec = step();
    } catch (const DomainError& e) {
      out.aborted = true;
      out.abort_reason = e.what();
      break;
    }
    out.steps.push_back(rec);
    double cur = rec.residual_int + rec.residual_bdy;
    grow = (cur > prev) ? grow + 1 : 0;
    prev = cur;
    if (grow >= 3) {
      out.aborted = true;
      out.abort_reason = "residual grew over three consecutive steps";
      break;
    }
    if (rec.residual_int < prm_.tol_interior && rec.residual_bdy < prm_.tol_boundary) {
      out.converged = true;
      break;
    }
  }
  out.V = V_;
  out.psi = psi_;
  out.final_residual_int = residual_interior();
  out.final_residual_bdy = residual_boundary();
  (void)r0b;
  return out;
}

}  // namespace fbmhd
