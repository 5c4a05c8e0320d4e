#include "fbmhd/matrices.hpp"

#include <cmath>

#include "fbmhd/common.hpp"
#include "fbmhd/state_actions.hpp"

namespace fbmhd {

PointCoefs point_coefs(const ThermoModel& eos, const PrimaryState& u) {
  require_domain(eos.admissible(u), "state outside the hyperbolicity window");
  PointCoefs pc;
  double pe = eos.fluid_pressure(u) + eos.p_stiff;
  pc.c = 1.0 / (eos.gamma * pe);
  pc.rho = eos.density_of(u);
  pc.v = u.v;
  pc.H = u.H;
  return pc;
}

CoefDeriv coef_deriv(const ThermoModel& eos, const PrimaryState& u, const Vec8& du) {
  double pe = eos.fluid_pressure(u) + eos.p_stiff;
  double rho = eos.density_of(u);
  double dpe = du[kQ] - (u.H[0] * du[kH1] + u.H[1] * du[kH2] + u.H[2] * du[kH3]);
  CoefDeriv d;
  d.dc = -dpe / (eos.gamma * pe * pe);
  d.drho = rho * (dpe / (eos.gamma * pe) - du[kS] / (eos.gamma * eos.entropy_scale));
  return d;
}

Mat8 assemble_A0(const ThermoModel& eos, const PrimaryState& u) {
  return assemble_A0(point_coefs(eos, u));
}

Mat8 assemble_A0(const PointCoefs& pc) {
  Mat8 m;
  m(0, 0) = pc.c;
  for (int j = 0; j < 3; ++j) {
    double e = -pc.c * pc.H[size_t(j)];
    m(0, 4 + j) = e;
    m(4 + j, 0) = e;
    m(1 + j, 1 + j) = pc.rho;
    for (int i = 0; i <= j; ++i) {
      double hh = (i == j ? 1.0 : 0.0) + pc.c * (pc.H[size_t(i)] * pc.H[size_t(j)]);
      m(4 + i, 4 + j) = hh;
      m(4 + j, 4 + i) = hh;
    }
  }
  m(7, 7) = 1.0;
  return m;
}

Mat8 assemble_Ai(const ThermoModel& eos, const PrimaryState& u, int axis) {
  return assemble_Ai(point_coefs(eos, u), axis);
}

Mat8 assemble_Ai(const PointCoefs& pc, int axis) {
  require(axis >= 1 && axis <= 3, "assemble_Ai: axis must be 1, 2 or 3");
  double vm = pc.v[size_t(axis - 1)];
  double Hm = pc.H[size_t(axis - 1)];
  Mat8 m;
  m(0, 0) = vm * pc.c;
  m(0, axis) = 1.0;
  m(axis, 0) = 1.0;
  for (int j = 0; j < 3; ++j) {
    double e = -vm * pc.c * pc.H[size_t(j)];
    m(0, 4 + j) = e;
    m(4 + j, 0) = e;
    m(1 + j, 1 + j) = pc.rho * vm;
    m(1 + j, 4 + j) = -Hm;
    m(4 + j, 1 + j) = -Hm;
    for (int i = 0; i <= j; ++i) {
      double hh = vm * ((i == j ? 1.0 : 0.0) + pc.c * (pc.H[size_t(i)] * pc.H[size_t(j)]));
      m(4 + i, 4 + j) = hh;
      m(4 + j, 4 + i) = hh;
    }
  }
  m(7, 7) = vm;
  return m;
}

Mat8 assemble_A1_tilde(const ThermoModel& eos, const PrimaryState& u,
                       const std::array<double, 4>& dPhi) {
  return assemble_A1_tilde(point_coefs(eos, u), dPhi);
}

Mat8 assemble_A1_tilde(const PointCoefs& pc, const std::array<double, 4>& dPhi) {
  require_domain(dPhi[1] >= 0.5, "degenerate lift: d1 Phi < 1/2");
  Mat8 m = assemble_Ai(pc, 1);
  m -= dPhi[0] * assemble_A0(pc);
  m -= dPhi[2] * assemble_Ai(pc, 2);
  m -= dPhi[3] * assemble_Ai(pc, 3);
  m *= 1.0 / dPhi[1];
  return m;
}

Mat8 dA0(const ThermoModel& eos, const PrimaryState& u, const Vec8& du) {
  PointCoefs pc = point_coefs(eos, u);
  CoefDeriv d = coef_deriv(eos, u, du);
  Vec3 dH = {du[kH1], du[kH2], du[kH3]};
  Mat8 m;
  m(0, 0) = d.dc;
  for (int j = 0; j < 3; ++j) {
    double e = -(d.dc * pc.H[size_t(j)] + pc.c * dH[size_t(j)]);
    m(0, 4 + j) = e;
    m(4 + j, 0) = e;
    m(1 + j, 1 + j) = d.drho;
    for (int i = 0; i < 3; ++i)
      m(4 + i, 4 + j) = d.dc * pc.H[size_t(i)] * pc.H[size_t(j)] +
                        pc.c * (dH[size_t(i)] * pc.H[size_t(j)] + pc.H[size_t(i)] * dH[size_t(j)]);
  }
  return m;
}

Mat8 dAi(const ThermoModel& eos, const PrimaryState& u, const Vec8& du, int axis) {
  require(axis >= 1 && axis <= 3, "dAi: axis must be 1, 2 or 3");
  PointCoefs pc = point_coefs(eos, u);
  CoefDeriv d = coef_deriv(eos, u, du);
  Vec3 dH = {du[kH1], du[kH2], du[kH3]};
  Vec3 dv = {du[kV1], du[kV2], du[kV3]};
  double vm = pc.v[size_t(axis - 1)], dvm = dv[size_t(axis - 1)];
  double dHm = dH[size_t(axis - 1)];
  double dvc = dvm * pc.c + vm * d.dc;
  Mat8 m;
  m(0, 0) = dvc;
  for (int j = 0; j < 3; ++j) {
    double e = -(dvc * pc.H[size_t(j)] + vm * pc.c * dH[size_t(j)]);
    m(0, 4 + j) = e;
    m(4 + j, 0) = e;
    m(1 + j, 1 + j) = d.drho * vm + pc.rho * dvm;
    m(1 + j, 4 + j) = -dHm;
    m(4 + j, 1 + j) = -dHm;
    for (int i = 0; i < 3; ++i) {
      double hij = pc.H[size_t(i)] * pc.H[size_t(j)];
      double dhij = dH[size_t(i)] * pc.H[size_t(j)] + pc.H[size_t(i)] * dH[size_t(j)];
      m(4 + i, 4 + j) = dvm * ((i == j ? 1.0 : 0.0) + pc.c * hij) +
                        vm * (d.dc * hij + pc.c * dhij);
    }
  }
  m(7, 7) = dvm;
  return m;
}

Mat8 dA1_tilde_state(const ThermoModel& eos, const PrimaryState& u, const Vec8& du,
                     const std::array<double, 4>& dPhi) {
  Mat8 m = dAi(eos, u, du, 1);
  m -= dPhi[0] * dA0(eos, u, du);
  m -= dPhi[2] * dAi(eos, u, du, 2);
  m -= dPhi[3] * dAi(eos, u, du, 3);
  m *= 1.0 / dPhi[1];
  return m;
}

Mat8 dA1_tilde_lift(const ThermoModel& eos, const PrimaryState& u,
                    const std::array<double, 4>& dPhi, const std::array<double, 4>& dPsi) {
  Mat8 m = (-dPsi[0]) * assemble_A0(eos, u);
  m -= dPsi[2] * assemble_Ai(eos, u, 2);
  m -= dPsi[3] * assemble_Ai(eos, u, 3);
  m -= dPsi[1] * assemble_A1_tilde(eos, u, dPhi);
  m *= 1.0 / dPhi[1];
  return m;
}

namespace {
ActionCoefs<double> as_action(const PointCoefs& pc) {
  return {pc.c, pc.rho, {pc.v[0], pc.v[1], pc.v[2]}, {pc.H[0], pc.H[1], pc.H[2]}};
}
}  // namespace

Vec8 a0_apply(const PointCoefs& pc, const Vec8& x) { return act_a0(as_action(pc), x); }

Vec8 ai_apply(const PointCoefs& pc, int axis, const Vec8& x) {
  return act_ai(as_action(pc), axis, x);
}

Vec8 a0inv_apply(const PointCoefs& pc, const Vec8& x) { return act_a0inv(as_action(pc), x); }

Vec8 a1_tilde_apply(const PointCoefs& pc, const std::array<double, 4>& dPhi, const Vec8& x) {
  return act_a1_tilde(as_action(pc), dPhi, x);
}

}  // namespace fbmhd
