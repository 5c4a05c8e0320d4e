#pragma once

#include "fbmhd/eos.hpp"
#include "fbmhd/linalg.hpp"

namespace fbmhd {

// Symmetric coefficient matrices of the quasilinear system in the primary
// unknowns U = (q, v, H, S), and their closed-form directional derivatives in
// U (needed by the zeroth-order coefficient of the effective linearized
// operator).  Entry formulas follow the symmetrized form: the q/H block is
// weighted by c = 1/(rho a^2), which for the stiffened gamma law equals
// 1/(gamma (p + p_stiff)).

struct PointCoefs {
  double c = 0.0;    // 1/(rho a^2)
  double rho = 0.0;
  Vec3 v{};
  Vec3 H{};
};

// Extracts point coefficients; throws DomainError for inadmissible states.
PointCoefs point_coefs(const ThermoModel& eos, const PrimaryState& u);

Mat8 assemble_A0(const ThermoModel& eos, const PrimaryState& u);
Mat8 assemble_Ai(const ThermoModel& eos, const PrimaryState& u, int axis);  // axis in {1,2,3}

// dPhi = (d_t Phi, d_1 Phi, d_2 Phi, d_3 Phi); requires d_1 Phi >= 1/2.
Mat8 assemble_A1_tilde(const ThermoModel& eos, const PrimaryState& u,
                       const std::array<double, 4>& dPhi);

// Coefficient-level assemblers (skip the EOS evaluation when the point
// coefficients are already cached).
Mat8 assemble_A0(const PointCoefs& pc);
Mat8 assemble_Ai(const PointCoefs& pc, int axis);
Mat8 assemble_A1_tilde(const PointCoefs& pc, const std::array<double, 4>& dPhi);

// Directional derivatives d/dtheta A(u + theta du) at theta = 0.
Mat8 dA0(const ThermoModel& eos, const PrimaryState& u, const Vec8& du);
Mat8 dAi(const ThermoModel& eos, const PrimaryState& u, const Vec8& du, int axis);
// U-part of the derivative of A1_tilde (the lift arguments held fixed).
Mat8 dA1_tilde_state(const ThermoModel& eos, const PrimaryState& u, const Vec8& du,
                     const std::array<double, 4>& dPhi);
// Lift-part: direction dPsi = (d_t Psi, d_1 Psi, d_2 Psi, d_3 Psi).
Mat8 dA1_tilde_lift(const ThermoModel& eos, const PrimaryState& u,
                    const std::array<double, 4>& dPhi, const std::array<double, 4>& dPsi);

// Pointwise actions (scalar path; the plane kernels cover the hot loops).
Vec8 a0_apply(const PointCoefs& pc, const Vec8& x);
Vec8 ai_apply(const PointCoefs& pc, int axis, const Vec8& x);
Vec8 a0inv_apply(const PointCoefs& pc, const Vec8& x);
Vec8 a1_tilde_apply(const PointCoefs& pc, const std::array<double, 4>& dPhi, const Vec8& x);

// Derivative coefficients for one state direction, reused by the matrix
// derivative assemblers and the per-plane coefficient fields.
struct CoefDeriv {
  double dc = 0.0;
  double drho = 0.0;
};
CoefDeriv coef_deriv(const ThermoModel& eos, const PrimaryState& u, const Vec8& du);

}  // namespace fbmhd
