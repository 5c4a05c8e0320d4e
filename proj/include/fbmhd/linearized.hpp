#pragma once

#include "fbmhd/eos.hpp"
#include "fbmhd/grid.hpp"
#include "fbmhd/lift.hpp"
#include "fbmhd/matrices.hpp"
#include "fbmhd/operators.hpp"

namespace fbmhd {

// Basic state for linearization: an admissible slab state plus interface
// history satisfying the boundary compatibility pair (kinematic condition
// and tangency of the magnetic field) to stencil accuracy.
class BasicState {
 public:
  // compat_tol < 0 disables the compatibility gate (used by operator-level
  // tests that construct raw states on purpose).
  static BasicState make(const ThermoModel& eos, double surface_tension, SlabField U,
                         BoundaryField phi, double compat_tol = -1.0);

  const ThermoModel& eos() const { return eos_; }
  double surface_tension() const { return s_; }
  const SlabField& U() const { return U_; }
  const Lift& lift() const { return lift_; }
  const SlabGrid& grid() const { return U_.grid(); }

  double margin() const { return margin_; }
  double bas1b_defect() const { return bas1b_; }
  double state_bound() const { return bound_; }  // sup |U| and |DU|
  // true when the state is constant and the interface flat (every coupling
  // coefficient of the linearized operator vanishes)
  bool constant_coefficients() const { return const_coef_; }

  // max over the trace of |d_t phi - v.N| and |H.N|
  static double boundary_compat_defect(const SlabField& U, const BoundaryField& phi);

 private:
  ThermoModel eos_;
  double s_ = 1.0;
  SlabField U_;
  Lift lift_;
  double margin_ = 0.0, bas1b_ = 0.0, bound_ = 0.0;
  bool const_coef_ = false;
};

// Zeroth-order coupling of the effective linearized operator at one point:
// the state derivatives of the coefficient matrices contracted against the
// base-state gradient, applied to direction V.
Vec8 state_coupling_point(const ThermoModel& eos, const PrimaryState& u,
                          const std::array<double, 4>& dphi, const Vec8 du[4], const Vec8& V);

// ---- interior operators -------------------------------------------------

// Effective linearized operator L' V + C V applied to a good-unknown field
// via plain stencils (the marching solver's operator).
SlabField apply_Le_prime(const BasicState& base, const SlabField& Vdot);

// Exact directional derivative of the discrete interior operator in the
// direction (V, psi); psi enters through its cutoff lift.
SlabField apply_L_prime(const BasicState& base, const SlabField& V, const BoundaryField& psi);

// Effective operator on the Leibniz-consistent derivative planes of the good
// unknown built from (V, psi).  apply_L_prime == this + good_unknown_shift holds
// to round-off by construction.
SlabField apply_Le_prime_good(const BasicState& base, const SlabField& V,
                              const BoundaryField& psi);

// Shift term (Psi / d1 Phi) * d1(L U) with the x1-derivative of the residual
// expanded by the chain rule on the stencil planes.
SlabField good_unknown_shift(const BasicState& base, const BoundaryField& psi);

// Good unknown as a field: Vdot = V - (D1 U / D1 Phi) Psi, and its inverse.
SlabField good_unknown(const BasicState& base, const SlabField& V, const BoundaryField& psi);
SlabField invert_good_unknown(const BasicState& base, const SlabField& Vdot,
                              const BoundaryField& psi);

// ---- boundary operators -------------------------------------------------

// Exact derivative of the boundary operator in the direction (V, psi).
BoundaryField apply_B_prime(const BasicState& base, const SlabField& V, const BoundaryField& psi);

// Effective form acting on the good unknown; agrees with apply_B_prime on
// matching arguments pointwise.
BoundaryField apply_Be_prime(const BasicState& base, const SlabField& Vdot,
                             const BoundaryField& psi);

// Symmetric second derivative of the boundary operator.
BoundaryField apply_B_second(const BasicState& base, const SlabField& V1,
                             const BoundaryField& psi1, const SlabField& V2,
                             const BoundaryField& psi2);

// ---- noncharacteristic form ----------------------------------------------

// W = J(Phi)^{-1} Vdot and back; only the first velocity row of J is
// nontrivial.
SlabField to_W(const BasicState& base, const SlabField& Vdot);
SlabField from_W(const BasicState& base, const SlabField& W);

// Conjugated coefficient matrices J^T A J at one point; which = 0..3 selects
// the temporal matrix or the flux along the axis (1 means the straightened
// normal flux).
Mat8 bold_A(const BasicState& base, int which, int level, int i1, int i2, int i3);

// Constant boundary coupling matrix (the q / normal-velocity pair).
Mat8 boldA1_boundary_coupling();

// max over the trace history of |J^T A1~ J - coupling|_infinity
double boldA1_boundary_defect(const BasicState& base);

}  // namespace fbmhd
