#pragma once

#include <vector>

#include "fbmhd/linearized.hpp"

namespace fbmhd {

struct SchemeParams {
  double cfl = 0.25;
  bool implicit_eps = true;  // fourth-order boundary term solved spectrally
  // explicit-mode stability margin for the boundary term
  double eps_cfl = 0.5;
};

// Result of one time-marching solve of the noncharacteristic-form linearized
// problem.  The energy rows collect the cumulative quantities entering the
// first-order a priori estimate, one row per physical time level.
struct LinearSolveReport {
  SlabField W;        // solution history in the noncharacteristic variables
  SlabField Vdot;     // good-unknown variables (J W + boundary lift)
  BoundaryField psi;  // interface perturbation history
  double eps = 0.0;
  bool stable = true;

  struct EnergyRow {
    double t = 0.0;
    double w_h1 = 0.0;       // anisotropic first-order norm of W up to t
    double d1wnc = 0.0;      // normal derivative of the noncharacteristic pair
    double wnc_trace = 0.0;  // trace of the noncharacteristic pair
    double psi_h1 = 0.0;     // (psi, D psi) in H^1 of the boundary
  };
  std::vector<EnergyRow> energy;
  double f_h1 = 0.0;       // first-order norm of the homogenized interior source
  double est_ratio = 0.0;  // (sum of the four final energies) / f_h1
  double vnat_ratio = 0.0; // measured trace-lift constant
};

// Algebraic lift of a two-component boundary source: the effective boundary
// operator applied to (Vnat, 0) reproduces g on the trace; the profile decays
// into the slab with the wall cutoff.  g must vanish in the past.
SlabField lift_boundary_source(const BasicState& base, const BoundaryField& g);

// Largest stable time step of the explicit march for this base state.
double max_stable_dt(const BasicState& base, const SchemeParams& sp);

// March the regularized problem (interior relaxation -eps J d1 W, boundary
// fourth-order term eps(d2^4 + d3^4) psi).  f and g must vanish in the past;
// refuses when the grid time step violates the CFL bound.
LinearSolveReport solve_regularized(const BasicState& base, const SlabField& f,
                                    const BoundaryField& g, double eps, const SchemeParams& sp);

// eps = 0 limit of the same march.
LinearSolveReport solve_linearized(const BasicState& base, const SlabField& f,
                                   const BoundaryField& g, const SchemeParams& sp);

// Norm table of the solve at order m, with the implied constant of the tame
// bound (norm orders above the grid-supported cap are clamped).
struct NormTable {
  int m = 0;
  double w_m = 0.0;
  double psi_m = 0.0;     // (psi, D psi) in H^m
  double f_m = 0.0;
  double g_m1 = 0.0;      // g in H^{m+1}
  double base_m4 = 0.0;   // basic-state perturbation norm at order min(m+4, cap)
  double f_low = 0.0;     // low-order source norms entering the tame right side
  double g_low = 0.0;
  double tame_constant = 0.0;
};
NormTable energy_report(const BasicState& base, const LinearSolveReport& rep, const SlabField& f,
                        const BoundaryField& g, int m, int cap = 3);

// |integral(L_eps W . W* - W . L*_eps W*) - boundary pairing|: the
// summation-by-parts defect of the dual pairing.  W must vanish in the past,
// W* toward the final time.
double adjoint_identity_defect(const BasicState& base, const SlabField& W, const SlabField& Wstar,
                               double eps);

}  // namespace fbmhd
