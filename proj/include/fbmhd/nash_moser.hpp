#pragma once

#include <string>
#include <vector>

#include "fbmhd/compat.hpp"
#include "fbmhd/linear_solver.hpp"
#include "fbmhd/smoothing.hpp"

namespace fbmhd {

struct IterationParams {
  double theta0 = 4.0;
  double alpha = 12.0;
  double alpha_tilde = 15.0;  // alpha + 3
  double eps_hyp = 0.1;       // smallness constant of the hypothesis monitor
  int max_steps = 8;
  double tol_interior = 1e-10;
  double tol_boundary = 1e-10;
  double smoothing_width = 1.0;
  std::vector<double> monitor_orders = {1.0, 2.0};
  SchemeParams scheme;
};

// Per-step record of the iteration: schedule values, update and residual
// magnitudes, the error-term split and the hypothesis-monitor ratios.
struct StepRecord {
  int n = 0;
  double theta = 0.0;
  double delta = 0.0;        // theta_{n+1} - theta_n
  double dv_h1 = 0.0;        // first-order norm of the update
  double dpsi = 0.0;         // boundary update magnitude
  double residual_int = 0.0; // interior defect against the absorbed forcing
  double residual_bdy = 0.0;
  double e_quad = 0.0;       // quadratic error
  double e_sub1 = 0.0;       // first substitution error
  double e_sub2 = 0.0;       // second substitution error
  double e_last = 0.0;       // shift-term error
  double et_quad = 0.0, et_sub1 = 0.0, et_sub2 = 0.0;  // boundary split
  double source_defect = 0.0;   // recurrence bookkeeping check
  double decomp_defect = 0.0;   // error-split identity check
  double mod_bas1b = 0.0;       // compatibility defect of the modified state
  std::vector<double> hyp_ratio;  // |dV|_s theta^{alpha+1-s} / Delta per order
};

struct IterationResult {
  bool converged = false;
  bool aborted = false;
  std::string abort_reason;
  std::vector<StepRecord> steps;
  SlabField V;        // final perturbation
  BoundaryField psi;  // final interface perturbation
  double final_residual_int = 0.0;
  double final_residual_bdy = 0.0;
};

class NashMoserIteration {
 public:
  NashMoserIteration(const ThermoModel& eos, double surface_tension,
                     ApproximateSolution approx, SlabField forcing, IterationParams params);

  // Executes steps until the residuals fall under the tolerances, the step
  // budget runs out, or divergence is detected (three consecutive growths).
  IterationResult run();

  // One step of the scheme; exposed for the step-level tests.
  StepRecord step();

  const SlabField& V() const { return V_; }
  const BoundaryField& psi() const { return psi_; }
  int n() const { return n_; }
  double theta(int k) const { return std::sqrt(theta0_ * theta0_ + double(k)); }

  // Modified state: smoothed tangential data with the wall traces solved so
  // that the boundary compatibility pair of the summed state matches the
  // approximate solution's own defect (vanishing in the past is preserved).
  struct ModifiedState {
    SlabField V;
    BoundaryField psi;
  };
  ModifiedState modified_state() const;

  // interior and boundary residuals of the current iterate
  double residual_interior() const;
  double residual_boundary() const;

 private:
  BasicState make_base(const ModifiedState& ms) const;

  ThermoModel eos_;
  double s_ = 1.0;
  ApproximateSolution app_;
  SlabField fa_;           // absorbed forcing
  BoundaryField ga_;       // boundary defect of the approximate solution (target)
  IterationParams prm_;
  SmoothingFamily smoother_;
  double theta0_;

  int n_ = 0;
  SlabField V_;
  BoundaryField psi_;
  SlabField Esum_;         // accumulated interior errors
  BoundaryField Etsum_;    // accumulated boundary errors
  SlabField fsum_;         // accumulated achieved interior sources
  BoundaryField gsum_;     // accumulated achieved boundary sources
  std::vector<StepRecord> records_;
};

}  // namespace fbmhd
