#pragma once

#include "fbmhd/eos.hpp"
#include "fbmhd/grid.hpp"
#include "fbmhd/lift.hpp"

namespace fbmhd {

// Interior operator L(U,Phi)U of the straightened problem: the temporal
// coefficient matrix times D_t U plus the straightened normal flux times
// D_1 U plus the tangential fluxes.  U must be admissible everywhere.
SlabField nonlinear_interior_residual(const ThermoModel& eos, const SlabField& U,
                                      const Lift& interface);

// D . ( D phi / sqrt(1 + |D phi|^2) ), per level (twice the mean curvature).
BoundaryField mean_curvature(const BoundaryField& phi);
void mean_curvature_plane(const double* phi, int n2, int n3, double h2, double h3, double* out);

// Same composite stencil evaluated at the center of a non-periodic patch of
// size (2r+1)x(2r+1); used to exercise polynomial test functions that do not
// fit on the torus.
double mean_curvature_patch(const std::vector<double>& patch, int half_width, double h2,
                            double h3);

// Two-component boundary operator: (d_t phi - v.N, q - s * curvature(phi))
// evaluated on the trace x1 = 0.
BoundaryField boundary_residual(const SlabField& U, const Lift& interface,
                                double surface_tension);

// (interior div^Phi H, boundary H.N) pair.
struct ConstraintResiduals {
  SlabField interior;    // 1 comp
  BoundaryField boundary;  // 1 comp
};
ConstraintResiduals constraint_residuals(const SlabField& U, const Lift& interface);

// Straightened derivatives: idx 0 -> d_t^Phi, 1 -> d_1^Phi, 2,3 -> d_i^Phi.
SlabField partial_phi(const SlabField& u, const Lift& interface, int idx);

// d f(xi)[zeta] with f(xi) = xi / sqrt(1+|xi|^2): first variation of the
// normalized tangential gradient, shared by the linearized boundary
// operators.  Arrays are tangential planes; out2/out3 receive the vector
// components.
void dfrak_planes(size_t n, const double* xi2, const double* xi3, const double* z2,
                  const double* z3, double* out2, double* out3);

}  // namespace fbmhd
