#pragma once

#include "fbmhd/grid.hpp"

namespace fbmhd {

// Second-order finite differences: centered in the interior, one-sided
// 2nd-order at the x1 and t ends, periodic wrap in the tangential plane.
// Axis convention: 0 = t, 1 = x1, 2 = x2, 3 = x3.

// Derivative of one tangential plane of a slab field, written into out
// (n2*n3 doubles).
void slab_deriv_plane(const SlabField& f, int axis, int comp, int level, int i1, double* out);

// Whole-field derivative.
SlabField slab_deriv(const SlabField& f, int axis);

// In-plane periodic derivatives of a raw tangential plane.
void plane_d2(const double* u, int n2, int n3, double h2, double* out);
void plane_d3(const double* u, int n2, int n3, double h3, double* out);
// 3-point second differences (used by the fourth-order boundary smoothing
// term, which is their square).
void plane_d2_second(const double* u, int n2, int n3, double h2, double* out);
void plane_d3_second(const double* u, int n2, int n3, double h3, double* out);

// Time derivative of a boundary field level.
void bdry_dt_plane(const BoundaryField& f, int comp, int level, double* out);
BoundaryField bdry_deriv(const BoundaryField& f, int axis);  // axis in {0,2,3}

// Coefficients of the 3-point time stencil at `level` on a grid with L
// levels: df/dt ~ c[0]*f(l+o[0]) + c[1]*f(l+o[1]) + c[2]*f(l+o[2]).
struct TimeStencil {
  int offset[3];
  double coeff[3];
};
TimeStencil time_stencil(int level, int levels, double dt);

// Same along x1.
TimeStencil x1_stencil(int i1, int n1, double h1);

}  // namespace fbmhd
