#pragma once

#include "fbmhd/grid.hpp"

namespace fbmhd {

// Weighted anisotropic calculus: D_*^alpha = d_t^{a0} (sigma d_1)^{a1}
// d_2^{a2} d_3^{a3} d_1^{a4}, applied right to left with the conormal weight
// multiplied in after each weighted normal derivative.

SlabField dstar_apply(const SlabField& u, const MultiIndex& alpha, int max_order = 8);

// Discrete L^2 over the slab and the stored time levels up to `level`
// (trapezoid in x1 and t, exact sums tangentially).  level < 0 means all.
double l2_spacetime(const SlabField& u, int level = -1);
double l2_boundary(const BoundaryField& u, int level = -1);
// L^2(Omega) of a single time level.
double l2_level(const SlabField& u, int level);

// Anisotropic space-time norm of order m: root of the sum of squared L^2
// norms of D_*^alpha u over all weights <= m.
double hstar_norm(const SlabField& u, int m, int level = -1);

// Plain space-time Sobolev norm of order m (all unweighted derivatives);
// used for the embedding comparisons.
double sobolev_norm(const SlabField& u, int m, int level = -1);

// Boundary Sobolev norm of order s: tangential part on the Fourier side with
// physical wavenumbers, time derivatives by stencils.
double boundary_sobolev_norm(const BoundaryField& psi, int s, int level = -1);

// sup over the slab of |u| and of all first derivatives (basic-state bound).
double sup_state_bound(const SlabField& u);

}  // namespace fbmhd
