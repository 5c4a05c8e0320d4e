#pragma once

#include "fbmhd/eos.hpp"
#include "fbmhd/grid.hpp"
#include "fbmhd/linearized.hpp"
#include "fbmhd/rng.hpp"

namespace fbmhd {

// Seeded generators for the randomized suites.  Everything here is smooth
// (a few low tangential modes, polynomial time envelopes, cutoff-shaped x1
// profiles) so that second-order stencil errors stay small on coarse grids.

// Random state inside the hyperbolicity window (for matrix-level checks).
PrimaryState random_admissible_state(const ThermoModel& eos, Rng& rng);

// Lift slopes (d_t, d_1, d_2, d_3) with d_1 >= 1/2.
std::array<double, 4> random_lift_slopes(Rng& rng);

// Constant state with rho = 1 for the given closure (q = 1 - p_stiff).
PrimaryState equilibrium_state(const ThermoModel& eos);

// Smooth scalar boundary field with |values| <= amplitude.
BoundaryField sample_boundary(const SlabGrid& g, Rng& rng, double amplitude, int max_mode = 2,
                              bool vanish_past = false);

// Smooth slab field (ncomp components) with |values| <= amplitude.
SlabField sample_slab(const SlabGrid& g, int ncomp, Rng& rng, double amplitude, int max_mode = 2,
                      bool vanish_past = false);

// Equilibrium basic state (flat interface).
BasicState equilibrium_base(const ThermoModel& eos, double surface_tension, const SlabGrid& g);

// Random smooth basic state around the equilibrium whose traces are solved so
// that the boundary compatibility pair holds to round-off.
BasicState sample_basic_state(const ThermoModel& eos, double surface_tension, const SlabGrid& g,
                              Rng& rng, double amplitude);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fbmhd
