#pragma once

#include <cstdint>

#include "fbmhd/compat.hpp"

namespace fbmhd {

// Initial data around the liquid equilibrium (q = 0 requires a stiffened
// closure) that satisfy the capillary compatibility ladder to the requested
// order:
//   - a low-mode interface profile of the given amplitude,
//   - the pressure trace solved from the curvature condition (order 0 exact),
//   - zero initial velocity and magnetic field (orders 0 and 1 exact, the
//     divergence and tangency constraints hold identically),
//   - higher orders zeroed by wall-profile pressure corrections x1^j g_j(x'),
//     each tuned by affine probing; the profiles leave all lower orders
//     untouched.
struct CompatibleData {
  SpatialField U0;       // perturbation from the reference state
  SpatialBoundary phi0;
  DataJet jet;
  CompatReport report;
};

CompatibleData build_compatible_data(const ThermoModel& eos, const SlabGrid& g,
                                     double surface_tension, double amplitude, uint64_t seed,
                                     int order);

}  // namespace fbmhd
