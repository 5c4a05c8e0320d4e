#pragma once

#include <utility>
#include <vector>

#include "fbmhd/eos.hpp"
#include "fbmhd/grid.hpp"
#include "fbmhd/lift.hpp"

namespace fbmhd {

// Spatial (single-time) fields carrying initial data.
struct SpatialField {
  SlabGrid grid;
  int ncomp = 0;
  std::vector<double> data;

  SpatialField() = default;
  SpatialField(const SlabGrid& g, int nc)
      : grid(g), ncomp(nc), data(size_t(nc) * g.points_space(), 0.0) {}
  double* plane(int comp, int i1) {
    return data.data() + (size_t(comp) * size_t(grid.n1) + size_t(i1)) * grid.points_plane();
  }
  const double* plane(int comp, int i1) const {
    return data.data() + (size_t(comp) * size_t(grid.n1) + size_t(i1)) * grid.points_plane();
  }
  double& at(int comp, int i1, int i2, int i3) {
    return plane(comp, i1)[size_t(i2) * size_t(grid.n3) + size_t(i3)];
  }
  double at(int comp, int i1, int i2, int i3) const {
    return plane(comp, i1)[size_t(i2) * size_t(grid.n3) + size_t(i3)];
  }
};

struct SpatialBoundary {
  SlabGrid grid;
  std::vector<double> data;

  SpatialBoundary() = default;
  explicit SpatialBoundary(const SlabGrid& g) : grid(g), data(g.points_plane(), 0.0) {}
  double* plane() { return data.data(); }
  const double* plane() const { return data.data(); }
  double& at(int i2, int i3) { return data[size_t(i2) * size_t(grid.n3) + size_t(i3)]; }
  double at(int i2, int i3) const { return data[size_t(i2) * size_t(grid.n3) + size_t(i3)]; }
  double max_abs() const;
};

// Time-derivative ladder of the initial data: level j holds the j-th time
// derivative at t = 0 of the perturbation (U - reference) and of the
// interface function (derivative convention, not divided by j!).
struct DataJet {
  int order = 0;
  SlabGrid grid;
  PrimaryState reference;
  std::vector<SpatialField> u;      // order+1 entries, 8 components each
  std::vector<SpatialBoundary> phi;  // order+1 entries
  double m0 = 0.0;                  // magnitude diagnostic of the data

  SpatialField& level(int j) { return u[size_t(j)]; }
  const SpatialField& level(int j) const { return u[size_t(j)]; }
};

// Generates the jet by transporting the data through the interior equations
// and the kinematic boundary identity, order by order (series arithmetic with
// exact combinatorics).  Requires |phi0| <= 1/4 and admissible U0.
DataJet time_derivatives(const ThermoModel& eos, const PrimaryState& reference,
                         const SpatialField& U0, const SpatialBoundary& phi0, int order);

// Defect of the pressure trace against the time-derivative ladder of the
// capillary boundary condition; entry j is the max-abs residual at order j.
struct CompatReport {
  std::vector<double> max_residual;
  std::vector<std::vector<double>> residual_planes;  // boundary planes per order
};
CompatReport compatibility_residuals(const ThermoModel& eos, const DataJet& jet,
                                     double surface_tension);

// Taylor-in-time polynomial of the jet with a smooth cutoff equal to 1 near
// t = 0, sampled on the full grid (pre-history included).  Rejects data whose
// compatibility residuals exceed tol, reporting the first failing order.
struct ApproximateSolution {
  SlabField U;        // 8 components
  BoundaryField phi;  // interface history
};
ApproximateSolution build_approximate_solution(const ThermoModel& eos, const DataJet& jet,
                                               double surface_tension, double tol);

// Interior forcing absorbed from the initial data: minus the nonlinear
// residual of the approximate solution for t > 0, zero for t <= 0.
SlabField approximate_forcing(const ThermoModel& eos, const ApproximateSolution& app);

}  // namespace fbmhd
