#pragma once

#include <array>
#include <vector>

#include "fbmhd/grid.hpp"

namespace fbmhd {

// Boundary-straightening lift.  For the interface function phi the lifted
// coordinate is Phi = x1 + chi(x1) phi(t,x'); a perturbation psi lifts to
// Psi = chi(x1) psi without the identity part.  All x1 dependence enters
// through the analytic cutoff chi, so mixed derivative planes commute
// exactly with the tangential/time stencils applied to the boundary data.
class Lift {
 public:
  Lift() = default;

  // requires |phi| <= 1/2 pointwise
  static Lift interface(const BoundaryField& phi);
  static Lift perturbation(const BoundaryField& psi);

  const BoundaryField& boundary() const { return phi_; }
  // stencil derivatives of the boundary data (time, x2, x3)
  const BoundaryField& boundary_dt() const { return dt_; }
  const BoundaryField& boundary_d2() const { return d2_; }
  const BoundaryField& boundary_d3() const { return d3_; }
  const SlabGrid& grid() const { return phi_.grid(); }
  bool has_identity() const { return identity_; }
  double max_amplitude() const { return amp_; }
  // lower bound on d1 Phi over the whole slab (1 for perturbation lifts)
  double min_d1() const { return identity_ ? 1.0 - (15.0 / 16.0) * amp_ : 0.0; }

  // Plane views for one (level, i1).  d = (d_t, d_1, d_2, d_3) of the lifted
  // function; d1d[a] = D_1 d[a].  Scratch is resized as needed and owns the
  // plane storage.
  struct Planes {
    const double* val;
    std::array<const double*, 4> d;
    std::array<const double*, 4> d1d;
  };
  Planes eval(int level, int i1, std::vector<double>& scratch, bool second = false) const;

  // Point values of (val, dPhi) -- convenience for matrix-level tests.
  std::array<double, 4> dphi_at(int level, int i1, int i2, int i3) const;
  double value_at(int level, int i1, int i2, int i3) const;

 private:
  Lift(const BoundaryField& phi, bool identity);

  BoundaryField phi_;
  BoundaryField dt_, d2_, d3_;  // stencil derivatives of the boundary data
  bool identity_ = false;
  double amp_ = 0.0;
};

}  // namespace fbmhd
