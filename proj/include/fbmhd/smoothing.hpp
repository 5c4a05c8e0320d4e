#pragma once

#include "fbmhd/grid.hpp"

namespace fbmhd {

// One-parameter smoothing family acting on fields that vanish in the past:
// a sharp tangential Fourier cutoff at wavenumber theta composed with causal
// (backward-looking) moment-corrected mollifiers of width ~1/theta in time
// and in x1 (one-sided at the wall).  Zero pre-history is preserved exactly;
// on a fixed grid the family degenerates to the identity as theta grows past
// the grid scales.
class SmoothingFamily {
 public:
  explicit SmoothingFamily(double width_factor = 1.0) : width_(width_factor) {}

  SlabField apply(const SlabField& u, double theta) const;
  BoundaryField apply(const BoundaryField& u, double theta) const;

  // diagnostics for the property checks
  bool time_active(const SlabGrid& g, double theta) const;
  bool x1_active(const SlabGrid& g, double theta) const;
  bool tangential_active(const SlabGrid& g, double theta) const;

 private:
  double width_;
};

}  // namespace fbmhd
