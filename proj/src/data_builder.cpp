#include "fbmhd/data_builder.hpp"

#include <cmath>

#include "fbmhd/cutoffs.hpp"
#include "fbmhd/operators.hpp"
#include "fbmhd/rng.hpp"
#include "fbmhd/samples.hpp"

namespace fbmhd {

namespace {

// wall profile with unit j-th normal derivative and vanishing lower ones;
// identically polynomial near the wall so the one-sided stencils see it
// exactly
double wall_profile(double x1, int j) {
  double cut = 1.0 - smoothstep01((x1 - 0.8) / 1.2);
  double p = 1.0;
  for (int r = 0; r < j; ++r) p *= x1 / double(r + 1);
  return p * cut;
}

}  // namespace

CompatibleData build_compatible_data(const ThermoModel& eos, const SlabGrid& g,
                                     double surface_tension, double amplitude, uint64_t seed,
                                     int order) {
  require_domain(eos.p_stiff > 0.0,
                 "compatible free-surface data need the stiffened closure (eos.p_stiff > 0)");
  Rng rng(seed);
  CompatibleData out;
  out.phi0 = SpatialBoundary(g);
  out.U0 = SpatialField(g, 8);
  size_t np = g.points_plane();

  // low-mode interface of the requested amplitude
  double ph2 = rng.uniform(0.0, 6.28), ph3 = rng.uniform(0.0, 6.28);
  double two_pi = 6.283185307179586;
  for (int j = 0; j < g.n2; ++j)
    for (int k = 0; k < g.n3; ++k)
      out.phi0.at(j, k) =
          0.7 * std::cos(two_pi * g.x2(j) / g.tangential_extent + ph2) *
              std::cos(two_pi * g.x3(k) / g.tangential_extent + ph3) +
          0.3 * std::cos(2.0 * two_pi * g.x2(j) / g.tangential_extent);
  {
    double mx = out.phi0.max_abs();
    for (auto& v : out.phi0.data) v *= amplitude / mx;
  }

  // entropy perturbation away from the wall (exercises the thermodynamic
  // coupling without touching the boundary ladder at low orders)
  for (int i = 0; i < g.n1; ++i) {
    double w = smoothstep01((g.x1(i) - 0.3) / 0.7) * std::exp(-0.8 * g.x1(i));
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k)
        out.U0.at(kS, i, j, k) =
            0.5 * amplitude * w * std::cos(two_pi * g.x2(j) / g.tangential_extent);
  }

  // pressure trace from the curvature condition, carried inward
  std::vector<double> curv(np);
  mean_curvature_plane(out.phi0.plane(), g.n2, g.n3, g.h2(), g.h3(), curv.data());
  for (int i = 0; i < g.n1; ++i) {
    double w = 1.0 - smoothstep01(g.x1(i) / 1.5);
    for (size_t p = 0; p < np; ++p) out.U0.plane(kQ, i)[p] += w * surface_tension * curv[p];
  }

  PrimaryState ref = equilibrium_state(eos);
  auto residuals = [&](const SpatialField& U) {
    DataJet jet = time_derivatives(eos, ref, U, out.phi0, order);
    return compatibility_residuals(eos, jet, surface_tension);
  };

  // zero the higher orders with wall-profile corrections, one order at a
  // time: each pass measures the local response by probing and removes the
  // current residual; the cross-order and tangential couplings scale with
  // the data amplitude, so the sweeps contract geometrically
  for (int sweep = 0; sweep < 8; ++sweep) {
    double worst = 0.0;
    for (int j = 2; j <= order; ++j) {
      CompatReport cur = residuals(out.U0);
      double rmax = cur.max_residual[size_t(j)];
      worst = std::max(worst, rmax);
      if (rmax < 1e-12) continue;
      double pamp = std::max(10.0 * rmax, 1e-9);
      SpatialField probe = out.U0;
      for (int i = 0; i < g.n1; ++i) {
        double z = pamp * wall_profile(g.x1(i), j);
        for (size_t p = 0; p < np; ++p) probe.plane(kQ, i)[p] += z;
      }
      CompatReport pr = residuals(probe);
      for (int i = 0; i < g.n1; ++i) {
        double z = wall_profile(g.x1(i), j);
        double* dst = out.U0.plane(kQ, i);
        for (size_t p = 0; p < np; ++p) {
          double m = (pr.residual_planes[size_t(j)][p] - cur.residual_planes[size_t(j)][p]) / pamp;
          if (std::abs(m) < 1e-12) continue;
          dst[p] -= z * cur.residual_planes[size_t(j)][p] / m;
        }
      }
    }
    if (worst < 1e-12) break;
  }

  out.jet = time_derivatives(eos, ref, out.U0, out.phi0, order);
  out.report = compatibility_residuals(eos, out.jet, surface_tension);
  return out;
}

}  // namespace fbmhd
