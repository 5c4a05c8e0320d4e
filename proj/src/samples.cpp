#include "fbmhd/samples.hpp"

#include <cmath>

#include "fbmhd/cutoffs.hpp"
#include "fbmhd/stencil.hpp"

namespace fbmhd {

PrimaryState random_admissible_state(const ThermoModel& eos, Rng& rng) {
  double span = eos.rho_ceil - eos.rho_floor;
  double rho = rng.uniform(eos.rho_floor + 0.05 * span, eos.rho_ceil - 0.05 * span);
  double S = rng.uniform(-0.5, 0.5);
  PrimaryState u;
  u.S = S;
  for (int i = 0; i < 3; ++i) {
    u.v[size_t(i)] = rng.uniform(-1.0, 1.0);
    u.H[size_t(i)] = rng.uniform(-1.0, 1.0);
  }
  u.q = eos.pressure(rho, S) + 0.5 * dot3(u.H, u.H);
  return u;
}

std::array<double, 4> random_lift_slopes(Rng& rng) {
  return {rng.uniform(-0.4, 0.4), rng.uniform(0.55, 1.5), rng.uniform(-0.4, 0.4),
          rng.uniform(-0.4, 0.4)};
}

PrimaryState equilibrium_state(const ThermoModel& eos) {
  PrimaryState u;
  u.q = eos.pressure(1.0, 0.0);
  return u;
}

namespace {

struct ModeSet {
  struct Mode {
    int m2, m3;
    double amp, phase2, phase3;
    double c0, c1, c2;  // time polynomial (in t/T)
  };
  std::vector<Mode> modes;
  bool zero_past = false;

  ModeSet(const SlabGrid& g, Rng& rng, int max_mode, bool vanish_past) : zero_past(vanish_past) {
    int count = 3;
    for (int n = 0; n < count; ++n) {
      Mode m;
      m.m2 = rng.uniform_int(0, max_mode);
      m.m3 = rng.uniform_int(0, max_mode);
      if (m.m2 == 0 && m.m3 == 0) m.m2 = 1;
      m.amp = rng.uniform(0.3, 1.0);
      m.phase2 = rng.uniform(0.0, 6.283185307179586);
      m.phase3 = rng.uniform(0.0, 6.283185307179586);
      m.c0 = vanish_past ? 0.0 : rng.uniform(-1.0, 1.0);
      m.c1 = rng.uniform(-1.0, 1.0);
      m.c2 = rng.uniform(-1.0, 1.0);
      modes.push_back(m);
    }
    (void)g;
  }

  double eval(const SlabGrid& g, int level, int j, int k) const {
    double t = g.time(level) / g.t_final;
    if (zero_past && t <= 0.0) return 0.0;
    double env = zero_past ? t * t : 1.0;  // C^1 onset at t = 0
    double v = 0.0;
    double two_pi = 6.283185307179586;
    for (const auto& m : modes) {
      double a2 = two_pi * m.m2 * g.x2(j) / g.tangential_extent + m.phase2;
      double a3 = two_pi * m.m3 * g.x3(k) / g.tangential_extent + m.phase3;
      v += m.amp * std::cos(a2) * std::cos(a3) * (m.c0 + m.c1 * t + m.c2 * t * t);
    }
    return env * v;
  }
};

double normalize_amp(double current_max, double target) {
  return current_max > 0.0 ? target / current_max : 0.0;
}

}  // namespace

BoundaryField sample_boundary(const SlabGrid& g, Rng& rng, double amplitude, int max_mode,
                              bool vanish_past) {
  ModeSet ms(g, rng, max_mode, vanish_past);
  BoundaryField f(g, 1);
  for (int l = 0; l < g.levels(); ++l)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) f.at(0, l, j, k) = ms.eval(g, l, j, k);
  double s = normalize_amp(f.max_abs(), amplitude);
  scale(f, s);
  return f;
}

SlabField sample_slab(const SlabGrid& g, int ncomp, Rng& rng, double amplitude, int max_mode,
                      bool vanish_past) {
  SlabField f(g, ncomp);
  for (int comp = 0; comp < ncomp; ++comp) {
    ModeSet ms(g, rng, max_mode, vanish_past);
    double decay = rng.uniform(0.5, 1.5);
    for (int l = 0; l < g.levels(); ++l)
      for (int i = 0; i < g.n1; ++i) {
        double w = std::exp(-decay * g.x1(i));
        for (int j = 0; j < g.n2; ++j)
          for (int k = 0; k < g.n3; ++k) f.at(comp, l, i, j, k) = w * ms.eval(g, l, j, k);
      }
  }
  double s = normalize_amp(max_abs(f), amplitude);
  scale(f, s);
  return f;
}

BasicState equilibrium_base(const ThermoModel& eos, double surface_tension, const SlabGrid& g) {
  SlabField U(g, 8);
  PrimaryState ubar = equilibrium_state(eos);
  Vec8 u = ubar.as_vec();
  for (int comp = 0; comp < 8; ++comp)
    for (int l = 0; l < g.levels(); ++l)
      for (int i = 0; i < g.n1; ++i) {
        double* p = U.plane(comp, l, i);
        for (size_t q = 0; q < g.points_plane(); ++q) p[q] = u[size_t(comp)];
      }
  return BasicState::make(eos, surface_tension, std::move(U), BoundaryField(g, 1), 10.0);
}

BasicState sample_basic_state(const ThermoModel& eos, double surface_tension, const SlabGrid& g,
                              Rng& rng, double amplitude) {
  BoundaryField phi = sample_boundary(g, rng, amplitude);
  SlabField U = sample_slab(g, 8, rng, amplitude);
  PrimaryState ubar = equilibrium_state(eos);
  Vec8 ub = ubar.as_vec();
  for (int comp = 0; comp < 8; ++comp)
    for (int l = 0; l < g.levels(); ++l)
      for (int i = 0; i < g.n1; ++i) {
        double* p = U.plane(comp, l, i);
        for (size_t q = 0; q < g.points_plane(); ++q) p[q] += ub[size_t(comp)];
      }

  // Solve the traces of v1 and H1 from the boundary pair with the stencils
  // the compatibility check uses, and blend the required trace into the
  // interior with a cutoff profile.
  size_t np = g.points_plane();
  std::vector<double> dtphi(np), d2phi(np), d3phi(np);
  for (int l = 0; l < g.levels(); ++l) {
    bdry_dt_plane(phi, 0, l, dtphi.data());
    plane_d2(phi.level_data(0, l), g.n2, g.n3, g.h2(), d2phi.data());
    plane_d3(phi.level_data(0, l), g.n2, g.n3, g.h3(), d3phi.data());
    const double* v2 = U.plane(kV2, l, 0);
    const double* v3 = U.plane(kV3, l, 0);
    const double* H2 = U.plane(kH2, l, 0);
    const double* H3 = U.plane(kH3, l, 0);
    for (int i = 0; i < g.n1; ++i) {
      double e = 1.0 - smoothstep01(g.x1(i) / 1.5);
      double* v1 = U.plane(kV1, l, i);
      double* H1 = U.plane(kH1, l, i);
      for (size_t p = 0; p < np; ++p) {
        double vneed = dtphi[p] + v2[p] * d2phi[p] + v3[p] * d3phi[p];
        double hneed = H2[p] * d2phi[p] + H3[p] * d3phi[p];
        v1[p] = (1.0 - e) * v1[p] + e * vneed;
        H1[p] = (1.0 - e) * H1[p] + e * hneed;
      }
    }
  }
  return BasicState::make(eos, surface_tension, std::move(U), phi, 10.0);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

}  // namespace fbmhd
