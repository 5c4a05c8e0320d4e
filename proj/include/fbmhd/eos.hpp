#pragma once

#include "fbmhd/linalg.hpp"

namespace fbmhd {

class Config;

// Primary unknowns U = (q, v, H, S): total pressure, velocity, magnetic
// field, entropy.  Component ordering is fixed project-wide.
struct PrimaryState {
  double q = 0.0;
  Vec3 v{};
  Vec3 H{};
  double S = 0.0;

  Vec8 as_vec() const { return {q, v[0], v[1], v[2], H[0], H[1], H[2], S}; }
  static PrimaryState from_vec(const Vec8& u) {
    return PrimaryState{u[0], {u[1], u[2], u[3]}, {u[4], u[5], u[6]}, u[7]};
  }
};

// Component indices into a PrimaryState vector.
enum : int { kQ = 0, kV1 = 1, kV2 = 2, kV3 = 3, kH1 = 4, kH2 = 5, kH3 = 6, kS = 7 };

// Stiffened gamma-law closure p + p_stiff = exp(S/entropy_scale) rho^gamma.
// With p_stiff = 0 this is the plain gamma law; a positive p_stiff gives a
// liquid-like branch where the fluid pressure may cross zero while the
// density stays inside the hyperbolicity window.
struct ThermoModel {
  double gamma = 5.0 / 3.0;
  double rho_floor = 0.1;   // rho_*
  double rho_ceil = 10.0;   // rho^*
  double entropy_scale = 1.0;
  double p_stiff = 0.0;

  static ThermoModel from_config(const Config& cfg);

  // rho(p,S); rejects p + p_stiff <= 0 as outside the EOS domain.
  double density(double p, double S) const;
  // a(p,S) = sqrt(dp/drho) = sqrt(gamma (p + p_stiff) / rho)
  double sound_speed(double p, double S) const;
  // forward map p(rho,S)
  double pressure(double rho, double S) const;

  // Fluid pressure recovered from a primary state, p = q - |H|^2/2.
  double fluid_pressure(const PrimaryState& u) const {
    return u.q - 0.5 * dot3(u.H, u.H);
  }
  double density_of(const PrimaryState& u) const { return density(fluid_pressure(u), u.S); }

  // min(rho - rho_*, rho^* - rho); positive iff the state is admissible.
  // States outside the EOS domain get a margin of -infinity rather than an
  // exception so that callers can treat violation as a sign.
  double hyperbolicity_margin(const PrimaryState& u) const;

  bool admissible(const PrimaryState& u) const { return hyperbolicity_margin(u) > 0.0; }
};

}  // namespace fbmhd
