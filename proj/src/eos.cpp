#include "fbmhd/eos.hpp"

#include <cmath>
#include <limits>

#include "fbmhd/common.hpp"
#include "fbmhd/config.hpp"

namespace fbmhd {

ThermoModel ThermoModel::from_config(const Config& cfg) {
  ThermoModel m;
  m.gamma = cfg.get_double("eos.gamma", m.gamma);
  m.rho_floor = cfg.get_double("eos.rho_floor", m.rho_floor);
  m.rho_ceil = cfg.get_double("eos.rho_ceil", m.rho_ceil);
  m.entropy_scale = cfg.get_double("eos.entropy_scale", m.entropy_scale);
  m.p_stiff = cfg.get_double("eos.p_stiff", m.p_stiff);
  require_domain(m.gamma > 1.0, "eos.gamma must exceed 1");
  require_domain(m.rho_floor > 0.0 && m.rho_floor < m.rho_ceil,
                 "eos density window must satisfy 0 < rho_floor < rho_ceil");
  require_domain(m.p_stiff >= 0.0, "eos.p_stiff must be nonnegative");
  return m;
}

double ThermoModel::density(double p, double S) const {
  double pe = p + p_stiff;
  require_domain(pe > 0.0 && std::isfinite(pe), "outside-EOS-domain: p + p_stiff <= 0");
  return std::pow(pe * std::exp(-S / entropy_scale), 1.0 / gamma);
}

double ThermoModel::sound_speed(double p, double S) const {
  double rho = density(p, S);
  return std::sqrt(gamma * (p + p_stiff) / rho);
}

double ThermoModel::pressure(double rho, double S) const {
  require_domain(rho > 0.0, "outside-EOS-domain: rho <= 0");
  return std::exp(S / entropy_scale) * std::pow(rho, gamma) - p_stiff;
}

double ThermoModel::hyperbolicity_margin(const PrimaryState& u) const {
  double pe = fluid_pressure(u) + p_stiff;
  if (!(pe > 0.0) || !std::isfinite(pe)) return -std::numeric_limits<double>::infinity();
  double rho = std::pow(pe * std::exp(-u.S / entropy_scale), 1.0 / gamma);
  return std::min(rho - rho_floor, rho_ceil - rho);
}

}  // namespace fbmhd
