#include "fbmhd/cutoffs.hpp"

namespace fbmhd {

double smoothstep01(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep01_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double u = t * (1.0 - t);
  return 30.0 * u * u;
}

double chi(double x1) {
  if (x1 <= 1.0) return 1.0;
  if (x1 >= 3.0) return 0.0;
  return 1.0 - smoothstep01(0.5 * (x1 - 1.0));
}

double chi_deriv(double x1) {
  if (x1 <= 1.0 || x1 >= 3.0) return 0.0;
  return -0.5 * smoothstep01_deriv(0.5 * (x1 - 1.0));
}

double chi_second(double x1) {
  if (x1 <= 1.0 || x1 >= 3.0) return 0.0;
  double t = 0.5 * (x1 - 1.0);
  // second derivative of the quintic smoothstep: 60 t (1 - t)(1 - 2t)
  return -0.25 * 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

namespace {
// Quintic on s in [0,1] with h(0)=1/2, h(1)=1, dh/dx(0)=1, dh/dx(1)=0 and zero
// second x-derivative at both ends (x = 1/2 + s/2).
inline double sigma_blend(double s) {
  return 0.5 + 0.5 * s + s * s * s * (2.0 + s * (-3.5 + 1.5 * s));
}
inline double sigma_blend_deriv(double s) {
  return 0.5 + s * s * (6.0 + s * (-14.0 + 7.5 * s));
}
}  // namespace

double sigma(double x1) {
  if (x1 <= 0.5) return x1;
  if (x1 >= 1.0) return 1.0;
  return sigma_blend(2.0 * (x1 - 0.5));
}

double sigma_deriv(double x1) {
  if (x1 <= 0.5) return 1.0;
  if (x1 >= 1.0) return 0.0;
  return 2.0 * sigma_blend_deriv(2.0 * (x1 - 0.5));
}

double time_cutoff(double t, double t_hold, double width) {
  return 1.0 - smoothstep01((t - t_hold) / width);
}

double time_cutoff_deriv(double t, double t_hold, double width) {
  return -smoothstep01_deriv((t - t_hold) / width) / width;
}

}  // namespace fbmhd
