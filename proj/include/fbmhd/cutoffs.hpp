#pragma once

namespace fbmhd {

// Quintic smoothstep: 0 at t<=0, 1 at t>=1, C^2 with zero slope and curvature
// at both ends.  Max slope 15/8.
double smoothstep01(double t);
double smoothstep01_deriv(double t);

// Boundary cutoff chi: identically 1 on [0,1], 0 on [3,inf), monotone C^2
// blend on (1,3).  The transition is spread over length 2 so that
// |chi'| <= 15/16 < 1, which keeps every lift x1 + chi(x1)*phi monotone in x1
// for |phi| <= 1/2.
double chi(double x1);
double chi_deriv(double x1);
double chi_second(double x1);

// Conormal weight sigma: exactly x1 on [0,1/2], exactly 1 on [1,inf),
// increasing C^2 quintic Hermite blend between.
double sigma(double x1);
double sigma_deriv(double x1);

// Time cutoff for polynomial-in-time extensions: 1 for t <= t_hold, quintic
// decay to 0 at t >= t_hold + width.
double time_cutoff(double t, double t_hold, double width);
double time_cutoff_deriv(double t, double t_hold, double width);

}  // namespace fbmhd
