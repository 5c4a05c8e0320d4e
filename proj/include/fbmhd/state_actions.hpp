#pragma once

#include <array>

namespace fbmhd {

// Pointwise actions of the symmetric coefficient matrices, generic over the
// scalar type: plain doubles in the field operators, truncated time series in
// the initial-data transport.  T needs +, -, *, / with itself and double.

template <class T>
struct ActionCoefs {
  T c;    // 1/(rho a^2)
  T rho;
  std::array<T, 3> v;
  std::array<T, 3> H;
};

template <class T>
std::array<T, 8> act_a0(const ActionCoefs<T>& pc, const std::array<T, 8>& x) {
  T hx = pc.H[0] * x[4] + pc.H[1] * x[5] + pc.H[2] * x[6];
  T w = pc.c * (hx - x[0]);
  return {pc.c * (x[0] - hx), pc.rho * x[1],      pc.rho * x[2],      pc.rho * x[3],
          x[4] + pc.H[0] * w, x[5] + pc.H[1] * w, x[6] + pc.H[2] * w, x[7]};
}

template <class T>
std::array<T, 8> act_ai(const ActionCoefs<T>& pc, int axis, const std::array<T, 8>& x) {
  T vm = pc.v[size_t(axis - 1)];
  T Hm = pc.H[size_t(axis - 1)];
  T hx = pc.H[0] * x[4] + pc.H[1] * x[5] + pc.H[2] * x[6];
  T w = vm * pc.c * (hx - x[0]);
  std::array<T, 8> y = {vm * pc.c * (x[0] - hx) + x[size_t(axis)],
                        pc.rho * vm * x[1] - Hm * x[4],
                        pc.rho * vm * x[2] - Hm * x[5],
                        pc.rho * vm * x[3] - Hm * x[6],
                        pc.H[0] * w + vm * x[4] - Hm * x[1],
                        pc.H[1] * w + vm * x[5] - Hm * x[2],
                        pc.H[2] * w + vm * x[6] - Hm * x[3],
                        vm * x[7]};
  y[size_t(axis)] = y[size_t(axis)] + x[0];
  return y;
}

template <class T>
std::array<T, 8> act_a0inv(const ActionCoefs<T>& pc, const std::array<T, 8>& x) {
  T hx = pc.H[0] * x[4] + pc.H[1] * x[5] + pc.H[2] * x[6];
  T h2 = pc.H[0] * pc.H[0] + pc.H[1] * pc.H[1] + pc.H[2] * pc.H[2];
  T rinv = 1.0 / pc.rho;
  return {(1.0 / pc.c + h2) * x[0] + hx,
          rinv * x[1],
          rinv * x[2],
          rinv * x[3],
          pc.H[0] * x[0] + x[4],
          pc.H[1] * x[0] + x[5],
          pc.H[2] * x[0] + x[6],
          x[7]};
}

template <class T>
std::array<T, 8> act_a1_tilde(const ActionCoefs<T>& pc, const std::array<T, 4>& dphi,
                              const std::array<T, 8>& x) {
  std::array<T, 8> y = act_ai(pc, 1, x);
  std::array<T, 8> t0 = act_a0(pc, x);
  std::array<T, 8> t2 = act_ai(pc, 2, x);
  std::array<T, 8> t3 = act_ai(pc, 3, x);
  T inv = 1.0 / dphi[1];
  for (size_t i = 0; i < 8; ++i)
    y[i] = (y[i] - dphi[0] * t0[i] - dphi[2] * t2[i] - dphi[3] * t3[i]) * inv;
  return y;
}

}  // namespace fbmhd
