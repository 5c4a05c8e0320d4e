#pragma once

#include <cstddef>
#include <string>

namespace fbmhd::kern {

// Pointwise inner-loop kernels over contiguous runs of grid points.  Every
// kernel has a scalar reference implementation and (on x86-64) an AVX2
// variant; the active backend is picked at runtime and can be forced for
// equivalence testing.  All pointers may alias only as documented (y never
// aliases inputs).
struct Ops {
  // y[i] += a * x[i]
  void (*axpy)(size_t n, double a, const double* x, double* y);
  // y[i] = a * x[i]
  void (*scal)(size_t n, double a, const double* x, double* y);
  // y[i] = a * (xp[i] - xm[i])      (centered-difference core)
  void (*sub_scale)(size_t n, double a, const double* xp, const double* xm, double* y);
  // y[i] = a0 x0[i] + a1 x1[i] + a2 x2[i]   (one-sided difference core)
  void (*comb3)(size_t n, double a0, const double* x0, double a1, const double* x1, double a2,
                const double* x2, double* y);
  // y[i] += s * w[i] * x[i]
  void (*wacc)(size_t n, double s, const double* w, const double* x, double* y);
  // y[i] *= w[i]
  void (*wmul)(size_t n, const double* w, double* y);
  double (*dot)(size_t n, const double* x, const double* y);
  double (*sumsq)(size_t n, const double* x);

  // Y = (+=) A0(U) X with A0 the symmetric temporal coefficient matrix:
  // state enters via c = 1/(rho a^2), rho and the magnetic field planes.
  void (*matvec_a0)(size_t n, const double* c, const double* rho, const double* H1,
                    const double* H2, const double* H3, const double* const X[8],
                    double* const Y[8], bool add);
  // Y = (+=) A_axis(U) X, axis in {1,2,3}; vi/Hi are the axis components.
  void (*matvec_ai)(size_t n, int axis, const double* c, const double* rho, const double* vi,
                    const double* Hi, const double* H1, const double* H2, const double* H3,
                    const double* const X[8], double* const Y[8], bool add);
  // Y = A0(U)^{-1} X (closed-form inverse).
  void (*a0inv)(size_t n, const double* c, const double* rho, const double* H1, const double* H2,
                const double* H3, const double* const X[8], double* const Y[8]);
  // Y = (+=) M X with a dense per-point 8x8 matrix stored as 64 planes
  // (row-major: M[8*r + col]).
  void (*matvec8)(size_t n, const double* const M[64], const double* const X[8],
                  double* const Y[8], bool add);
};

enum class Backend { scalar, avx2 };

// Active kernel table.  Defaults to the best backend the CPU supports.
const Ops& ops();
Backend active_backend();
bool set_backend(Backend b);           // false if unsupported on this CPU
bool set_backend(const std::string&);  // "scalar" | "avx2" | "auto"
std::string backend_name();

extern const Ops scalar_ops;
const Ops* avx2_ops_or_null();

}  // namespace fbmhd::kern
