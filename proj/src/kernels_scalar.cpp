#include "fbmhd/kernels.hpp"

// Reference implementations.  These define the semantics; the SIMD variants
// must match them to round-off (FMA contraction is the only allowed
// difference, covered by the equivalence-test tolerance).

namespace fbmhd::kern {
namespace {

void axpy_s(size_t n, double a, const double* x, double* y) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_s(size_t n, double a, const double* x, double* y) {
  for (size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

void sub_scale_s(size_t n, double a, const double* xp, const double* xm, double* y) {
  for (size_t i = 0; i < n; ++i) y[i] = a * (xp[i] - xm[i]);
}

void comb3_s(size_t n, double a0, const double* x0, double a1, const double* x1, double a2,
             const double* x2, double* y) {
  for (size_t i = 0; i < n; ++i) y[i] = a0 * x0[i] + a1 * x1[i] + a2 * x2[i];
}

void wacc_s(size_t n, double s, const double* w, const double* x, double* y) {
  for (size_t i = 0; i < n; ++i) y[i] += s * w[i] * x[i];
}

void wmul_s(size_t n, const double* w, double* y) {
  for (size_t i = 0; i < n; ++i) y[i] *= w[i];
}

double dot_s(size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sumsq_s(size_t n, const double* x) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void matvec_a0_s(size_t n, const double* c, const double* rho, const double* H1, const double* H2,
                 const double* H3, const double* const X[8], double* const Y[8], bool add) {
  for (size_t i = 0; i < n; ++i) {
    double x0 = X[0][i], xv1 = X[1][i], xv2 = X[2][i], xv3 = X[3][i];
    double xh1 = X[4][i], xh2 = X[5][i], xh3 = X[6][i], xs = X[7][i];
    double h1 = H1[i], h2 = H2[i], h3 = H3[i];
    double hx = h1 * xh1 + h2 * xh2 + h3 * xh3;
    double ci = c[i], ri = rho[i];
    double y0 = ci * (x0 - hx);
    double w = ci * (hx - x0);
    if (add) {
      Y[0][i] += y0;
      Y[1][i] += ri * xv1;
      Y[2][i] += ri * xv2;
      Y[3][i] += ri * xv3;
      Y[4][i] += xh1 + h1 * w;
      Y[5][i] += xh2 + h2 * w;
      Y[6][i] += xh3 + h3 * w;
      Y[7][i] += xs;
    } else {
      Y[0][i] = y0;
      Y[1][i] = ri * xv1;
      Y[2][i] = ri * xv2;
      Y[3][i] = ri * xv3;
      Y[4][i] = xh1 + h1 * w;
      Y[5][i] = xh2 + h2 * w;
      Y[6][i] = xh3 + h3 * w;
      Y[7][i] = xs;
    }
  }
}

void matvec_ai_s(size_t n, int axis, const double* c, const double* rho, const double* vi,
                 const double* Hi, const double* H1, const double* H2, const double* H3,
                 const double* const X[8], double* const Y[8], bool add) {
  size_t va = size_t(axis);  // component index of v_axis in the 8-vector
  for (size_t i = 0; i < n; ++i) {
    double x0 = X[0][i], xv1 = X[1][i], xv2 = X[2][i], xv3 = X[3][i];
    double xh1 = X[4][i], xh2 = X[5][i], xh3 = X[6][i], xs = X[7][i];
    double h1 = H1[i], h2 = H2[i], h3 = H3[i];
    double hx = h1 * xh1 + h2 * xh2 + h3 * xh3;
    double ci = c[i], ri = rho[i], vv = vi[i], hh = Hi[i];
    double y0 = vv * ci * (x0 - hx) + X[va][i];
    double w = vv * ci * (hx - x0);
    double yv1 = ri * vv * xv1 - hh * xh1;
    double yv2 = ri * vv * xv2 - hh * xh2;
    double yv3 = ri * vv * xv3 - hh * xh3;
    double yh1 = -hh * xv1 + vv * xh1 + h1 * w;
    double yh2 = -hh * xv2 + vv * xh2 + h2 * w;
    double yh3 = -hh * xv3 + vv * xh3 + h3 * w;
    double ys = vv * xs;
    if (add) {
      Y[0][i] += y0;
      Y[1][i] += yv1;
      Y[2][i] += yv2;
      Y[3][i] += yv3;
      Y[va][i] += x0;
      Y[4][i] += yh1;
      Y[5][i] += yh2;
      Y[6][i] += yh3;
      Y[7][i] += ys;
    } else {
      Y[0][i] = y0;
      Y[1][i] = yv1;
      Y[2][i] = yv2;
      Y[3][i] = yv3;
      Y[va][i] += x0;
      Y[4][i] = yh1;
      Y[5][i] = yh2;
      Y[6][i] = yh3;
      Y[7][i] = ys;
    }
  }
}

void a0inv_s(size_t n, const double* c, const double* rho, const double* H1, const double* H2,
             const double* H3, const double* const X[8], double* const Y[8]) {
  for (size_t i = 0; i < n; ++i) {
    double x0 = X[0][i], xh1 = X[4][i], xh2 = X[5][i], xh3 = X[6][i];
    double h1 = H1[i], h2 = H2[i], h3 = H3[i];
    double hx = h1 * xh1 + h2 * xh2 + h3 * xh3;
    double h2n = h1 * h1 + h2 * h2 + h3 * h3;
    double rinv = 1.0 / rho[i];
    Y[0][i] = (1.0 / c[i] + h2n) * x0 + hx;
    Y[1][i] = rinv * X[1][i];
    Y[2][i] = rinv * X[2][i];
    Y[3][i] = rinv * X[3][i];
    Y[4][i] = h1 * x0 + xh1;
    Y[5][i] = h2 * x0 + xh2;
    Y[6][i] = h3 * x0 + xh3;
    Y[7][i] = X[7][i];
  }
}

void matvec8_s(size_t n, const double* const M[64], const double* const X[8], double* const Y[8],
               bool add) {
  for (int r = 0; r < 8; ++r) {
    double* y = Y[r];
    if (!add)
      for (size_t i = 0; i < n; ++i) y[i] = 0.0;
    for (int cidx = 0; cidx < 8; ++cidx) {
      const double* m = M[8 * r + cidx];
      const double* x = X[cidx];
      for (size_t i = 0; i < n; ++i) y[i] += m[i] * x[i];
    }
  }
}

}  // namespace

const Ops scalar_ops = {axpy_s,   scal_s, sub_scale_s, comb3_s,     wacc_s,
                        wmul_s,   dot_s,  sumsq_s,     matvec_a0_s, matvec_ai_s,
                        a0inv_s,  matvec8_s};

}  // namespace fbmhd::kern
