// AVX2/FMA variants of the inner-loop kernels.  This translation unit is the
// only one compiled with -mavx2 -mfma; it is reached solely through the
// runtime dispatch table after a cpuid check.

#include "fbmhd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define FBMHD_HAVE_AVX2_TU 1
#include <immintrin.h>
#else
#define FBMHD_HAVE_AVX2_TU 0
#endif

namespace fbmhd::kern {

#if FBMHD_HAVE_AVX2_TU

namespace {

void axpy_v(size_t n, double a, const double* x, double* y) {
  __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal_v(size_t n, double a, const double* x, double* y) {
  __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = a * x[i];
}

void sub_scale_v(size_t n, double a, const double* xp, const double* xm, double* y) {
  __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xp + i), _mm256_loadu_pd(xm + i));
    _mm256_storeu_pd(y + i, _mm256_mul_pd(va, d));
  }
  for (; i < n; ++i) y[i] = a * (xp[i] - xm[i]);
}

void comb3_v(size_t n, double a0, const double* x0, double a1, const double* x1, double a2,
             const double* x2, double* y) {
  __m256d v0 = _mm256_set1_pd(a0), v1 = _mm256_set1_pd(a1), v2 = _mm256_set1_pd(a2);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s = _mm256_mul_pd(v0, _mm256_loadu_pd(x0 + i));
    s = _mm256_fmadd_pd(v1, _mm256_loadu_pd(x1 + i), s);
    s = _mm256_fmadd_pd(v2, _mm256_loadu_pd(x2 + i), s);
    _mm256_storeu_pd(y + i, s);
  }
  for (; i < n; ++i) y[i] = a0 * x0[i] + a1 * x1[i] + a2 * x2[i];
}

void wacc_v(size_t n, double s, const double* w, const double* x, double* y) {
  __m256d vs = _mm256_set1_pd(s);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, t, vy));
  }
  for (; i < n; ++i) y[i] += s * w[i] * x[i];
}

void wmul_v(size_t n, const double* w, double* y) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] *= w[i];
}

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_v(size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sumsq_v(size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

void matvec_a0_v(size_t n, const double* c, const double* rho, const double* H1, const double* H2,
                 const double* H3, const double* const X[8], double* const Y[8], bool add) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x0 = _mm256_loadu_pd(X[0] + i);
    __m256d xh1 = _mm256_loadu_pd(X[4] + i);
    __m256d xh2 = _mm256_loadu_pd(X[5] + i);
    __m256d xh3 = _mm256_loadu_pd(X[6] + i);
    __m256d h1 = _mm256_loadu_pd(H1 + i);
    __m256d h2 = _mm256_loadu_pd(H2 + i);
    __m256d h3 = _mm256_loadu_pd(H3 + i);
    __m256d hx = _mm256_mul_pd(h1, xh1);
    hx = _mm256_fmadd_pd(h2, xh2, hx);
    hx = _mm256_fmadd_pd(h3, xh3, hx);
    __m256d ci = _mm256_loadu_pd(c + i);
    __m256d ri = _mm256_loadu_pd(rho + i);
    __m256d y0 = _mm256_mul_pd(ci, _mm256_sub_pd(x0, hx));
    __m256d w = _mm256_mul_pd(ci, _mm256_sub_pd(hx, x0));
    __m256d out[8];
    out[0] = y0;
    out[1] = _mm256_mul_pd(ri, _mm256_loadu_pd(X[1] + i));
    out[2] = _mm256_mul_pd(ri, _mm256_loadu_pd(X[2] + i));
    out[3] = _mm256_mul_pd(ri, _mm256_loadu_pd(X[3] + i));
    out[4] = _mm256_fmadd_pd(h1, w, xh1);
    out[5] = _mm256_fmadd_pd(h2, w, xh2);
    out[6] = _mm256_fmadd_pd(h3, w, xh3);
    out[7] = _mm256_loadu_pd(X[7] + i);
    for (int comp = 0; comp < 8; ++comp) {
      if (add) out[comp] = _mm256_add_pd(out[comp], _mm256_loadu_pd(Y[comp] + i));
      _mm256_storeu_pd(Y[comp] + i, out[comp]);
    }
  }
  if (i < n) {
    const double* Xt[8];
    double* Yt[8];
    for (int comp = 0; comp < 8; ++comp) {
      Xt[comp] = X[comp] + i;
      Yt[comp] = Y[comp] + i;
    }
    scalar_ops.matvec_a0(n - i, c + i, rho + i, H1 + i, H2 + i, H3 + i, Xt, Yt, add);
  }
}

void matvec_ai_v(size_t n, int axis, const double* c, const double* rho, const double* vi,
                 const double* Hi, const double* H1, const double* H2, const double* H3,
                 const double* const X[8], double* const Y[8], bool add) {
  size_t va = size_t(axis);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x0 = _mm256_loadu_pd(X[0] + i);
    __m256d xv1 = _mm256_loadu_pd(X[1] + i);
    __m256d xv2 = _mm256_loadu_pd(X[2] + i);
    __m256d xv3 = _mm256_loadu_pd(X[3] + i);
    __m256d xh1 = _mm256_loadu_pd(X[4] + i);
    __m256d xh2 = _mm256_loadu_pd(X[5] + i);
    __m256d xh3 = _mm256_loadu_pd(X[6] + i);
    __m256d h1 = _mm256_loadu_pd(H1 + i);
    __m256d h2 = _mm256_loadu_pd(H2 + i);
    __m256d h3 = _mm256_loadu_pd(H3 + i);
    __m256d hx = _mm256_mul_pd(h1, xh1);
    hx = _mm256_fmadd_pd(h2, xh2, hx);
    hx = _mm256_fmadd_pd(h3, xh3, hx);
    __m256d ci = _mm256_loadu_pd(c + i);
    __m256d ri = _mm256_loadu_pd(rho + i);
    __m256d vv = _mm256_loadu_pd(vi + i);
    __m256d hh = _mm256_loadu_pd(Hi + i);
    __m256d vci = _mm256_mul_pd(vv, ci);
    __m256d rv = _mm256_mul_pd(ri, vv);
    __m256d w = _mm256_mul_pd(vci, _mm256_sub_pd(hx, x0));
    __m256d out[8];
    out[0] = _mm256_add_pd(_mm256_mul_pd(vci, _mm256_sub_pd(x0, hx)),
                           _mm256_loadu_pd(X[va] + i));
    out[1] = _mm256_fnmadd_pd(hh, xh1, _mm256_mul_pd(rv, xv1));
    out[2] = _mm256_fnmadd_pd(hh, xh2, _mm256_mul_pd(rv, xv2));
    out[3] = _mm256_fnmadd_pd(hh, xh3, _mm256_mul_pd(rv, xv3));
    out[va] = _mm256_add_pd(out[va], x0);
    out[4] = _mm256_fmadd_pd(h1, w, _mm256_fnmadd_pd(hh, xv1, _mm256_mul_pd(vv, xh1)));
    out[5] = _mm256_fmadd_pd(h2, w, _mm256_fnmadd_pd(hh, xv2, _mm256_mul_pd(vv, xh2)));
    out[6] = _mm256_fmadd_pd(h3, w, _mm256_fnmadd_pd(hh, xv3, _mm256_mul_pd(vv, xh3)));
    out[7] = _mm256_mul_pd(vv, _mm256_loadu_pd(X[7] + i));
    for (int comp = 0; comp < 8; ++comp) {
      if (add) out[comp] = _mm256_add_pd(out[comp], _mm256_loadu_pd(Y[comp] + i));
      _mm256_storeu_pd(Y[comp] + i, out[comp]);
    }
  }
  if (i < n) {
    const double* Xt[8];
    double* Yt[8];
    for (int comp = 0; comp < 8; ++comp) {
      Xt[comp] = X[comp] + i;
      Yt[comp] = Y[comp] + i;
    }
    scalar_ops.matvec_ai(n - i, axis, c + i, rho + i, vi + i, Hi + i, H1 + i, H2 + i, H3 + i, Xt,
                         Yt, add);
  }
}

void a0inv_v(size_t n, const double* c, const double* rho, const double* H1, const double* H2,
             const double* H3, const double* const X[8], double* const Y[8]) {
  __m256d one = _mm256_set1_pd(1.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x0 = _mm256_loadu_pd(X[0] + i);
    __m256d xh1 = _mm256_loadu_pd(X[4] + i);
    __m256d xh2 = _mm256_loadu_pd(X[5] + i);
    __m256d xh3 = _mm256_loadu_pd(X[6] + i);
    __m256d h1 = _mm256_loadu_pd(H1 + i);
    __m256d h2 = _mm256_loadu_pd(H2 + i);
    __m256d h3 = _mm256_loadu_pd(H3 + i);
    __m256d hx = _mm256_mul_pd(h1, xh1);
    hx = _mm256_fmadd_pd(h2, xh2, hx);
    hx = _mm256_fmadd_pd(h3, xh3, hx);
    __m256d h2n = _mm256_mul_pd(h1, h1);
    h2n = _mm256_fmadd_pd(h2, h2, h2n);
    h2n = _mm256_fmadd_pd(h3, h3, h2n);
    __m256d cinv = _mm256_div_pd(one, _mm256_loadu_pd(c + i));
    __m256d rinv = _mm256_div_pd(one, _mm256_loadu_pd(rho + i));
    _mm256_storeu_pd(Y[0] + i, _mm256_fmadd_pd(_mm256_add_pd(cinv, h2n), x0, hx));
    _mm256_storeu_pd(Y[1] + i, _mm256_mul_pd(rinv, _mm256_loadu_pd(X[1] + i)));
    _mm256_storeu_pd(Y[2] + i, _mm256_mul_pd(rinv, _mm256_loadu_pd(X[2] + i)));
    _mm256_storeu_pd(Y[3] + i, _mm256_mul_pd(rinv, _mm256_loadu_pd(X[3] + i)));
    _mm256_storeu_pd(Y[4] + i, _mm256_fmadd_pd(h1, x0, xh1));
    _mm256_storeu_pd(Y[5] + i, _mm256_fmadd_pd(h2, x0, xh2));
    _mm256_storeu_pd(Y[6] + i, _mm256_fmadd_pd(h3, x0, xh3));
    _mm256_storeu_pd(Y[7] + i, _mm256_loadu_pd(X[7] + i));
  }
  if (i < n) {
    const double* Xt[8];
    double* Yt[8];
    for (int comp = 0; comp < 8; ++comp) {
      Xt[comp] = X[comp] + i;
      Yt[comp] = Y[comp] + i;
    }
    scalar_ops.a0inv(n - i, c + i, rho + i, H1 + i, H2 + i, H3 + i, Xt, Yt);
  }
}

void matvec8_v(size_t n, const double* const M[64], const double* const X[8], double* const Y[8],
               bool add) {
  for (int r = 0; r < 8; ++r) {
    double* y = Y[r];
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      __m256d acc = add ? _mm256_loadu_pd(y + i) : _mm256_setzero_pd();
      for (int cidx = 0; cidx < 8; ++cidx)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(M[8 * r + cidx] + i),
                              _mm256_loadu_pd(X[cidx] + i), acc);
      _mm256_storeu_pd(y + i, acc);
    }
    for (; i < n; ++i) {
      double s = add ? y[i] : 0.0;
      for (int cidx = 0; cidx < 8; ++cidx) s += M[8 * r + cidx][i] * X[cidx][i];
      y[i] = s;
    }
  }
}

const Ops avx2_ops = {axpy_v,   scal_v, sub_scale_v, comb3_v,     wacc_v,
                      wmul_v,   dot_v,  sumsq_v,     matvec_a0_v, matvec_ai_v,
                      a0inv_v,  matvec8_v};

}  // namespace

const Ops* avx2_ops_or_null() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") ? &avx2_ops : nullptr;
}

#else

const Ops* avx2_ops_or_null() { return nullptr; }

#endif

}  // namespace fbmhd::kern
