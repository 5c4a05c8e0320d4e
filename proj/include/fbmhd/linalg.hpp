#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace fbmhd {

using Vec3 = std::array<double, 3>;
using Vec8 = std::array<double, 8>;

// Dense 8x8 matrix, row major.  Small enough that value semantics are fine.
struct Mat8 {
  std::array<double, 64> a{};

  double& operator()(int r, int c) { return a[size_t(r) * 8 + size_t(c)]; }
  double operator()(int r, int c) const { return a[size_t(r) * 8 + size_t(c)]; }

  static Mat8 zero() { return Mat8{}; }
  static Mat8 identity();

  Mat8& operator+=(const Mat8& o);
  Mat8& operator-=(const Mat8& o);
  Mat8& operator*=(double s);
};

Mat8 operator+(Mat8 x, const Mat8& y);
Mat8 operator-(Mat8 x, const Mat8& y);
Mat8 operator*(double s, Mat8 x);
Mat8 matmul(const Mat8& x, const Mat8& y);
Mat8 transpose(const Mat8& m);
Vec8 matvec(const Mat8& m, const Vec8& v);

double max_abs_entry(const Mat8& m);
// max |m - m^T| entry
double asymmetry(const Mat8& m);

// Cholesky factorization m = L L^T.  Returns false if m is not positive
// definite (within round-off).
bool cholesky(const Mat8& m, Mat8& lower);
Vec8 cholesky_solve(const Mat8& lower, const Vec8& rhs);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::array<double, 8> symmetric_eigenvalues(Mat8 m);

// Spectral radius of m0^{-1} m1 for symmetric m0 > 0, symmetric m1, via the
// congruent symmetric pencil L^{-1} m1 L^{-T}.
double generalized_spectral_radius(const Mat8& m0, const Mat8& m1);

inline double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

}  // namespace fbmhd
