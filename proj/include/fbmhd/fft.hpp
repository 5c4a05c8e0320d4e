#pragma once

#include <complex>
#include <vector>

namespace fbmhd {

// In-place complex transforms on the periodic tangential grid.  Power-of-two
// lengths go through an iterative radix-2 kernel; anything else falls back to
// a direct DFT (tangential grids are small, so O(n^2) is acceptable there).
void fft_forward(std::complex<double>* data, int n);
void fft_inverse(std::complex<double>* data, int n);  // includes the 1/n factor

// 2-D transforms on an n2 x n3 row-major array.
void fft2_forward(std::complex<double>* data, int n2, int n3);
void fft2_inverse(std::complex<double>* data, int n2, int n3);

// Signed integer mode number for bin k of an n-point transform.
inline int fft_mode(int k, int n) { return (k <= n / 2) ? k : k - n; }

}  // namespace fbmhd
