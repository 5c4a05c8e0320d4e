#include "fbmhd/fft.hpp"

#include <cmath>

namespace fbmhd {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::complex<double>* a, int n, int sign) {
  // bit reversal
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * kPi / len;
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

void dft_direct(std::complex<double>* a, int n, int sign) {
  std::vector<std::complex<double>> out(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    std::complex<double> s(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
      double ang = sign * 2.0 * kPi * double(k) * double(j) / double(n);
      s += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[size_t(k)] = s;
  }
  for (int k = 0; k < n; ++k) a[k] = out[size_t(k)];
}

void transform(std::complex<double>* a, int n, int sign) {
  if (n == 1) return;
  if (is_pow2(n))
    fft_radix2(a, n, sign);
  else
    dft_direct(a, n, sign);
}

}  // namespace

void fft_forward(std::complex<double>* data, int n) { transform(data, n, -1); }

void fft_inverse(std::complex<double>* data, int n) {
  transform(data, n, +1);
  double inv = 1.0 / double(n);
  for (int i = 0; i < n; ++i) data[i] *= inv;
}

void fft2_forward(std::complex<double>* data, int n2, int n3) {
  for (int j = 0; j < n2; ++j) fft_forward(data + size_t(j) * size_t(n3), n3);
  std::vector<std::complex<double>> col(static_cast<size_t>(n2));
  for (int k = 0; k < n3; ++k) {
    for (int j = 0; j < n2; ++j) col[size_t(j)] = data[size_t(j) * size_t(n3) + size_t(k)];
    fft_forward(col.data(), n2);
    for (int j = 0; j < n2; ++j) data[size_t(j) * size_t(n3) + size_t(k)] = col[size_t(j)];
  }
}

void fft2_inverse(std::complex<double>* data, int n2, int n3) {
  for (int j = 0; j < n2; ++j) fft_inverse(data + size_t(j) * size_t(n3), n3);
  std::vector<std::complex<double>> col(static_cast<size_t>(n2));
  for (int k = 0; k < n3; ++k) {
    for (int j = 0; j < n2; ++j) col[size_t(j)] = data[size_t(j) * size_t(n3) + size_t(k)];
    fft_inverse(col.data(), n2);
    for (int j = 0; j < n2; ++j) data[size_t(j) * size_t(n3) + size_t(k)] = col[size_t(j)];
  }
}

}  // namespace fbmhd
