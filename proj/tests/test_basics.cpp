#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "fbmhd/config.hpp"
#include "fbmhd/cutoffs.hpp"
#include "fbmhd/eos.hpp"
#include "fbmhd/fft.hpp"
#include "fbmhd/grid.hpp"
#include "fbmhd/kernels.hpp"
#include "fbmhd/linalg.hpp"
#include "fbmhd/rng.hpp"
#include "fbmhd/stencil.hpp"

using namespace fbmhd;

TEST_CASE("config parsing") {
  Config cfg = Config::from_string("a.b = 3\n# comment\nname = hello # tail\nflag = true\n");
  CHECK(cfg.get_int("a.b") == 3);
  CHECK(cfg.get_string("name") == "hello");
  CHECK(cfg.get_bool("flag", false));
  CHECK(cfg.get_double("missing", 2.5) == 2.5);
  CHECK_THROWS_AS(cfg.get_double("name"), ConfigError);
  CHECK_THROWS_AS(Config::from_string("novalue\n"), ConfigError);
}

TEST_CASE("eos gamma law") {
  ThermoModel eos;
  // p = exp(S) rho^gamma with gamma = 5/3
  CHECK(eos.density(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(eos.density(0.0, 0.0), DomainError);
  CHECK(eos.sound_speed(1.0, 0.0) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-14));

  // bisection inversion of the forward map as an independent oracle
  double p = 2.0, S = 0.1;
  double lo = 1e-6, hi = 100.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (eos.pressure(mid, S) < p ? lo : hi) = mid;
  }
  CHECK(std::abs(eos.density(p, S) - 0.5 * (lo + hi)) < 1e-12);

  // degenerate input stays finite
  double a = eos.sound_speed(1e-300, 0.0);
  CHECK(std::isfinite(a));
  CHECK(a > 0.0);

  SUBCASE("round trip and monotonicity") {
    Rng rng(1234);
    for (int i = 0; i < 10000; ++i) {
      double rho = rng.uniform(0.11, 9.9);
      double S = rng.uniform(-1.0, 1.0);
      double back = eos.density(eos.pressure(rho, S), S);
      CHECK(std::abs(back - rho) < 1e-12 * rho);
    }
    double prev = 0.0;
    for (int i = 1; i <= 50; ++i) {
      double rho = eos.density(0.2 * i, 0.3);
      CHECK(rho > prev);
      prev = rho;
    }
  }

  SUBCASE("closure identity a^2 rho = gamma p") {
    Rng rng(77);
    for (int i = 0; i < 1000; ++i) {
      double p = rng.uniform(0.01, 50.0), S = rng.uniform(-1.0, 1.0);
      double a = eos.sound_speed(p, S);
      double rho = eos.density(p, S);
      CHECK(std::abs(a * a * rho - eos.gamma * p) < 1e-12 * eos.gamma * p);
    }
  }

  SUBCASE("finite difference oracle for sound speed") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
      double p = rng.uniform(0.1, 20.0), S = rng.uniform(-1.0, 1.0);
      double rho = eos.density(p, S);
      double dr = 1e-6 * rho;
      double dpdr = (eos.pressure(rho + dr, S) - eos.pressure(rho - dr, S)) / (2 * dr);
      double a2 = eos.sound_speed(p, S);
      CHECK(std::abs(a2 * a2 - dpdr) < 1e-6 * dpdr);
    }
  }

  SUBCASE("hyperbolicity margin") {
    PrimaryState u;
    u.S = 0.0;
    // rho = (p)^{1/gamma}; pick p so rho is the window midpoint
    double mid = 0.5 * (eos.rho_floor + eos.rho_ceil);
    u.q = eos.pressure(mid, 0.0);
    CHECK(eos.hyperbolicity_margin(u) ==
          doctest::Approx(0.5 * (eos.rho_ceil - eos.rho_floor)).epsilon(1e-12));
    u.q = eos.pressure(eos.rho_floor, 0.0);
    CHECK(std::abs(eos.hyperbolicity_margin(u)) < 1e-12);
    u.q = eos.pressure(0.01, 0.0);
    CHECK(eos.hyperbolicity_margin(u) < 0.0);
  }

  SUBCASE("stiffened branch keeps zero total pressure admissible") {
    ThermoModel liq = eos;
    liq.p_stiff = 1.0;
    PrimaryState u;  // q = 0, H = 0
    CHECK(liq.density_of(u) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(liq.hyperbolicity_margin(u) > 0.0);
  }
}

TEST_CASE("cutoff functions") {
  CHECK(chi(0.5) == 1.0);
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(3.0) == 0.0);
  CHECK(chi(5.0) == 0.0);
  double max_slope = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    double x = 4.0 * i / 100000.0;
    max_slope = std::max(max_slope, std::abs(chi_deriv(x)));
  }
  CHECK(max_slope < 1.0);
  // monotone decreasing on the blend
  for (int i = 1; i < 200; ++i) {
    double a = 1.0 + 2.0 * (i - 1) / 200.0;
    double b = 1.0 + 2.0 * i / 200.0;
    CHECK(chi(b) <= chi(a) + 1e-15);
  }

  CHECK(sigma(0.25) == 0.25);
  CHECK(sigma(2.0) == 1.0);
  double s = sigma(0.75);
  CHECK(s > 0.5);
  CHECK(s < 1.0);
  CHECK(sigma_deriv(0.75) > 0.0);
  for (int i = 1; i < 1000; ++i) {
    double a = 1.2 * (i - 1) / 1000.0;
    double b = 1.2 * i / 1000.0;
    CHECK(sigma(b) >= sigma(a) - 1e-15);
  }
  // C^1 match at the seams, C^2 via finite differences
  double h = 1e-5;
  for (double x0 : {0.5, 1.0}) {
    double dl = (sigma(x0) - sigma(x0 - h)) / h;
    double dr = (sigma(x0 + h) - sigma(x0)) / h;
    CHECK(std::abs(dl - dr) < 1e-4);
  }
}

TEST_CASE("mat8 cholesky and jacobi") {
  Rng rng(42);
  Mat8 b;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) b(i, j) = rng.uniform(-1.0, 1.0);
  // spd = b b^T + I
  Mat8 spd = matmul(b, transpose(b));
  for (int i = 0; i < 8; ++i) spd(i, i) += 1.0;
  Mat8 lower;
  REQUIRE(cholesky(spd, lower));
  Vec8 rhs;
  for (int i = 0; i < 8; ++i) rhs[size_t(i)] = rng.uniform(-1.0, 1.0);
  Vec8 x = cholesky_solve(lower, rhs);
  Vec8 back = matvec(spd, x);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(back[size_t(i)] - rhs[size_t(i)]) < 1e-10);

  auto ev = symmetric_eigenvalues(spd);
  CHECK(ev[0] > 0.99);  // all >= 1 by construction
  double trace = 0.0;
  for (int i = 0; i < 8; ++i) trace += spd(i, i);
  double evsum = 0.0;
  for (double e : ev) evsum += e;
  CHECK(evsum == doctest::Approx(trace).epsilon(1e-12));

  // diag(1..8) sanity
  Mat8 d;
  for (int i = 0; i < 8; ++i) d(i, i) = i + 1.0;
  auto evd = symmetric_eigenvalues(d);
  for (int i = 0; i < 8; ++i) CHECK(evd[size_t(i)] == doctest::Approx(i + 1.0).epsilon(1e-13));
}

TEST_CASE("fft roundtrip and mode isolation") {
  for (int n : {16, 24}) {  // power of two and mixed radix
    std::vector<std::complex<double>> v(static_cast<size_t>(n));
    Rng rng(7);
    for (auto& z : v) z = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    auto w = v;
    fft_forward(w.data(), n);
    fft_inverse(w.data(), n);
    for (int i = 0; i < n; ++i) CHECK(std::abs(w[size_t(i)] - v[size_t(i)]) < 1e-12);

    // pure mode 3 lands in bin 3
    for (int i = 0; i < n; ++i) {
      double ang = 2.0 * M_PI * 3.0 * i / n;
      v[size_t(i)] = {std::cos(ang), std::sin(ang)};
    }
    fft_forward(v.data(), n);
    for (int k = 0; k < n; ++k) {
      double expect = (k == 3) ? double(n) : 0.0;
      CHECK(std::abs(v[size_t(k)] - std::complex<double>(expect, 0)) < 1e-10);
    }
  }
}

TEST_CASE("kernel backends agree") {
  const auto* avx = kern::avx2_ops_or_null();
  if (!avx) {
    MESSAGE("AVX2 not available; scalar only");
    return;
  }
  Rng rng(2024);
  const size_t n = 1037;  // odd length exercises the tails
  std::vector<std::vector<double>> bufs;
  auto mk = [&]() {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-2.0, 2.0);
    return v;
  };
  auto close = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  };

  auto x = mk(), xp = mk(), xm = mk(), w = mk();
  auto y1 = mk();
  auto y2 = y1;
  kern::scalar_ops.axpy(n, 1.7, x.data(), y1.data());
  avx->axpy(n, 1.7, x.data(), y2.data());
  CHECK(close(y1, y2) < 1e-14);

  kern::scalar_ops.sub_scale(n, 0.31, xp.data(), xm.data(), y1.data());
  avx->sub_scale(n, 0.31, xp.data(), xm.data(), y2.data());
  CHECK(close(y1, y2) < 1e-14);

  kern::scalar_ops.comb3(n, -1.5, x.data(), 2.0, xp.data(), -0.5, xm.data(), y1.data());
  avx->comb3(n, -1.5, x.data(), 2.0, xp.data(), -0.5, xm.data(), y2.data());
  CHECK(close(y1, y2) < 1e-13);

  y2 = y1;
  kern::scalar_ops.wacc(n, -1.0, w.data(), x.data(), y1.data());
  avx->wacc(n, -1.0, w.data(), x.data(), y2.data());
  CHECK(close(y1, y2) < 1e-13);

  CHECK(std::abs(kern::scalar_ops.dot(n, x.data(), w.data()) - avx->dot(n, x.data(), w.data())) <
        1e-11);
  CHECK(std::abs(kern::scalar_ops.sumsq(n, x.data()) - avx->sumsq(n, x.data())) < 1e-11);

  // state-matrix kernels
  std::vector<double> c(n), rho(n), H1(n), H2(n), H3(n), vi(n), Hi(n);
  for (size_t i = 0; i < n; ++i) {
    c[i] = rng.uniform(0.2, 2.0);
    rho[i] = rng.uniform(0.3, 3.0);
    H1[i] = rng.uniform(-1, 1);
    H2[i] = rng.uniform(-1, 1);
    H3[i] = rng.uniform(-1, 1);
    vi[i] = rng.uniform(-1, 1);
    Hi[i] = rng.uniform(-1, 1);
  }
  std::vector<std::vector<double>> X(8), Ya(8), Yb(8);
  const double* Xp[8];
  double* Yap[8];
  double* Ybp[8];
  for (int comp = 0; comp < 8; ++comp) {
    X[size_t(comp)] = mk();
    Ya[size_t(comp)] = mk();
    Yb[size_t(comp)] = Ya[size_t(comp)];
    Xp[comp] = X[size_t(comp)].data();
    Yap[comp] = Ya[size_t(comp)].data();
    Ybp[comp] = Yb[size_t(comp)].data();
  }
  kern::scalar_ops.matvec_a0(n, c.data(), rho.data(), H1.data(), H2.data(), H3.data(), Xp, Yap,
                             true);
  avx->matvec_a0(n, c.data(), rho.data(), H1.data(), H2.data(), H3.data(), Xp, Ybp, true);
  for (int comp = 0; comp < 8; ++comp) CHECK(close(Ya[size_t(comp)], Yb[size_t(comp)]) < 1e-13);

  for (int axis = 1; axis <= 3; ++axis) {
    kern::scalar_ops.matvec_ai(n, axis, c.data(), rho.data(), vi.data(), Hi.data(), H1.data(),
                               H2.data(), H3.data(), Xp, Yap, false);
    avx->matvec_ai(n, axis, c.data(), rho.data(), vi.data(), Hi.data(), H1.data(), H2.data(),
                   H3.data(), Xp, Ybp, false);
    for (int comp = 0; comp < 8; ++comp) CHECK(close(Ya[size_t(comp)], Yb[size_t(comp)]) < 1e-13);
  }

  kern::scalar_ops.a0inv(n, c.data(), rho.data(), H1.data(), H2.data(), H3.data(), Xp, Yap);
  avx->a0inv(n, c.data(), rho.data(), H1.data(), H2.data(), H3.data(), Xp, Ybp);
  for (int comp = 0; comp < 8; ++comp) CHECK(close(Ya[size_t(comp)], Yb[size_t(comp)]) < 1e-12);

  std::vector<std::vector<double>> M(64);
  const double* Mp[64];
  for (int e = 0; e < 64; ++e) {
    M[size_t(e)] = mk();
    Mp[e] = M[size_t(e)].data();
  }
  kern::scalar_ops.matvec8(n, Mp, Xp, Yap, false);
  avx->matvec8(n, Mp, Xp, Ybp, false);
  for (int comp = 0; comp < 8; ++comp) CHECK(close(Ya[size_t(comp)], Yb[size_t(comp)]) < 1e-12);
}

TEST_CASE("a0inv inverts matvec_a0") {
  Rng rng(5);
  const size_t n = 64;
  std::vector<double> c(n), rho(n), H1(n), H2(n), H3(n);
  for (size_t i = 0; i < n; ++i) {
    c[i] = rng.uniform(0.2, 2.0);
    rho[i] = rng.uniform(0.3, 3.0);
    H1[i] = rng.uniform(-1, 1);
    H2[i] = rng.uniform(-1, 1);
    H3[i] = rng.uniform(-1, 1);
  }
  std::vector<std::vector<double>> X(8), Y(8), Z(8);
  const double* Xp[8];
  double* Yp[8];
  double* Zp[8];
  const double* Ycp[8];
  for (int comp = 0; comp < 8; ++comp) {
    X[size_t(comp)].resize(n);
    Y[size_t(comp)].resize(n);
    Z[size_t(comp)].resize(n);
    for (auto& v : X[size_t(comp)]) v = rng.uniform(-1, 1);
    Xp[comp] = X[size_t(comp)].data();
    Yp[comp] = Y[size_t(comp)].data();
    Zp[comp] = Z[size_t(comp)].data();
    Ycp[comp] = Y[size_t(comp)].data();
  }
  const auto& k = kern::ops();
  k.matvec_a0(n, c.data(), rho.data(), H1.data(), H2.data(), H3.data(), Xp, Yp, false);
  k.a0inv(n, c.data(), rho.data(), H1.data(), H2.data(), H3.data(), Ycp, Zp);
  for (int comp = 0; comp < 8; ++comp)
    for (size_t i = 0; i < n; ++i)
      CHECK(std::abs(Z[size_t(comp)][i] - X[size_t(comp)][i]) < 1e-12);
}

TEST_CASE("stencils differentiate polynomials and modes") {
  SlabGrid g;
  g.n1 = 9;
  g.n2 = 8;
  g.n3 = 8;
  g.nt = 5;
  g.n_past = 1;
  g.x1_extent = 4.0;
  g.tangential_extent = 2.0 * M_PI;
  g.t_final = 1.0;

  SlabField f(g, 1);
  // f = x1^2 (exact for 2nd order stencils, including one-sided ends)
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) f.at(0, l, i, j, k) = g.x1(i) * g.x1(i);
  SlabField d1 = slab_deriv(f, 1);
  for (int i = 0; i < g.n1; ++i)
    CHECK(d1.at(0, 2, i, 3, 3) == doctest::Approx(2.0 * g.x1(i)).epsilon(1e-12));

  // tangential mode: D2 has the discrete symbol sin(k h)/h
  SlabField m(g, 1);
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) m.at(0, l, i, j, k) = std::sin(2.0 * g.x2(j));
  SlabField d2 = slab_deriv(m, 2);
  double kh = std::sin(2.0 * g.h2()) / g.h2();
  for (int j = 0; j < g.n2; ++j)
    CHECK(d2.at(0, 1, 4, j, 2) == doctest::Approx(kh * std::cos(2.0 * g.x2(j))).epsilon(1e-12));

  // time: linear in t is exact everywhere including the ends
  SlabField tf(g, 1);
  for (int l = 0; l < g.levels(); ++l)
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) tf.at(0, l, i, j, k) = 3.0 * g.time(l) + 1.0;
  SlabField dt = slab_deriv(tf, 0);
  for (int l = 0; l < g.levels(); ++l) CHECK(dt.at(0, l, 2, 2, 2) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("multi index enumeration") {
  auto idx = multi_indices_up_to(3);
  // alpha in N^5 with |alpha| + alpha_4 <= 3: 35 with a4=0, 5 with a4=1
  CHECK(idx.size() == 40);
  for (const auto& a : idx) CHECK(a.weight() <= 3);
}
