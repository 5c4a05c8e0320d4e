#include <cmath>

#include "doctest.h"
#include "fbmhd/matrices.hpp"
#include "fbmhd/rng.hpp"
#include "fbmhd/samples.hpp"

using namespace fbmhd;

namespace {

// extended-precision evaluation of the straightened normal flux combination
Mat8 a1_tilde_long_double(const ThermoModel& eos, const PrimaryState& u,
                          const std::array<double, 4>& dPhi) {
  Mat8 a1 = assemble_Ai(eos, u, 1);
  Mat8 a0 = assemble_A0(eos, u);
  Mat8 a2 = assemble_Ai(eos, u, 2);
  Mat8 a3 = assemble_Ai(eos, u, 3);
  Mat8 out;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      long double v = (long double)a1(r, c) - (long double)dPhi[0] * a0(r, c) -
                      (long double)dPhi[2] * a2(r, c) - (long double)dPhi[3] * a3(r, c);
      out(r, c) = double(v / (long double)dPhi[1]);
    }
  return out;
}

double moment(const Mat8& m, int k) {
  Mat8 p = Mat8::identity();
  for (int i = 0; i < k; ++i) p = matmul(p, m);
  double tr = 0;
  for (int i = 0; i < 8; ++i) tr += p(i, i);
  return tr;
}

}  // namespace

TEST_CASE("A0 decouples when H vanishes") {
  ThermoModel eos;
  PrimaryState u;  // p = 1, S = 0, H = 0: rho = 1, a^2 = gamma
  u.q = 1.0;
  Mat8 a0 = assemble_A0(eos, u);
  Mat8 expect;
  expect(0, 0) = 1.0 / eos.gamma;
  for (int i = 1; i < 8; ++i) expect(i, i) = 1.0;
  CHECK(max_abs_entry(a0 - expect) < 1e-15);
}

TEST_CASE("Ai with v = H = 0 has only the pressure-velocity coupling") {
  ThermoModel eos;
  PrimaryState u;
  u.q = 2.0;
  u.S = 0.3;
  for (int axis = 1; axis <= 3; ++axis) {
    Mat8 a = assemble_Ai(eos, u, axis);
    Mat8 expect;
    expect(0, axis) = 1.0;
    expect(axis, 0) = 1.0;
    CHECK(max_abs_entry(a - expect) < 1e-15);
  }
  CHECK_THROWS_AS(assemble_Ai(eos, u, 4), UsageError);
}

TEST_CASE("assembled matrices: symmetry, definiteness, hyperbolic symbol") {
  ThermoModel eos;
  Rng rng(314);
  for (int trial = 0; trial < 200; ++trial) {
    PrimaryState u = random_admissible_state(eos, rng);
    Mat8 a0 = assemble_A0(eos, u);
    CHECK(asymmetry(a0) == 0.0);
    auto ev = symmetric_eigenvalues(a0);
    CHECK(ev[0] > 0.0);
    for (int axis = 1; axis <= 3; ++axis) CHECK(asymmetry(assemble_Ai(eos, u, axis)) == 0.0);

    auto dphi = random_lift_slopes(rng);
    Mat8 a1t = assemble_A1_tilde(eos, u, dphi);
    CHECK(asymmetry(a1t) < 1e-15);
    CHECK(max_abs_entry(a1t - a1_tilde_long_double(eos, u, dphi)) < 1e-13);
  }

  SUBCASE("A1 tilde reduces to A1 for the identity lift") {
    Rng r2(11);
    PrimaryState u = random_admissible_state(eos, r2);
    Mat8 a1t = assemble_A1_tilde(eos, u, {0.0, 1.0, 0.0, 0.0});
    CHECK(max_abs_entry(a1t - assemble_Ai(eos, u, 1)) == 0.0);
    CHECK_THROWS_AS(assemble_A1_tilde(eos, u, {0.0, 0.4, 0.0, 0.0}), DomainError);
  }

  SUBCASE("symbol has a real spectrum (moments match the symmetric reduction)") {
    Rng r3(2718);
    for (int trial = 0; trial < 100; ++trial) {
      PrimaryState u = random_admissible_state(eos, r3);
      double x[3] = {r3.normal(), r3.normal(), r3.normal()};
      double nn = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      Mat8 m;
      for (int axis = 1; axis <= 3; ++axis) {
        Mat8 a = assemble_Ai(eos, u, axis);
        a *= x[axis - 1] / nn;
        m += a;
      }
      Mat8 a0 = assemble_A0(eos, u);
      // nonsymmetric symbol A0^{-1} m
      Mat8 lower;
      REQUIRE(cholesky(a0, lower));
      Mat8 sym;  // A0^{-1} m is similar to L^{-1} m L^{-T}
      {
        Mat8 x1;
        for (int j = 0; j < 8; ++j)
          for (int i = 0; i < 8; ++i) {
            double s = m(i, j);
            for (int k = 0; k < i; ++k) s -= lower(i, k) * x1(k, j);
            x1(i, j) = s / lower(i, i);
          }
        Mat8 xt = transpose(x1);
        for (int j = 0; j < 8; ++j)
          for (int i = 0; i < 8; ++i) {
            double s = xt(i, j);
            for (int k = 0; k < i; ++k) s -= lower(i, k) * sym(k, j);
            sym(i, j) = s / lower(i, i);
          }
      }
      auto ev = symmetric_eigenvalues(sym);
      // A0^{-1} m explicitly
      Mat8 a0im;
      for (int j = 0; j < 8; ++j) {
        Vec8 col;
        for (int i = 0; i < 8; ++i) col[size_t(i)] = m(i, j);
        Vec8 s = cholesky_solve(lower, col);
        for (int i = 0; i < 8; ++i) a0im(i, j) = s[size_t(i)];
      }
      for (int k = 1; k <= 4; ++k) {
        double msym = 0;
        for (double e : ev) msym += std::pow(e, k);
        double mraw = moment(a0im, k);
        CHECK(std::abs(mraw - msym) < 1e-8 * (1.0 + std::abs(msym)));
      }
    }
  }
}

TEST_CASE("directional derivatives of the matrices match finite differences") {
  ThermoModel eos;
  Rng rng(555);
  for (int trial = 0; trial < 40; ++trial) {
    PrimaryState u = random_admissible_state(eos, rng);
    Vec8 du;
    for (auto& v : du) v = rng.uniform(-1.0, 1.0);
    double th = 1e-6;
    Vec8 up = u.as_vec(), um = u.as_vec();
    for (size_t i = 0; i < 8; ++i) {
      up[i] += th * du[i];
      um[i] -= th * du[i];
    }
    PrimaryState sp = PrimaryState::from_vec(up), sm = PrimaryState::from_vec(um);

    Mat8 fd = assemble_A0(eos, sp) - assemble_A0(eos, sm);
    fd *= 1.0 / (2.0 * th);
    CHECK(max_abs_entry(fd - dA0(eos, u, du)) < 2e-6);

    for (int axis = 1; axis <= 3; ++axis) {
      Mat8 fdi = assemble_Ai(eos, sp, axis) - assemble_Ai(eos, sm, axis);
      fdi *= 1.0 / (2.0 * th);
      CHECK(max_abs_entry(fdi - dAi(eos, u, du, axis)) < 2e-6);
    }

    auto dphi = random_lift_slopes(rng);
    Mat8 fdt = assemble_A1_tilde(eos, sp, dphi) - assemble_A1_tilde(eos, sm, dphi);
    fdt *= 1.0 / (2.0 * th);
    CHECK(max_abs_entry(fdt - dA1_tilde_state(eos, u, du, dphi)) < 5e-6);

    std::array<double, 4> dpsi = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                  rng.uniform(-1, 1)};
    std::array<double, 4> pp = dphi, pm = dphi;
    for (int i = 0; i < 4; ++i) {
      pp[size_t(i)] += th * dpsi[size_t(i)];
      pm[size_t(i)] -= th * dpsi[size_t(i)];
    }
    Mat8 fdl = assemble_A1_tilde(eos, u, pp) - assemble_A1_tilde(eos, u, pm);
    fdl *= 1.0 / (2.0 * th);
    CHECK(max_abs_entry(fdl - dA1_tilde_lift(eos, u, dphi, dpsi)) < 5e-6);
  }
}

TEST_CASE("pointwise actions match assembled matrices") {
  ThermoModel eos;
  Rng rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    PrimaryState u = random_admissible_state(eos, rng);
    PointCoefs pc = point_coefs(eos, u);
    Vec8 x;
    for (auto& v : x) v = rng.uniform(-1, 1);
    Vec8 y0 = a0_apply(pc, x);
    Vec8 y0m = matvec(assemble_A0(eos, u), x);
    for (size_t i = 0; i < 8; ++i) CHECK(std::abs(y0[i] - y0m[i]) < 1e-13);
    for (int axis = 1; axis <= 3; ++axis) {
      Vec8 ya = ai_apply(pc, axis, x);
      Vec8 yb = matvec(assemble_Ai(eos, u, axis), x);
      for (size_t i = 0; i < 8; ++i) CHECK(std::abs(ya[i] - yb[i]) < 1e-13);
    }
    Vec8 inv = a0inv_apply(pc, a0_apply(pc, x));
    for (size_t i = 0; i < 8; ++i) CHECK(std::abs(inv[i] - x[i]) < 1e-12);
    auto dphi = random_lift_slopes(rng);
    Vec8 yt = a1_tilde_apply(pc, dphi, x);
    Vec8 ytm = matvec(assemble_A1_tilde(eos, u, dphi), x);
    for (size_t i = 0; i < 8; ++i) CHECK(std::abs(yt[i] - ytm[i]) < 1e-12);
  }
}
