#include <cmath>
#include <complex>
#include <cstring>

#include "doctest.h"
#include "fbmhd/cutoffs.hpp"
#include "fbmhd/fft.hpp"
#include "fbmhd/hstar.hpp"
#include "fbmhd/linear_solver.hpp"
#include "fbmhd/samples.hpp"
#include "fbmhd/stencil.hpp"

using namespace fbmhd;

namespace {

ThermoModel liquid_eos() {
  ThermoModel m;
  m.p_stiff = 1.0;
  return m;
}

SlabGrid solver_grid(int n = 8, int nt = 12, double T = 0.2) {
  SlabGrid g;
  g.n1 = n + 1;
  g.n2 = n;
  g.n3 = n;
  g.nt = nt;
  g.n_past = 2;
  g.x1_extent = 4.0;
  g.tangential_extent = 2.0 * M_PI;
  g.t_final = T;
  return g;
}

// forcing on a single tangential mode with a smooth onset
SlabField mode_forcing(const SlabGrid& g, int m2, int m3, double amp) {
  SlabField f(g, 8);
  double k2 = 2.0 * M_PI * m2 / g.tangential_extent;
  double k3 = 2.0 * M_PI * m3 / g.tangential_extent;
  for (int l = 0; l < g.levels(); ++l) {
    double t = g.time(l);
    if (t <= 0.0) continue;
    double env = amp * t * t / (g.t_final * g.t_final);
    for (int comp = 0; comp < 8; ++comp)
      for (int i = 0; i < g.n1; ++i) {
        double prof = std::exp(-0.8 * g.x1(i)) * (comp == kQ || comp == kV1 ? 1.0 : 0.5);
        double* dst = f.plane(comp, l, i);
        for (int j = 0; j < g.n2; ++j)
          for (int k = 0; k < g.n3; ++k)
            dst[size_t(j) * size_t(g.n3) + size_t(k)] =
                env * prof * std::cos(k2 * g.x2(j)) * std::cos(k3 * g.x3(k));
      }
  }
  return f;
}

// 1-D (in x1) complex reduction of the same scheme on one tangential mode,
// independent implementation used as the solver oracle on constant bases
struct ModeOracle {
  using C = std::complex<double>;
  const SlabGrid& g;
  PointCoefs pc;
  double s;       // surface tension
  double eps;
  bool implicit_eps;
  double k2h, k3h;        // first-derivative symbols
  double lap_sym;         // minus the composed divergence-gradient symbol
  double bih_sym;         // fourth-difference symbol
  std::vector<std::array<C, 8>> W;
  C psi{0.0, 0.0};

  ModeOracle(const SlabGrid& grid, const PointCoefs& coefs, double st, double e, bool impl,
             int m2, int m3)
      : g(grid), pc(coefs), s(st), eps(e), implicit_eps(impl) {
    double k2 = 2.0 * M_PI * m2 / g.tangential_extent;
    double k3 = 2.0 * M_PI * m3 / g.tangential_extent;
    k2h = std::sin(k2 * g.h2()) / g.h2();
    k3h = std::sin(k3 * g.h3()) / g.h3();
    lap_sym = k2h * k2h + k3h * k3h;
    double s2 = 2.0 - 2.0 * std::cos(k2 * g.h2());
    double s3 = 2.0 - 2.0 * std::cos(k3 * g.h3());
    bih_sym = s2 * s2 / std::pow(g.h2(), 4) + s3 * s3 / std::pow(g.h3(), 4);
    W.assign(size_t(g.n1), {});
  }

  std::array<C, 8> rhs_at(int i, const std::vector<std::array<C, 8>>& Wc,
                          const std::array<C, 8>& fhat) const {
    // d1 by the shared stencil
    TimeStencil st = x1_stencil(i, g.n1, g.h1());
    std::array<C, 8> d1{};
    for (int comp = 0; comp < 8; ++comp)
      for (int r = 0; r < 3; ++r)
        d1[size_t(comp)] += st.coeff[r] * Wc[size_t(i + st.offset[r])][size_t(comp)];
    // N = A1 d1 W + i k2h A2 W + i k3h A3 W
    auto apply = [&](int axis, const std::array<C, 8>& x) {
      std::array<C, 8> y{};
      // complex version of the flux action with v = H = 0 except the
      // equilibrium values in pc (v = 0, H = 0 for the flat liquid base)
      // so only the pressure-velocity couplings survive
      y[0] = x[size_t(axis)];
      y[size_t(axis)] = x[0];
      return y;
    };
    std::array<C, 8> n{};
    {
      std::array<C, 8> t = apply(1, d1);
      for (int c = 0; c < 8; ++c) n[size_t(c)] = t[size_t(c)];
      t = apply(2, Wc[size_t(i)]);
      for (int c = 0; c < 8; ++c) n[size_t(c)] += C(0.0, k2h) * t[size_t(c)];
      t = apply(3, Wc[size_t(i)]);
      for (int c = 0; c < 8; ++c) n[size_t(c)] += C(0.0, k3h) * t[size_t(c)];
    }
    std::array<C, 8> r{};
    for (int c = 0; c < 8; ++c) r[size_t(c)] = fhat[size_t(c)] - n[size_t(c)];
    if (eps > 0.0) r[kV1] += eps * d1[kV1];
    // A0^{-1} for the equilibrium: diag(1/c, 1/rho,...,1)
    r[0] *= 1.0 / pc.c;
    for (int c = 1; c <= 3; ++c) r[size_t(c)] *= 1.0 / pc.rho;
    return r;
  }

  void impose(C ps) { W[0][kQ] = s * (-lap_sym) * ps; }

  // one Heun step from level l, with the mode amplitudes of the forcing
  void step(const std::array<C, 8>* f_l, const std::array<C, 8>* f_l1, int /*level*/) {
    double dt = g.dt();
    if (implicit_eps && eps > 0.0) psi /= (1.0 + 0.5 * eps * dt * bih_sym);
    // stage 1
    std::vector<std::array<C, 8>> k1(size_t(g.n1));
    for (int i = 0; i < g.n1; ++i) k1[size_t(i)] = rhs_at(i, W, f_l[i]);
    C dpsi1 = W[0][kV1];
    if (!implicit_eps && eps > 0.0) dpsi1 -= eps * bih_sym * psi;
    std::vector<std::array<C, 8>> Ws(size_t(g.n1));
    for (int i = 0; i < g.n1; ++i)
      for (int c = 0; c < 8; ++c)
        Ws[size_t(i)][size_t(c)] = W[size_t(i)][size_t(c)] + dt * k1[size_t(i)][size_t(c)];
    C psis = psi + dt * dpsi1;
    Ws[0][kQ] = s * (-lap_sym) * psis;
    // stage 2
    std::vector<std::array<C, 8>> k2v(size_t(g.n1));
    for (int i = 0; i < g.n1; ++i) k2v[size_t(i)] = rhs_at(i, Ws, f_l1[i]);
    C dpsi2 = Ws[0][kV1];
    if (!implicit_eps && eps > 0.0) dpsi2 -= eps * bih_sym * psis;
    for (int i = 0; i < g.n1; ++i)
      for (int c = 0; c < 8; ++c)
        W[size_t(i)][size_t(c)] =
            0.5 * (W[size_t(i)][size_t(c)] + Ws[size_t(i)][size_t(c)] + dt * k2v[size_t(i)][size_t(c)]);
    psi = 0.5 * (psi + psis + dt * dpsi2);
    if (implicit_eps && eps > 0.0) psi /= (1.0 + 0.5 * eps * dt * bih_sym);
    impose(psi);
  }
};

}  // namespace

TEST_CASE("trace lift reproduces the boundary source") {
  ThermoModel eos = liquid_eos();
  SlabGrid g = solver_grid();
  Rng rng(41);
  BasicState base = sample_basic_state(eos, 1.0, g, rng, 0.04);

  BoundaryField zg(g, 2);
  SlabField v0 = lift_boundary_source(base, zg);
  CHECK(max_abs(v0) == 0.0);

  BoundaryField gsrc(g, 2);
  for (int l = 0; l < g.levels(); ++l) {
    double t = g.time(l);
    if (t <= 0.0) continue;
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) {
        gsrc.at(0, l, j, k) = t * std::sin(g.x2(j));
        gsrc.at(1, l, j, k) = t * std::cos(g.x3(k));
      }
  }
  SlabField vnat = lift_boundary_source(base, gsrc);
  BoundaryField zero_psi(g, 1);
  BoundaryField back = apply_Be_prime(base, vnat, zero_psi);
  CHECK(max_abs_diff(back, gsrc) < 1e-12);

  SUBCASE("only velocity components respond to the kinematic source") {
    BoundaryField g1(g, 2);
    for (int l = 0; l < g.levels(); ++l) {
      if (g.time(l) <= 0.0) continue;
      for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) g1.at(0, l, j, k) = g.time(l);
    }
    SlabField v1 = lift_boundary_source(base, g1);
    for (int comp : {kQ, kH1, kH2, kH3, kS}) {
      double m = 0;
      for (int l = 0; l < g.levels(); ++l)
        for (int i = 0; i < g.n1; ++i)
          for (size_t p = 0; p < g.points_plane(); ++p)
            m = std::max(m, std::abs(v1.plane(comp, l, i)[p]));
      if (comp == kQ)
        CHECK(m == 0.0);
      else if (comp >= kH1)
        CHECK(m == 0.0);
    }
  }

  SUBCASE("non-vanishing pre-history is rejected") {
    BoundaryField bad(g, 2);
    bad.fill(0.1);
    CHECK_THROWS_AS(lift_boundary_source(base, bad), DomainError);
  }
}

TEST_CASE("linear march: zero data, causality, linearity, determinism") {
  ThermoModel eos = liquid_eos();
  SlabGrid g = solver_grid();
  BasicState base = equilibrium_base(eos, 1.0, g);
  SchemeParams sp;

  SUBCASE("zero data give the zero solution") {
    LinearSolveReport rep = solve_linearized(base, SlabField(g, 8), BoundaryField(g, 2), sp);
    CHECK(max_abs(rep.W) == 0.0);
    CHECK(rep.psi.max_abs() == 0.0);
    CHECK(rep.stable);
  }

  SUBCASE("CFL refusal") {
    SlabGrid bad = g;
    bad.nt = 2;  // dt = T, far above the bound
    BasicState b2 = equilibrium_base(eos, 1.0, bad);
    CHECK_THROWS_AS(solve_linearized(b2, SlabField(bad, 8), BoundaryField(bad, 2), sp),
                    DomainError);
  }

  SUBCASE("causality: solution vanishes before the forcing starts") {
    SlabField f = mode_forcing(g, 1, 1, 1.0);
    // push the onset to the second half of the window
    int lmid = g.n_past + g.nt / 2;
    for (int comp = 0; comp < 8; ++comp)
      for (int l = 0; l < lmid; ++l)
        for (int i = 0; i < g.n1; ++i)
          for (size_t p = 0; p < g.points_plane(); ++p) f.plane(comp, l, i)[p] = 0.0;
    LinearSolveReport rep = solve_linearized(base, f, BoundaryField(g, 2), sp);
    for (int comp = 0; comp < 8; ++comp)
      for (int l = 0; l < lmid; ++l)
        for (int i = 0; i < g.n1; ++i)
          for (size_t p = 0; p < g.points_plane(); ++p)
            CHECK(rep.W.plane(comp, l, i)[p] == 0.0);
  }

  SUBCASE("linearity and determinism") {
    Rng rng(42);
    SlabField f1 = mode_forcing(g, 1, 0, 1.0);
    SlabField f2 = mode_forcing(g, 2, 1, 0.7);
    LinearSolveReport r1 = solve_linearized(base, f1, BoundaryField(g, 2), sp);
    LinearSolveReport r2 = solve_linearized(base, f2, BoundaryField(g, 2), sp);
    SlabField fc = f1;
    add_scaled(fc, -2.0, f2);
    LinearSolveReport rc = solve_linearized(base, fc, BoundaryField(g, 2), sp);
    SlabField expect = r1.W;
    add_scaled(expect, -2.0, r2.W);
    CHECK(max_abs_diff(rc.W, expect) < 1e-10);

    LinearSolveReport r1b = solve_linearized(base, f1, BoundaryField(g, 2), sp);
    CHECK(std::memcmp(r1.W.data().data(), r1b.W.data().data(),
                      r1.W.data().size() * sizeof(double)) == 0);
  }
}

TEST_CASE("single-mode solve matches the 1-D complex reduction") {
  ThermoModel eos = liquid_eos();
  SlabGrid g = solver_grid(8, 16, 0.2);
  BasicState base = equilibrium_base(eos, 1.3, g);
  SchemeParams sp;
  int m2 = 2, m3 = 1;
  PointCoefs pc = point_coefs(eos, equilibrium_state(eos));

  for (double eps : {0.0, 1e-2}) {
    SlabField f = mode_forcing(g, m2, m3, 1.0);
    LinearSolveReport rep = solve_regularized(base, f, BoundaryField(g, 2), eps, sp);
    REQUIRE(rep.stable);

    ModeOracle oracle(g, pc, 1.3, eps, sp.implicit_eps, m2, m3);
    // forcing amplitudes per level and x1 (the cosine-product mode carries
    // its own complex amplitude: use the (0,0) tangential sample divided by
    // the mode value... simpler: the forcing is real cos*cos; represent as
    // the sum of four complex modes, but since the scheme is real-linear and
    // the oracle is linear in f, evolve the cos*cos shape directly by noting
    // D2 cos = -k2h sin: instead compare on the lattice via the real part of
    // a single complex mode e^{i(k2 x2 + k3 x3)} and build the matching real
    // forcing.
    SlabGrid gg = g;
    SlabField fc(gg, 8);
    double k2 = 2.0 * M_PI * m2 / g.tangential_extent;
    double k3 = 2.0 * M_PI * m3 / g.tangential_extent;
    std::vector<std::array<ModeOracle::C, 8>> fl(size_t(g.levels() * g.n1));
    for (int l = 0; l < g.levels(); ++l) {
      double t = g.time(l);
      double env = t > 0.0 ? t * t / (g.t_final * g.t_final) : 0.0;
      for (int i = 0; i < g.n1; ++i) {
        for (int comp = 0; comp < 8; ++comp) {
          double prof = std::exp(-0.8 * g.x1(i)) * (comp == kQ || comp == kV1 ? 1.0 : 0.5);
          double amp = env * prof;
          fl[size_t(l * g.n1 + i)][size_t(comp)] = amp;
          double* dst = fc.plane(comp, l, i);
          for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k)
              dst[size_t(j) * size_t(g.n3) + size_t(k)] =
                  amp * std::cos(k2 * g.x2(j) + k3 * g.x3(k));
        }
      }
    }
    LinearSolveReport repc = solve_regularized(base, fc, BoundaryField(g, 2), eps, sp);
    for (int l = 0; l + 1 < g.levels(); ++l)
      oracle.step(&fl[size_t(l * g.n1)], &fl[size_t((l + 1) * g.n1)], l);
    // compare the final level across the slab
    int lf = g.levels() - 1;
    double err = 0.0;
    for (int comp = 0; comp < 8; ++comp)
      for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
          for (int k = 0; k < g.n3; ++k) {
            double phase = k2 * g.x2(j) + k3 * g.x3(k);
            ModeOracle::C mode(std::cos(phase), std::sin(phase));
            double expect = (oracle.W[size_t(i)][size_t(comp)] * mode).real();
            err = std::max(err, std::abs(repc.W.at(comp, lf, i, j, k) - expect));
          }
    CHECK(err < 1e-8);
  }
}

TEST_CASE("regularization statics and vanishing limit") {
  ThermoModel eos = liquid_eos();
  SlabGrid g = solver_grid(8, 16, 0.2);
  BasicState base = equilibrium_base(eos, 1.0, g);
  SchemeParams sp;
  SlabField f = mode_forcing(g, 1, 1, 0.1);

  LinearSolveReport r0 = solve_linearized(base, f, BoundaryField(g, 2), sp);
  std::vector<double> epss = {1e-2, 1e-3, 1e-4};
  std::vector<double> diffs;
  double lo = 1e300, hi = 0.0;
  for (double eps : epss) {
    LinearSolveReport re = solve_regularized(base, f, BoundaryField(g, 2), eps, sp);
    REQUIRE(re.stable);
    const auto& row = re.energy.back();
    double lhs = row.w_h1 + row.d1wnc + row.wnc_trace + row.psi_h1;
    lo = std::min(lo, lhs);
    hi = std::max(hi, lhs);
    SlabField d = re.W;
    add_scaled(d, -1.0, r0.W);
    diffs.push_back(l2_spacetime(d));
  }
  CHECK(hi < 2.0 * lo);
  double slope = loglog_slope(epss, diffs);
  CHECK(slope > 0.8);
  CHECK(slope < 1.2);
}

TEST_CASE("boundary energy contribution of the tension term is nonnegative") {
  ThermoModel eos = liquid_eos();
  SlabGrid g = solver_grid(8, 12, 0.15);
  Rng rng(55);
  BasicState base = sample_basic_state(eos, 1.0, g, rng, 0.03);
  SlabField f = mode_forcing(g, 1, 1, 0.5);
  LinearSolveReport rep = solve_linearized(base, f, BoundaryField(g, 2), SchemeParams{});
  REQUIRE(rep.stable);
  size_t np = g.points_plane();
  std::vector<double> z2(np), z3(np), xi2(np), xi3(np);
  const BoundaryField& phi = base.lift().boundary();
  for (int l = 0; l < g.levels(); ++l) {
    plane_d2(rep.psi.level_data(0, l), g.n2, g.n3, g.h2(), z2.data());
    plane_d3(rep.psi.level_data(0, l), g.n2, g.n3, g.h3(), z3.data());
    plane_d2(phi.level_data(0, l), g.n2, g.n3, g.h2(), xi2.data());
    plane_d3(phi.level_data(0, l), g.n2, g.n3, g.h3(), xi3.data());
    double acc = 0.0;
    for (size_t p = 0; p < np; ++p) {
      double n2 = 1.0 + xi2[p] * xi2[p] + xi3[p] * xi3[p];
      acc += (z2[p] * z2[p] + z3[p] * z3[p]) / (n2 * std::sqrt(n2));
    }
    CHECK(base.surface_tension() * acc >= 0.0);
  }
}

TEST_CASE("summation-by-parts defect of the dual pairing shrinks at second order") {
  ThermoModel eos = liquid_eos();
  Rng rng(66);
  // analytic fields sampled coherently on both grids
  struct ModeSpec {
    int m2, m3;
    double a, d, p2;
  };
  std::vector<std::vector<ModeSpec>> specsW(8), specsWs(8);
  for (int comp = 0; comp < 8; ++comp)
    for (int n = 0; n < 2; ++n) {
      specsW[size_t(comp)].push_back({rng.uniform_int(0, 2), rng.uniform_int(0, 2),
                                      rng.uniform(-1, 1), rng.uniform(0.5, 1.2),
                                      rng.uniform(0, 6.28)});
      specsWs[size_t(comp)].push_back({rng.uniform_int(0, 2), rng.uniform_int(0, 2),
                                       rng.uniform(-1, 1), rng.uniform(0.5, 1.2),
                                       rng.uniform(0, 6.28)});
    }
  auto build = [&](const SlabGrid& g, bool star) {
    SlabField f(g, 8);
    const auto& specs = star ? specsWs : specsW;
    for (int comp = 0; comp < 8; ++comp)
      for (int l = 0; l < g.levels(); ++l) {
        double t = g.time(l);
        double tw = star ? (g.t_final - t) : t;  // vanish at the far end
        if (tw <= 0.0) continue;
        double env = tw * tw / (g.t_final * g.t_final);
        for (int i = 0; i < g.n1; ++i) {
          // compact support away from the top wall
          double w = 1.0 - smoothstep01(g.x1(i) - 2.0);
          for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k) {
              double v = 0.0;
              for (const auto& m : specs[size_t(comp)])
                v += m.a * std::exp(-m.d * g.x1(i)) *
                     std::cos(m.m2 * g.x2(j) + m.p2) * std::cos(m.m3 * g.x3(k));
              f.at(comp, l, i, j, k) = env * w * v;
            }
        }
      }
    return f;
  };

  std::vector<double> hs, defects;
  for (int n : {8, 16}) {
    SlabGrid g = solver_grid(n, n, 0.2);
    Rng rb(7);
    BasicState base = sample_basic_state(eos, 1.0, g, rb, 0.03);
    SlabField W = build(g, false);
    SlabField Ws = build(g, true);
    defects.push_back(adjoint_identity_defect(base, W, Ws, 1e-2));
    hs.push_back(g.h2());
  }
  CHECK(defects[1] < defects[0]);
  double rate = std::log(defects[0] / defects[1]) / std::log(hs[0] / hs[1]);
  CHECK(rate > 1.5);
  CHECK(rate < 3.0);

  SUBCASE("zero dual field gives zero defect") {
    SlabGrid g = solver_grid(8, 8, 0.2);
    Rng rb(8);
    BasicState base = sample_basic_state(eos, 1.0, g, rb, 0.03);
    SlabField W = build(g, false);
    CHECK(adjoint_identity_defect(base, W, SlabField(g, 8), 1e-2) == 0.0);
  }
}
