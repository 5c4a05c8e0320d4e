#include "fbmhd/compat.hpp"

#include <cmath>
#include <string>

#include "fbmhd/cutoffs.hpp"
#include "fbmhd/jets.hpp"
#include "fbmhd/operators.hpp"
#include "fbmhd/state_actions.hpp"
#include "fbmhd/stencil.hpp"

namespace fbmhd {

double SpatialBoundary::max_abs() const {
  double m = 0.0;
  for (double v : data) m = std::max(m, std::abs(v));
  return m;
}

namespace {

constexpr int kJetCap = 4;

using Jet8 = std::array<Jet, 8>;

// x1 derivative of a spatial plane stack
void spatial_d1(const SpatialField& f, int comp, int i1, double* out) {
  const SlabGrid& g = f.grid;
  TimeStencil s = x1_stencil(i1, g.n1, g.h1());
  size_t np = g.points_plane();
  const double* p0 = f.plane(comp, i1 + s.offset[0]);
  const double* p1 = f.plane(comp, i1 + s.offset[1]);
  const double* p2 = f.plane(comp, i1 + s.offset[2]);
  for (size_t p = 0; p < np; ++p)
    out[p] = s.coeff[0] * p0[p] + s.coeff[1] * p1[p] + s.coeff[2] * p2[p];
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= double(i);
  return f;
}

// rough magnitude of the data: discrete sup of values and first derivatives
double data_magnitude(const SpatialField& u0, const SpatialBoundary& phi0) {
  const SlabGrid& g = u0.grid;
  size_t np = g.points_plane();
  double m = 0.0;
  std::vector<double> d(np);
  for (int comp = 0; comp < u0.ncomp; ++comp)
    for (int i = 0; i < g.n1; ++i) {
      const double* v = u0.plane(comp, i);
      for (size_t p = 0; p < np; ++p) m = std::max(m, std::abs(v[p]));
      spatial_d1(u0, comp, i, d.data());
      for (size_t p = 0; p < np; ++p) m = std::max(m, std::abs(d[p]));
      plane_d2(v, g.n2, g.n3, g.h2(), d.data());
      for (size_t p = 0; p < np; ++p) m = std::max(m, std::abs(d[p]));
      plane_d3(v, g.n2, g.n3, g.h3(), d.data());
      for (size_t p = 0; p < np; ++p) m = std::max(m, std::abs(d[p]));
    }
  for (double v : phi0.data) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

DataJet time_derivatives(const ThermoModel& eos, const PrimaryState& reference,
                         const SpatialField& U0, const SpatialBoundary& phi0, int order) {
  require(U0.ncomp == 8, "time_derivatives expects the 8-component perturbation");
  require(order >= 0 && order <= kJetCap, "jet order cap is " + std::to_string(kJetCap));
  require_domain(phi0.max_abs() <= 0.25, "initial interface amplitude exceeds 1/4");
  const SlabGrid& g = U0.grid;
  size_t np = g.points_plane();

  DataJet jet;
  jet.order = order;
  jet.grid = g;
  jet.reference = reference;
  jet.u.assign(size_t(order) + 1, SpatialField(g, 8));
  jet.phi.assign(size_t(order) + 1, SpatialBoundary(g));
  jet.u[0] = U0;
  jet.phi[0] = phi0;
  jet.m0 = data_magnitude(U0, phi0);

  Vec8 uref = reference.as_vec();

  // series coefficients u_k = (d_t^k U)/k!, phi_k likewise
  std::vector<SpatialField> useries(size_t(order) + 1, SpatialField(g, 8));
  std::vector<SpatialBoundary> pseries(size_t(order) + 1, SpatialBoundary(g));
  useries[0] = U0;
  pseries[0] = phi0;

  std::vector<double> d2phi(np), d3phi(np);
  std::vector<std::vector<double>> d2p(size_t(order) + 1, std::vector<double>(np)),
      d3p(size_t(order) + 1, std::vector<double>(np));

  for (int j = 0; j < order; ++j) {
    int len = j + 1;  // known coefficients 0..j

    // interface coefficient j+1 from the kinematic identity
    // d_t phi = v1 - v2 d2 phi - v3 d3 phi on the trace
    for (int k = 0; k <= j; ++k) {
      plane_d2(pseries[size_t(k)].plane(), g.n2, g.n3, g.h2(), d2p[size_t(k)].data());
      plane_d3(pseries[size_t(k)].plane(), g.n2, g.n3, g.h3(), d3p[size_t(k)].data());
    }
    for (size_t p = 0; p < np; ++p) {
      double s = useries[size_t(j)].plane(kV1, 0)[p] + (j == 0 ? uref[kV1] : 0.0);
      for (int k = 0; k <= j; ++k) {
        double v2k = useries[size_t(k)].plane(kV2, 0)[p] + (k == 0 ? uref[kV2] : 0.0);
        double v3k = useries[size_t(k)].plane(kV3, 0)[p] + (k == 0 ? uref[kV3] : 0.0);
        s -= v2k * d2p[size_t(j - k)][p] + v3k * d3p[size_t(j - k)][p];
      }
      pseries[size_t(j + 1)].plane()[p] = s / double(j + 1);
    }

    // interior coefficient j+1 from the quasilinear system solved for d_t U
    std::vector<std::vector<double>> du(static_cast<size_t>(3 * 8 * len), std::vector<double>(np));
    for (int i = 0; i < g.n1; ++i) {
      double x1 = g.x1(i);
      double cv = chi(x1), cd = chi_deriv(x1);
      for (int k = 0; k < len; ++k)
        for (int comp = 0; comp < 8; ++comp) {
          spatial_d1(useries[size_t(k)], comp, i, du[size_t((0 * 8 + comp) * len + k)].data());
          plane_d2(useries[size_t(k)].plane(comp, i), g.n2, g.n3, g.h2(),
                   du[size_t((1 * 8 + comp) * len + k)].data());
          plane_d3(useries[size_t(k)].plane(comp, i), g.n2, g.n3, g.h3(),
                   du[size_t((2 * 8 + comp) * len + k)].data());
        }
      for (size_t p = 0; p < np; ++p) {
        ActionCoefs<Jet> pc;
        Jet8 uj, d1j, d2j, d3j;
        for (int comp = 0; comp < 8; ++comp) {
          Jet v(len);
          for (int k = 0; k < len; ++k) v[k] = useries[size_t(k)].plane(comp, i)[p];
          v[0] += uref[size_t(comp)];
          uj[size_t(comp)] = v;
          Jet a(len), b(len), c(len);
          for (int k = 0; k < len; ++k) {
            a[k] = du[size_t((0 * 8 + comp) * len + k)][p];
            b[k] = du[size_t((1 * 8 + comp) * len + k)][p];
            c[k] = du[size_t((2 * 8 + comp) * len + k)][p];
          }
          d1j[size_t(comp)] = a;
          d2j[size_t(comp)] = b;
          d3j[size_t(comp)] = c;
        }
        // lift planes as series; d_t phi needs phi coefficients to j+1
        std::array<Jet, 4> dphi;
        {
          Jet pt(len), p1(len), p2(len), p3(len);
          for (int k = 0; k < len; ++k) {
            pt[k] = cv * double(k + 1) * pseries[size_t(k + 1)].plane()[p];
            p1[k] = cd * pseries[size_t(k)].plane()[p];
            p2[k] = cv * d2p[size_t(k)][p];
            p3[k] = cv * d3p[size_t(k)][p];
          }
          p1[0] += 1.0;
          dphi = {pt, p1, p2, p3};
        }
        Jet pe = uj[kQ] - 0.5 * (uj[kH1] * uj[kH1] + uj[kH2] * uj[kH2] + uj[kH3] * uj[kH3]) +
                 eos.p_stiff;
        require_domain(pe[0] > 0.0, "initial data leave the EOS domain during transport");
        pc.c = 1.0 / (eos.gamma * pe);
        pc.rho = jet_pow(pe * jet_exp(uj[kS] * (-1.0 / eos.entropy_scale)), 1.0 / eos.gamma);
        pc.v = {uj[kV1], uj[kV2], uj[kV3]};
        pc.H = {uj[kH1], uj[kH2], uj[kH3]};

        Jet8 B = act_a1_tilde(pc, dphi, d1j);
        Jet8 B2 = act_ai(pc, 2, d2j);
        Jet8 B3 = act_ai(pc, 3, d3j);
        for (size_t comp = 0; comp < 8; ++comp) B[comp] = B[comp] + B2[comp] + B3[comp];
        Jet8 dtu = act_a0inv(pc, B);
        for (int comp = 0; comp < 8; ++comp)
          useries[size_t(j + 1)].plane(comp, i)[p] = -dtu[size_t(comp)][j] / double(j + 1);
      }
    }

    // derivative-convention storage
    double fact = factorial(j + 1);
    for (int comp = 0; comp < 8; ++comp)
      for (int i = 0; i < g.n1; ++i) {
        const double* src = useries[size_t(j + 1)].plane(comp, i);
        double* dst = jet.u[size_t(j + 1)].plane(comp, i);
        for (size_t p = 0; p < np; ++p) dst[p] = fact * src[p];
      }
    for (size_t p = 0; p < np; ++p)
      jet.phi[size_t(j + 1)].plane()[p] = fact * pseries[size_t(j + 1)].plane()[p];
  }
  return jet;
}

CompatReport compatibility_residuals(const ThermoModel& eos, const DataJet& jet,
                                     double surface_tension) {
  (void)eos;
  const SlabGrid& g = jet.grid;
  size_t np = g.points_plane();
  int m = jet.order;
  int len = m + 1;
  CompatReport rep;
  rep.max_residual.assign(size_t(m) + 1, 0.0);
  rep.residual_planes.assign(size_t(m) + 1, std::vector<double>(np, 0.0));

  // coefficient-convention series of the interface gradient and of f(xi)
  std::vector<std::vector<double>> x2s(static_cast<size_t>(len), std::vector<double>(np)),
      x3s(static_cast<size_t>(len), std::vector<double>(np)), f2s(static_cast<size_t>(len), std::vector<double>(np)),
      f3s(static_cast<size_t>(len), std::vector<double>(np));
  for (int k = 0; k < len; ++k) {
    double inv = 1.0 / factorial(k);
    std::vector<double> plane(np);
    for (size_t p = 0; p < np; ++p) plane[p] = inv * jet.phi[size_t(k)].plane()[p];
    plane_d2(plane.data(), g.n2, g.n3, g.h2(), x2s[size_t(k)].data());
    plane_d3(plane.data(), g.n2, g.n3, g.h3(), x3s[size_t(k)].data());
  }
  for (size_t p = 0; p < np; ++p) {
    Jet x2(len), x3(len);
    for (int k = 0; k < len; ++k) {
      x2[k] = x2s[size_t(k)][p];
      x3[k] = x3s[size_t(k)][p];
    }
    Jet invn = jet_pow(1.0 + x2 * x2 + x3 * x3, -0.5);
    Jet f2 = x2 * invn, f3 = x3 * invn;
    for (int k = 0; k < len; ++k) {
      f2s[size_t(k)][p] = f2[k];
      f3s[size_t(k)][p] = f3[k];
    }
  }
  std::vector<double> dvg(np), tmp(np);
  for (int j = 0; j <= m; ++j) {
    plane_d2(f2s[size_t(j)].data(), g.n2, g.n3, g.h2(), dvg.data());
    plane_d3(f3s[size_t(j)].data(), g.n2, g.n3, g.h3(), tmp.data());
    double fact = factorial(j);
    const double* qj = jet.u[size_t(j)].plane(kQ, 0);
    double qref = (j == 0) ? jet.reference.q : 0.0;
    double mx = 0.0;
    for (size_t p = 0; p < np; ++p) {
      double lhs = qref + qj[p];
      double rhs = surface_tension * fact * (dvg[p] + tmp[p]);
      double r = lhs - rhs;
      rep.residual_planes[size_t(j)][p] = r;
      mx = std::max(mx, std::abs(r));
    }
    rep.max_residual[size_t(j)] = mx;
  }
  return rep;
}

ApproximateSolution build_approximate_solution(const ThermoModel& eos, const DataJet& jet,
                                               double surface_tension, double tol) {
  CompatReport rep = compatibility_residuals(eos, jet, surface_tension);
  for (int j = 0; j <= jet.order; ++j)
    if (!(rep.max_residual[size_t(j)] <= tol))
      throw DomainError("initial data incompatible at order " + std::to_string(j) +
                        " (residual " + std::to_string(rep.max_residual[size_t(j)]) + ")");

  const SlabGrid& g = jet.grid;
  size_t np = g.points_plane();
  ApproximateSolution app{SlabField(g, 8), BoundaryField(g, 1)};
  Vec8 uref = jet.reference.as_vec();
  // hold the cutoff at one through the computational window so the window
  // dynamics are the pure Taylor extension; the decay happens beyond it
  double hold = g.t_final, width = g.t_final;
  for (int l = 0; l < g.levels(); ++l) {
    double t = g.time(l);
    double cut = time_cutoff(t, hold, width);
    for (int comp = 0; comp < 8; ++comp)
      for (int i = 0; i < g.n1; ++i) {
        double* dst = app.U.plane(comp, l, i);
        for (size_t p = 0; p < np; ++p) dst[p] = uref[size_t(comp)];
        double tk = 1.0;
        for (int j = 0; j <= jet.order; ++j) {
          double w = cut * tk / factorial(j);
          const double* src = jet.u[size_t(j)].plane(comp, i);
          for (size_t p = 0; p < np; ++p) dst[p] += w * src[p];
          tk *= t;
        }
      }
    double* dphi = app.phi.level_data(0, l);
    for (size_t p = 0; p < np; ++p) dphi[p] = 0.0;
    double tk = 1.0;
    for (int j = 0; j <= jet.order; ++j) {
      double w = cut * tk / factorial(j);
      const double* src = jet.phi[size_t(j)].plane();
      for (size_t p = 0; p < np; ++p) dphi[p] += w * src[p];
      tk *= t;
    }
  }
  return app;
}

SlabField approximate_forcing(const ThermoModel& eos, const ApproximateSolution& app) {
  SlabField f = nonlinear_interior_residual(eos, app.U, Lift::interface(app.phi));
  scale(f, -1.0);
  const SlabGrid& g = f.grid();
  for (int comp = 0; comp < 8; ++comp)
    for (int l = 0; l < g.levels(); ++l) {
      if (g.time(l) > 0.0) continue;
      for (int i = 0; i < g.n1; ++i) {
        double* p = f.plane(comp, l, i);
        for (size_t q = 0; q < g.points_plane(); ++q) p[q] = 0.0;
      }
    }
  return f;
}

}  // namespace fbmhd
