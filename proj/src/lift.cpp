#include "fbmhd/lift.hpp"

#include "fbmhd/cutoffs.hpp"
#include "fbmhd/kernels.hpp"
#include "fbmhd/stencil.hpp"

namespace fbmhd {

Lift::Lift(const BoundaryField& phi, bool identity)
    : phi_(phi),
      dt_(bdry_deriv(phi, 0)),
      d2_(bdry_deriv(phi, 2)),
      d3_(bdry_deriv(phi, 3)),
      identity_(identity),
      amp_(phi.max_abs()) {}

Lift Lift::interface(const BoundaryField& phi) {
  require(phi.ncomp() == 1, "interface lift expects a scalar boundary field");
  require_domain(phi.max_abs() <= 0.5, "interface amplitude exceeds 1/2");
  return Lift(phi, true);
}

Lift Lift::perturbation(const BoundaryField& psi) {
  require(psi.ncomp() == 1, "perturbation lift expects a scalar boundary field");
  return Lift(psi, false);
}

Lift::Planes Lift::eval(int level, int i1, std::vector<double>& scratch, bool second) const {
  const SlabGrid& g = phi_.grid();
  size_t np = g.points_plane();
  scratch.resize(9 * np);
  const auto& k = kern::ops();

  double x1 = g.x1(i1);
  double cv = chi(x1), cd = chi_deriv(x1), cdd = chi_second(x1);

  double* val = scratch.data();
  double* pt = scratch.data() + np;
  double* p1 = scratch.data() + 2 * np;
  double* p2 = scratch.data() + 3 * np;
  double* p3 = scratch.data() + 4 * np;

  const double* phi = phi_.level_data(0, level);
  const double* dtphi = dt_.level_data(0, level);
  const double* d2phi = d2_.level_data(0, level);
  const double* d3phi = d3_.level_data(0, level);

  k.scal(np, cv, phi, val);
  k.scal(np, cv, dtphi, pt);
  k.scal(np, cd, phi, p1);
  k.scal(np, cv, d2phi, p2);
  k.scal(np, cv, d3phi, p3);
  if (identity_) {
    for (size_t p = 0; p < np; ++p) {
      val[p] += x1;
      p1[p] += 1.0;
    }
  }

  Planes out;
  out.val = val;
  out.d = {pt, p1, p2, p3};
  if (second) {
    double* t1t = scratch.data() + 5 * np;
    double* t11 = scratch.data() + 6 * np;
    double* t12 = scratch.data() + 7 * np;
    double* t13 = scratch.data() + 8 * np;
    k.scal(np, cd, dtphi, t1t);
    k.scal(np, cdd, phi, t11);
    k.scal(np, cd, d2phi, t12);
    k.scal(np, cd, d3phi, t13);
    out.d1d = {t1t, t11, t12, t13};
  } else {
    out.d1d = {nullptr, nullptr, nullptr, nullptr};
  }
  return out;
}

std::array<double, 4> Lift::dphi_at(int level, int i1, int i2, int i3) const {
  const SlabGrid& g = phi_.grid();
  double x1 = g.x1(i1);
  double cv = chi(x1), cd = chi_deriv(x1);
  double base = identity_ ? 1.0 : 0.0;
  return {cv * dt_.at(0, level, i2, i3), base + cd * phi_.at(0, level, i2, i3),
          cv * d2_.at(0, level, i2, i3), cv * d3_.at(0, level, i2, i3)};
}

double Lift::value_at(int level, int i1, int i2, int i3) const {
  const SlabGrid& g = phi_.grid();
  double x1 = g.x1(i1);
  return (identity_ ? x1 : 0.0) + chi(x1) * phi_.at(0, level, i2, i3);
}

}  // namespace fbmhd
