#include "fbmhd/stencil.hpp"

#include "fbmhd/kernels.hpp"

namespace fbmhd {

TimeStencil time_stencil(int level, int levels, double dt) {
  TimeStencil s;
  if (level == 0) {
    s.offset[0] = 0;
    s.offset[1] = 1;
    s.offset[2] = 2;
    s.coeff[0] = -1.5 / dt;
    s.coeff[1] = 2.0 / dt;
    s.coeff[2] = -0.5 / dt;
  } else if (level == levels - 1) {
    s.offset[0] = 0;
    s.offset[1] = -1;
    s.offset[2] = -2;
    s.coeff[0] = 1.5 / dt;
    s.coeff[1] = -2.0 / dt;
    s.coeff[2] = 0.5 / dt;
  } else {
    s.offset[0] = 1;
    s.offset[1] = -1;
    s.offset[2] = 0;
    s.coeff[0] = 0.5 / dt;
    s.coeff[1] = -0.5 / dt;
    s.coeff[2] = 0.0;
  }
  return s;
}

TimeStencil x1_stencil(int i1, int n1, double h1) { return time_stencil(i1, n1, h1); }

void slab_deriv_plane(const SlabField& f, int axis, int comp, int level, int i1, double* out) {
  const SlabGrid& g = f.grid();
  const auto& k = kern::ops();
  size_t np = g.points_plane();
  switch (axis) {
    case 0: {
      TimeStencil s = time_stencil(level, g.levels(), g.dt());
      k.comb3(np, s.coeff[0], f.plane(comp, level + s.offset[0], i1), s.coeff[1],
              f.plane(comp, level + s.offset[1], i1), s.coeff[2],
              f.plane(comp, level + s.offset[2], i1), out);
      break;
    }
    case 1: {
      TimeStencil s = x1_stencil(i1, g.n1, g.h1());
      k.comb3(np, s.coeff[0], f.plane(comp, level, i1 + s.offset[0]), s.coeff[1],
              f.plane(comp, level, i1 + s.offset[1]), s.coeff[2],
              f.plane(comp, level, i1 + s.offset[2]), out);
      break;
    }
    case 2:
      plane_d2(f.plane(comp, level, i1), g.n2, g.n3, g.h2(), out);
      break;
    case 3:
      plane_d3(f.plane(comp, level, i1), g.n2, g.n3, g.h3(), out);
      break;
    default:
      throw UsageError("slab_deriv_plane: axis must be in 0..3");
  }
}

SlabField slab_deriv(const SlabField& f, int axis) {
  SlabField out(f.grid(), f.ncomp());
  for (int c = 0; c < f.ncomp(); ++c)
    for (int l = 0; l < f.grid().levels(); ++l)
      for (int i = 0; i < f.grid().n1; ++i) slab_deriv_plane(f, axis, c, l, i, out.plane(c, l, i));
  return out;
}

void plane_d2(const double* u, int n2, int n3, double h2, double* out) {
  const auto& k = kern::ops();
  double a = 0.5 / h2;
  for (int j = 0; j < n2; ++j) {
    int jp = (j + 1) % n2;
    int jm = (j + n2 - 1) % n2;
    k.sub_scale(size_t(n3), a, u + size_t(jp) * size_t(n3), u + size_t(jm) * size_t(n3),
                out + size_t(j) * size_t(n3));
  }
}

void plane_d3(const double* u, int n2, int n3, double h3, double* out) {
  const auto& k = kern::ops();
  double a = 0.5 / h3;
  for (int j = 0; j < n2; ++j) {
    const double* row = u + size_t(j) * size_t(n3);
    double* orow = out + size_t(j) * size_t(n3);
    if (n3 > 2) k.sub_scale(size_t(n3 - 2), a, row + 2, row, orow + 1);
    orow[0] = a * (row[1] - row[n3 - 1]);
    orow[n3 - 1] = a * (row[0] - row[n3 - 2]);
  }
}

void plane_d2_second(const double* u, int n2, int n3, double h2, double* out) {
  double a = 1.0 / (h2 * h2);
  for (int j = 0; j < n2; ++j) {
    int jp = (j + 1) % n2;
    int jm = (j + n2 - 1) % n2;
    const double* rp = u + size_t(jp) * size_t(n3);
    const double* rm = u + size_t(jm) * size_t(n3);
    const double* r0 = u + size_t(j) * size_t(n3);
    double* orow = out + size_t(j) * size_t(n3);
    for (int kx = 0; kx < n3; ++kx) orow[kx] = a * (rp[kx] - 2.0 * r0[kx] + rm[kx]);
  }
}

void plane_d3_second(const double* u, int n2, int n3, double h3, double* out) {
  double a = 1.0 / (h3 * h3);
  for (int j = 0; j < n2; ++j) {
    const double* row = u + size_t(j) * size_t(n3);
    double* orow = out + size_t(j) * size_t(n3);
    for (int kx = 0; kx < n3; ++kx) {
      int kp = (kx + 1) % n3;
      int km = (kx + n3 - 1) % n3;
      orow[kx] = a * (row[kp] - 2.0 * row[kx] + row[km]);
    }
  }
}

void bdry_dt_plane(const BoundaryField& f, int comp, int level, double* out) {
  const SlabGrid& g = f.grid();
  TimeStencil s = time_stencil(level, g.levels(), g.dt());
  kern::ops().comb3(g.points_plane(), s.coeff[0], f.level_data(comp, level + s.offset[0]),
                    s.coeff[1], f.level_data(comp, level + s.offset[1]), s.coeff[2],
                    f.level_data(comp, level + s.offset[2]), out);
}

BoundaryField bdry_deriv(const BoundaryField& f, int axis) {
  const SlabGrid& g = f.grid();
  BoundaryField out(g, f.ncomp());
  for (int c = 0; c < f.ncomp(); ++c) {
    for (int l = 0; l < g.levels(); ++l) {
      if (axis == 0)
        bdry_dt_plane(f, c, l, out.level_data(c, l));
      else if (axis == 2)
        plane_d2(f.level_data(c, l), g.n2, g.n3, g.h2(), out.level_data(c, l));
      else if (axis == 3)
        plane_d3(f.level_data(c, l), g.n2, g.n3, g.h3(), out.level_data(c, l));
      else
        throw UsageError("bdry_deriv: axis must be 0, 2 or 3");
    }
  }
  return out;
}

}  // namespace fbmhd
