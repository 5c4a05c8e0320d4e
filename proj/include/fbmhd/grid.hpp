#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fbmhd/common.hpp"

namespace fbmhd {

class Config;

// Discretization of the half-space slab [0,X1] x [0,L)^2 over the time
// window [-n_past*dt, T].  x1 includes both endpoints (spacing X1/(n1-1));
// the tangential directions are periodic (spacing L/n).  The n_past levels at
// t < 0 carry the "vanishing in the past" convention: perturbation fields are
// zero there, basic states extend smoothly.
struct SlabGrid {
  int n1 = 16;
  int n2 = 16;
  int n3 = 16;
  int nt = 16;        // physical levels on [0, T]
  int n_past = 2;     // zero-padded pre-history levels
  double x1_extent = 4.0;
  double tangential_extent = 6.283185307179586;
  double t_final = 0.4;

  static SlabGrid from_config(const Config& cfg);

  void validate() const;

  int levels() const { return nt + n_past; }
  double h1() const { return x1_extent / double(n1 - 1); }
  double h2() const { return tangential_extent / double(n2); }
  double h3() const { return tangential_extent / double(n3); }
  double dt() const { return nt > 1 ? t_final / double(nt - 1) : t_final; }

  double x1(int i) const { return h1() * double(i); }
  double x2(int j) const { return h2() * double(j); }
  double x3(int k) const { return h3() * double(k); }
  double time(int level) const { return dt() * double(level - n_past); }

  size_t points_space() const { return size_t(n1) * size_t(n2) * size_t(n3); }
  size_t points_plane() const { return size_t(n2) * size_t(n3); }

  bool same_shape(const SlabGrid& o) const {
    return n1 == o.n1 && n2 == o.n2 && n3 == o.n3 && nt == o.nt && n_past == o.n_past;
  }
};

// Multi-index for the weighted tangential calculus: counts of
// (d_t, sigma*d_1, d_2, d_3, d_1) applications.  The weight doubles the
// plain normal derivative count.
struct MultiIndex {
  std::array<int, 5> a{};

  int order() const { return a[0] + a[1] + a[2] + a[3] + a[4]; }
  int weight() const { return order() + a[4]; }
  bool zero() const { return weight() == 0; }
};

// All multi-indices with weight() <= max_weight, enumerated in a fixed order.
std::vector<MultiIndex> multi_indices_up_to(int max_weight);

// Multi-component grid function on the slab: layout [comp][level][i1][i2][i3]
// with i3 contiguous, so each (comp, level, i1) tangential plane is one
// contiguous run of n2*n3 doubles.
class SlabField {
 public:
  SlabField() = default;
  SlabField(const SlabGrid& grid, int ncomp);

  const SlabGrid& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }

  double* plane(int comp, int level, int i1) {
    return data_.data() + plane_offset(comp, level, i1);
  }
  const double* plane(int comp, int level, int i1) const {
    return data_.data() + plane_offset(comp, level, i1);
  }
  double* level_data(int comp, int level) { return plane(comp, level, 0); }
  const double* level_data(int comp, int level) const { return plane(comp, level, 0); }

  double& at(int comp, int level, int i1, int i2, int i3) {
    return data_[plane_offset(comp, level, i1) + size_t(i2) * size_t(grid_.n3) + size_t(i3)];
  }
  double at(int comp, int level, int i1, int i2, int i3) const {
    return data_[plane_offset(comp, level, i1) + size_t(i2) * size_t(grid_.n3) + size_t(i3)];
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double value);
  bool same_shape(const SlabField& o) const {
    return grid_.same_shape(o.grid_) && ncomp_ == o.ncomp_;
  }

 private:
  size_t plane_offset(int comp, int level, int i1) const {
    return ((size_t(comp) * size_t(grid_.levels()) + size_t(level)) * size_t(grid_.n1) +
            size_t(i1)) *
           grid_.points_plane();
  }

  SlabGrid grid_;
  int ncomp_ = 0;
  std::vector<double> data_;
};

// Scalar (or multi-component) function on the periodic boundary grid with the
// same time levels as the slab: layout [comp][level][i2][i3].
class BoundaryField {
 public:
  BoundaryField() = default;
  BoundaryField(const SlabGrid& grid, int ncomp = 1);

  const SlabGrid& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }

  double* level_data(int comp, int level) {
    return data_.data() + (size_t(comp) * size_t(grid_.levels()) + size_t(level)) *
                              grid_.points_plane();
  }
  const double* level_data(int comp, int level) const {
    return data_.data() + (size_t(comp) * size_t(grid_.levels()) + size_t(level)) *
                              grid_.points_plane();
  }

  double& at(int comp, int level, int i2, int i3) {
    return level_data(comp, level)[size_t(i2) * size_t(grid_.n3) + size_t(i3)];
  }
  double at(int comp, int level, int i2, int i3) const {
    return level_data(comp, level)[size_t(i2) * size_t(grid_.n3) + size_t(i3)];
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double value);
  double max_abs() const;
  bool same_shape(const BoundaryField& o) const {
    return grid_.same_shape(o.grid_) && ncomp_ == o.ncomp_;
  }

 private:
  SlabGrid grid_;
  int ncomp_ = 0;
  std::vector<double> data_;
};

double max_abs(const SlabField& f);
double max_abs_diff(const SlabField& a, const SlabField& b);
double max_abs_diff(const BoundaryField& a, const BoundaryField& b);

// y += s * x, fields of identical shape
void add_scaled(SlabField& y, double s, const SlabField& x);
void add_scaled(BoundaryField& y, double s, const BoundaryField& x);
void scale(SlabField& y, double s);
void scale(BoundaryField& y, double s);

}  // namespace fbmhd
