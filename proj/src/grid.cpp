#include "fbmhd/grid.hpp"

#include <algorithm>
#include <cmath>

#include "fbmhd/config.hpp"

namespace fbmhd {

SlabGrid SlabGrid::from_config(const Config& cfg) {
  SlabGrid g;
  g.n1 = int(cfg.get_int("grid.n1", g.n1));
  g.n2 = int(cfg.get_int("grid.n2", g.n2));
  g.n3 = int(cfg.get_int("grid.n3", g.n3));
  g.nt = int(cfg.get_int("grid.nt", g.nt));
  g.n_past = int(cfg.get_int("grid.n_past", g.n_past));
  g.x1_extent = cfg.get_double("grid.x1_extent", g.x1_extent);
  g.tangential_extent = cfg.get_double("grid.tangential_extent", g.tangential_extent);
  g.t_final = cfg.get_double("grid.t_final", g.t_final);
  g.validate();
  return g;
}

void SlabGrid::validate() const {
  require(n1 >= 8, "grid.n1 must be >= 8");
  require(n2 >= 4 && n3 >= 4, "tangential grid must have at least 4 points");
  require(nt >= 2 && n_past >= 1, "need at least 2 physical and 1 past time level");
  require(x1_extent >= 2.0, "grid.x1_extent must be >= 2 to resolve the cutoff transitions");
  require(tangential_extent > 0.0 && t_final > 0.0, "grid extents must be positive");
}

std::vector<MultiIndex> multi_indices_up_to(int max_weight) {
  std::vector<MultiIndex> out;
  for (int a4 = 0; 2 * a4 <= max_weight; ++a4) {
    int rest = max_weight - 2 * a4;
    for (int a0 = 0; a0 <= rest; ++a0)
      for (int a1 = 0; a0 + a1 <= rest; ++a1)
        for (int a2 = 0; a0 + a1 + a2 <= rest; ++a2)
          for (int a3 = 0; a0 + a1 + a2 + a3 <= rest; ++a3)
            out.push_back(MultiIndex{{a0, a1, a2, a3, a4}});
  }
  return out;
}

SlabField::SlabField(const SlabGrid& grid, int ncomp) : grid_(grid), ncomp_(ncomp) {
  data_.assign(size_t(ncomp) * size_t(grid.levels()) * grid.points_space(), 0.0);
}

void SlabField::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

BoundaryField::BoundaryField(const SlabGrid& grid, int ncomp) : grid_(grid), ncomp_(ncomp) {
  data_.assign(size_t(ncomp) * size_t(grid.levels()) * grid.points_plane(), 0.0);
}

void BoundaryField::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

double BoundaryField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const SlabField& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const SlabField& a, const SlabField& b) {
  require(a.same_shape(b), "max_abs_diff: shape mismatch");
  double m = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double max_abs_diff(const BoundaryField& a, const BoundaryField& b) {
  require(a.same_shape(b), "max_abs_diff: shape mismatch");
  double m = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

void add_scaled(SlabField& y, double s, const SlabField& x) {
  require(y.same_shape(x), "add_scaled: shape mismatch");
  for (size_t i = 0; i < y.data().size(); ++i) y.data()[i] += s * x.data()[i];
}

void add_scaled(BoundaryField& y, double s, const BoundaryField& x) {
  require(y.same_shape(x), "add_scaled: shape mismatch");
  for (size_t i = 0; i < y.data().size(); ++i) y.data()[i] += s * x.data()[i];
}

void scale(SlabField& y, double s) {
  for (double& v : y.data()) v *= s;
}

void scale(BoundaryField& y, double s) {
  for (double& v : y.data()) v *= s;
}

}  // namespace fbmhd
