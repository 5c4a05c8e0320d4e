#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "fbmhd/compat.hpp"
#include "fbmhd/grid.hpp"

namespace fbmhd {

// Binary slab dump: 64-byte text header (magic, component count, level/grid
// dims, spacings) followed by the samples as row-major IEEE-754 doubles,
// little endian, in the field's storage order.
void write_slab_field(const std::string& path, const SlabField& f);
SlabField read_slab_field(const std::string& path);

void write_boundary_field(const std::string& path, const BoundaryField& f);
BoundaryField read_boundary_field(const std::string& path);

// Initial-data pair: single-time slab/boundary samples with the same header
// discipline.
void write_initial_data(const std::string& dir, const ThermoModel& eos, double surface_tension,
                        const SpatialField& U0, const SpatialBoundary& phi0);


// Line-oriented CSV with %.17g numbers: identical inputs give identical bytes.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  ~CsvWriter();

 private:
  std::ofstream out_;
  size_t ncol_;
};

}  // namespace fbmhd
