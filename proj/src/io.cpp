#include "fbmhd/io.hpp"

#include <cstdio>
#include <cstring>

namespace fbmhd {

namespace {

constexpr size_t kHeaderBytes = 64;

std::string make_header(const char* magic, int nc, const SlabGrid& g) {
  char buf[kHeaderBytes + 1];
  int n = std::snprintf(buf, sizeof(buf), "%s %d %d %d %d %d %d %.9g %.9g %.9g %.9g\n", magic, nc,
                        g.nt, g.n_past, g.n1, g.n2, g.n3, g.h1(), g.h2(), g.h3(), g.dt());
  if (n < 0 || size_t(n) > kHeaderBytes)
    n = std::snprintf(buf, sizeof(buf), "%s %d %d %d %d %d %d %.5g %.5g %.5g %.5g\n", magic, nc,
                      g.nt, g.n_past, g.n1, g.n2, g.n3, g.h1(), g.h2(), g.h3(), g.dt());
  require(n > 0 && size_t(n) <= kHeaderBytes, "field header does not fit in 64 bytes");
  std::string h(buf, size_t(n));
  h.resize(kHeaderBytes, ' ');
  return h;
}

SlabGrid parse_header(const std::string& h, const char* magic, int& nc) {
  char tag[8] = {0};
  int nt, npast, n1, n2, n3;
  double h1, h2, h3, dt;
  int got = std::sscanf(h.c_str(), "%7s %d %d %d %d %d %d %lg %lg %lg %lg", tag, &nc, &nt, &npast,
                        &n1, &n2, &n3, &h1, &h2, &h3, &dt);
  require(got == 11 && std::strcmp(tag, magic) == 0, "bad field dump header");
  SlabGrid g;
  g.nt = nt;
  g.n_past = npast;
  g.n1 = n1;
  g.n2 = n2;
  g.n3 = n3;
  g.x1_extent = h1 * (n1 - 1);
  g.tangential_extent = h2 * n2;
  g.t_final = dt * (nt - 1);
  return g;
}

void write_blob(const std::string& path, const std::string& header,
                const std::vector<double>& data) {
  std::ofstream out(path, std::ios::binary);
  require(bool(out), "cannot open for writing: " + path);
  out.write(header.data(), std::streamsize(header.size()));
  out.write(reinterpret_cast<const char*>(data.data()),
            std::streamsize(data.size() * sizeof(double)));
  require(bool(out), "short write: " + path);
}

std::string read_header(std::ifstream& in, const std::string& path) {
  std::string h(kHeaderBytes, '\0');
  in.read(h.data(), std::streamsize(kHeaderBytes));
  require(bool(in), "cannot read header: " + path);
  return h;
}

}  // namespace

void write_slab_field(const std::string& path, const SlabField& f) {
  write_blob(path, make_header("MHDF1", f.ncomp(), f.grid()), f.data());
}

SlabField read_slab_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), "cannot open field dump: " + path);
  int nc = 0;
  SlabGrid g = parse_header(read_header(in, path), "MHDF1", nc);
  SlabField f(g, nc);
  in.read(reinterpret_cast<char*>(f.data().data()),
          std::streamsize(f.data().size() * sizeof(double)));
  require(bool(in), "truncated field dump: " + path);
  return f;
}

void write_boundary_field(const std::string& path, const BoundaryField& f) {
  write_blob(path, make_header("MHDB1", f.ncomp(), f.grid()), f.data());
}

BoundaryField read_boundary_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), "cannot open field dump: " + path);
  int nc = 0;
  SlabGrid g = parse_header(read_header(in, path), "MHDB1", nc);
  BoundaryField f(g, nc);
  in.read(reinterpret_cast<char*>(f.data().data()),
          std::streamsize(f.data().size() * sizeof(double)));
  require(bool(in), "truncated field dump: " + path);
  return f;
}

void write_initial_data(const std::string& dir, const ThermoModel& eos, double surface_tension,
                        const SpatialField& U0, const SpatialBoundary& phi0) {
  write_blob(dir + "/initial_state.fld", make_header("MHDS1", U0.ncomp, U0.grid), U0.data);
  write_blob(dir + "/initial_interface.fld", make_header("MHDP1", 1, phi0.grid), phi0.data);
  std::ofstream man(dir + "/initial_manifest.json");
  require(bool(man), "cannot write initial-data manifest");
  man << "{\n"
      << "  \"eos\": {\"gamma\": " << eos.gamma << ", \"rho_floor\": " << eos.rho_floor
      << ", \"rho_ceil\": " << eos.rho_ceil << ", \"entropy_scale\": " << eos.entropy_scale
      << ", \"p_stiff\": " << eos.p_stiff << "},\n"
      << "  \"surface_tension\": " << surface_tension << "\n}\n";
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), ncol_(columns.size()) {
  require(bool(out_), "cannot open csv for writing: " + path);
  for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  require(values.size() == ncol_, "csv row width mismatch");
  char buf[32];
  for (size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    out_ << (i ? "," : "") << buf;
  }
  out_ << "\n";
}

CsvWriter::~CsvWriter() { out_.flush(); }

}  // namespace fbmhd
