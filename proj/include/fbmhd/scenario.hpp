#pragma once

#include <cstdint>
#include <string>

#include "fbmhd/config.hpp"

namespace fbmhd {

// Executes one named pipeline (check-operators, compat-check, solve-linear,
// adjoint-check, run-nashmoser), writing CSV/field artifacts and a JSON
// summary manifest into the output directory.  Returns true iff every check
// passed.  No artifacts are created before the configuration has parsed.
bool run_scenario(const std::string& kind, const Config& cfg, uint64_t seed,
                  const std::string& outdir, bool dump_fields);

}  // namespace fbmhd
