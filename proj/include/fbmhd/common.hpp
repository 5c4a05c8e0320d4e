#pragma once

#include <stdexcept>
#include <string>

namespace fbmhd {

// Input violates a physical-domain contract (EOS domain, hyperbolicity window,
// degenerate lift, amplitude gates).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller broke an API contract (bad axis index, mismatched grids, order overflow).
struct UsageError : std::logic_error {
  explicit UsageError(const std::string& msg) : std::logic_error(msg) {}
};

// Config file could not be parsed or is missing required keys.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw UsageError(msg);
}

inline void require_domain(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

}  // namespace fbmhd
