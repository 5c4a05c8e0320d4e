#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fbmhd {

// Seeded RNG wrapper so every randomized suite is reproducible from one
// integer.  mt19937_64 keeps streams identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(eng_);
  }
  double normal(double mean = 0.0, double stddev = 1.0) {
    // Box-Muller on demand; avoids std::normal_distribution's libstdc++
    // version dependence.
    double u1 = std::generate_canonical<double, 53>(eng_);
    double u2 = std::generate_canonical<double, 53>(eng_);
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.283185307179586 * u2);
  }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(eng_() % uint64_t(hi - lo + 1));
  }
  uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fbmhd
