#pragma once

#include <cstdint>
#include <random>

namespace toricqs::detail {

/// Deterministic uniform doubles in [0, 1) built from the raw mt19937_64
/// stream (std::uniform_real_distribution is implementation-defined, so the
/// bits are converted directly for cross-platform reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Standard exponential via inversion.
  double exponential();

 private:
  std::mt19937_64 gen_;
};

}  // namespace toricqs::detail
