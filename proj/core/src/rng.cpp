#include "toricqs/detail/rng.hpp"

#include <cmath>

namespace toricqs::detail {

double Rng::exponential() {
  // Inversion of the unit-rate exponential CDF; 1 - uniform() avoids log(0).
  return -std::log(1.0 - uniform());
}

}  // namespace toricqs::detail
