#include "lgvloc/random.hpp"

#include <cmath>

#include "lgvloc/geometry.hpp"

namespace lgvloc {

double Rng::normal(double mean, double stddev) {
  // Always consumes two uniforms, even for stddev == 0, to keep the draw
  // count independent of parameter values.
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
  const double u2 = uniform01();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  return mean + stddev * z;
}

int Rng::poisson(double rate) {
  if (rate <= 0.0) {
    return 0;
  }
  const double limit = std::exp(-rate);
  int count = -1;
  double product = 1.0;
  do {
    product *= uniform01();
    ++count;
  } while (product > limit);
  return count;
}

uint64_t derive_seed(uint64_t base, uint64_t stream) {
  uint64_t z = base + stream * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace lgvloc
