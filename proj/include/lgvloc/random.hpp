#pragma once

#include <cstdint>
#include <random>

namespace lgvloc {

/// Deterministic random stream with a fixed draw discipline. All variates
/// are derived from mt19937_64 by hand (no std distributions), so a given
/// seed yields the same sequence on every platform and standard library.
/// The draw counts per call are part of the reproducibility contract:
///   uniform01 / uniform / bernoulli : 1 draw
///   normal                          : 2 draws (Box-Muller, cosine branch)
///   poisson(rate > 0)               : 1 draw per trial until termination
///   poisson(rate <= 0)              : 0 draws
class Rng {
 public:
  Rng() : engine_(0) {}
  explicit Rng(uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean, double stddev);

  bool bernoulli(double p) { return uniform01() < p; }

  int poisson(double rate);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Stable derivation of per-component seeds from one base seed (splitmix64
/// over base + stream index).
uint64_t derive_seed(uint64_t base, uint64_t stream);

}  // namespace lgvloc
