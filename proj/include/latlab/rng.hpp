#pragma once

#include <cstdint>

namespace latlab {

// Deterministic 64-bit random stream (splitmix64 core).  Every stochastic
// operation takes an explicit seed; independent substreams are derived by
// index so that fixed-size sample chunks can run on any number of threads
// and still reproduce bit-identical results.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Independent stream for chunk `index` of the experiment seeded by `seed`.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53 random bits.
  double next_unit();

  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi);

  // Standard normal via Box-Muller; pairs are cached.
  double next_normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace latlab
