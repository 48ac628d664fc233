#pragma once

#include <cstdint>

namespace latlab {

// Monte Carlo estimate with its binomial / sample standard error and the
// seed that produced it, so every number in an output file can be replayed.
struct AverageEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
};

// Mean and standard error of the sample mean from exact integer sums
// (sum of values and sum of squares).  Integer accumulation keeps the
// result independent of summation order and therefore of thread count.
AverageEstimate estimate_from_sums(long long n, long long sum,
                                   long long sum_sq, std::uint64_t seed);

// Binomial proportion scaled by `scale` (e.g. the sampling box volume for
// rejection-sampled volumes): mean = scale*p, se = scale*sqrt(p(1-p)/n).
AverageEstimate estimate_from_hits(long long n, long long hits, double scale,
                                   std::uint64_t seed);

}  // namespace latlab
