#include "latlab/estimates.hpp"

#include <cmath>

namespace latlab {

AverageEstimate estimate_from_sums(long long n, long long sum, long long sum_sq,
                                   std::uint64_t seed) {
  AverageEstimate e;
  e.samples = n;
  e.seed = seed;
  if (n <= 0) return e;
  const double mean = static_cast<double>(sum) / static_cast<double>(n);
  e.mean = mean;
  if (n >= 2) {
    // Unbiased sample variance from exact sums; guard the tiny negative
    // residue that cancellation can leave.
    const double ss =
        static_cast<double>(sum_sq) - static_cast<double>(sum) * mean;
    const double var = ss / static_cast<double>(n - 1);
    e.std_error = var > 0.0 ? std::sqrt(var / static_cast<double>(n)) : 0.0;
  }
  return e;
}

AverageEstimate estimate_from_hits(long long n, long long hits, double scale,
                                   std::uint64_t seed) {
  AverageEstimate e;
  e.samples = n;
  e.seed = seed;
  if (n <= 0) return e;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  e.mean = scale * p;
  e.std_error = scale * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return e;
}

}  // namespace latlab
