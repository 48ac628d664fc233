#include "latlab/prob_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latlab {

ProbabilityVector::ProbabilityVector(std::vector<double> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty())
    throw std::invalid_argument("ProbabilityVector: needs at least one entry");
  double sum = 0.0;
  for (double p : entries_) {
    if (!(p > 0.0))
      throw std::invalid_argument(
          "ProbabilityVector: entries must be strictly positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("ProbabilityVector: entries must sum to 1");
}

ProbabilityVector ProbabilityVector::uniform(int len) {
  if (len < 1) throw std::invalid_argument("ProbabilityVector: length >= 1");
  std::vector<double> e(static_cast<std::size_t>(len), 0.0);
  // Make the last entry absorb rounding so the sum is exactly 1.
  double acc = 0.0;
  for (int i = 0; i + 1 < len; ++i) {
    e[static_cast<std::size_t>(i)] = 1.0 / len;
    acc += 1.0 / len;
  }
  e[static_cast<std::size_t>(len - 1)] = 1.0 - acc;
  return ProbabilityVector(std::move(e));
}

double ProbabilityVector::min_entry() const {
  return *std::min_element(entries_.begin(), entries_.end());
}

double ProbabilityVector::max_entry() const {
  return *std::max_element(entries_.begin(), entries_.end());
}

}  // namespace latlab
