#pragma once

#include <vector>

namespace latlab {

// Weight vector: strictly positive entries summing to 1 (tolerance 1e-12).
// Strict positivity is required because weighted quasi-norms exponentiate
// by 1/p_i.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> entries);

  static ProbabilityVector uniform(int len);

  int size() const { return static_cast<int>(entries_.size()); }
  double operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& entries() const { return entries_; }

  double min_entry() const;
  double max_entry() const;

  bool operator==(const ProbabilityVector& other) const {
    return entries_ == other.entries_;
  }

 private:
  std::vector<double> entries_;
};

}  // namespace latlab
