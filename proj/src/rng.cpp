#include "latlab/rng.hpp"

#include <cmath>

namespace latlab {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : state_(mix64(seed + kGolden)) {}

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(mix64(seed + kGolden) ^ mix64((index + 1) * kGolden));
}

std::uint64_t RandomStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_uniform(double lo, double hi) {
  return lo + (hi - lo) * next_unit();
}

double RandomStream::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0,1] keeps the log finite.
  const double u1 = 1.0 - next_unit();
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace latlab
