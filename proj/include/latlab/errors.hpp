#pragma once

#include <stdexcept>
#include <string>

namespace latlab {

// Enumeration or sampling workload exceeded a configured cap.
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A region has no finite circumscribing radius and no explicit cap was given.
struct UnboundedRegionError : std::runtime_error {
  explicit UnboundedRegionError(const std::string& what)
      : std::runtime_error(what) {}
};

// Numerically singular input where a well-conditioned one is required.
struct PrecisionError : std::runtime_error {
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration text.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace latlab
