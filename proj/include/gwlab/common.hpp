#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace gwlab {

// Representation tolerance for probability-mass accounting.
inline constexpr double kMassTol = 1e-12;

// Default dense-support cap for pmf arithmetic.
inline constexpr std::size_t kDefaultCap = 4096;

// Results whose tail mass exceeds this get a structured warning attached.
inline constexpr double kTailWarnThreshold = 1e-6;

// Safety bound on simulated population sizes; paths exceeding it are
// declared alive-censored.
inline constexpr std::int64_t kDefaultPopulationCap = 10'000'000;

// Thrown when a mathematically guaranteed pathwise or distributional
// relation fails to hold in a computed result.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gwlab
