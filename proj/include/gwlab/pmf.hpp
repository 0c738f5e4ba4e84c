#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwlab/common.hpp"

namespace gwlab {

/// Law of a non-negative integer population size under a support cap.
///
/// Mass is stored densely for 0..cap (trailing zeros trimmed); anything
/// beyond the cap lives in an explicit tail bucket. Body values stay exact:
/// operations never redistribute tail mass back below the cap, so the body
/// is certified and the tail is the error budget. Immutable after
/// construction and safe to share across threads.
class Pmf {
 public:
  static Pmf point(std::int64_t k, std::size_t cap = kDefaultCap);
  /// Builds from a dense table; entries beyond `cap` are folded into the
  /// tail. Throws std::invalid_argument when mass accounting is off by more
  /// than kMassTol or a probability is negative.
  static Pmf from_probs(std::vector<double> probs, double tail_mass = 0.0,
                        std::size_t cap = kDefaultCap);

  double at(std::size_t k) const { return k < probs_.size() ? probs_[k] : 0.0; }
  double mass_at_zero() const { return probs_.empty() ? 0.0 : probs_[0]; }
  double tail_mass() const { return tail_; }
  std::size_t cap() const { return cap_; }
  /// One past the last stored support point.
  std::size_t support_end() const { return probs_.size(); }
  const std::vector<double>& probs() const { return probs_; }

  double body_mass() const;
  double total_mass() const { return body_mass() + tail_; }
  /// Body mass strictly below x.
  double mass_below(double x) const;
  /// Body mass at or above x: a lower bound for P(X >= x) since the tail
  /// (entirely beyond the cap) is excluded.
  double mass_at_least(double x) const;
  double mean_body() const;
  double second_moment_body() const;

 private:
  Pmf() = default;
  void check() const;

  std::vector<double> probs_{1.0};
  double tail_ = 0.0;
  std::size_t cap_ = kDefaultCap;
};

/// Law of the sum of two independent draws. Output mass landing above `cap`
/// accumulates into the tail; either input's tail stays in the tail
/// (pessimistic propagation).
Pmf convolve(const Pmf& a, const Pmf& b, std::size_t cap);

/// Structured warning text when the result's tail mass exceeds
/// kTailWarnThreshold, else nullopt.
std::optional<std::string> tail_warning(const Pmf& p, std::string_view op);

}  // namespace gwlab
