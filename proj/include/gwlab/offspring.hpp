#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwlab/common.hpp"
#include "gwlab/pmf.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

/// Parametric origin of an infinite-support law. Keeps exact sampling and
/// exact moments available even though the stored table is truncated.
struct Descriptor {
  enum class Kind { kPoisson, kGeometric };
  Kind kind;
  double param;

  double mean() const;
  double variance() const;
  std::string str() const;
};

/// Reproduction law: the distribution of children per individual.
///
/// Finite laws are a dense table with zero tail. Parametric laws store a
/// truncated table whose tail mass equals the parametric tail, plus a
/// descriptor used for exact sampling and exact moments. All pmf arithmetic
/// runs on the table with the tail as an explicit error budget. Values are
/// immutable after construction.
class OffspringLaw {
 public:
  /// Finite-support law; mass must total 1 within kMassTol.
  static OffspringLaw from_probs(std::vector<double> probs);
  /// Finite table plus explicit tail (used for derived laws such as
  /// skeletons); not exactly samplable when tail > kMassTol.
  static OffspringLaw from_table(std::vector<double> probs, double tail_mass);
  static OffspringLaw point_mass(std::int64_t k);
  static OffspringLaw poisson(double lambda, std::size_t cap = kDefaultCap);
  /// P(k) = (1-p)^k * p on {0,1,2,...}.
  static OffspringLaw geometric(double p, std::size_t cap = kDefaultCap);

  double at(std::size_t k) const { return k < probs_.size() ? probs_[k] : 0.0; }
  double mass_at_zero() const { return probs_.empty() ? 0.0 : probs_[0]; }
  double tail_mass() const { return tail_; }
  /// One past the last stored support point.
  std::size_t support_end() const { return probs_.size(); }
  /// Largest support point with positive table mass.
  std::int64_t max_support() const;
  const std::vector<double>& probs() const { return probs_; }
  const std::optional<Descriptor>& descriptor() const { return descriptor_; }
  double body_mass() const;
  /// Cumulative table masses, cached for sampling.
  const std::vector<double>& cdf() const { return cdf_; }

 private:
  OffspringLaw() = default;
  void finish();  // validates and builds the cdf cache

  std::vector<double> probs_;
  double tail_ = 0.0;
  std::optional<Descriptor> descriptor_;
  std::vector<double> cdf_;
};

struct Mean {
  double value;
  bool exact;  // when false, the true mean lies in [value, +inf)
};

/// Mean number of children. Exact for finite laws and for parametric
/// descriptors; otherwise a lower bound over the represented support.
Mean mean(const OffspringLaw& law);

/// Second central moment. Parametric laws use the descriptor; finite laws
/// use the table. Throws std::domain_error when the tail mass exceeds
/// kMassTol and no descriptor is available.
double variance(const OffspringLaw& law);

/// Pushforward of the law under x -> min(x, level). Finite support, zero
/// tail: table tail mass collapses onto `level` exactly.
OffspringLaw truncate(const OffspringLaw& law, std::int64_t level);

/// Law of B*X with B ~ Bernoulli(p) independent of X.
OffspringLaw thin(const OffspringLaw& law, double p);

Pmf to_pmf(const OffspringLaw& law, std::size_t cap);

/// k-fold convolution power; k = 0 gives the point mass at 0.
Pmf convolve_power(const OffspringLaw& law, std::int64_t k, std::size_t cap);

/// One exact draw. Parametric laws sample the parametric law, never the
/// truncated table. Throws std::domain_error for a table with tail mass
/// beyond kMassTol and no descriptor.
std::int64_t sample(const OffspringLaw& law, Rng& rng);

}  // namespace gwlab
