#pragma once

#include <cstdint>

#include "gwlab/offspring.hpp"
#include "gwlab/pmf.hpp"

namespace gwlab::exact {

/// Law of the next generation given the current population law: the mixture
/// of convolution powers weighted by the population masses, with absorption
/// at 0. The input's tail mass is forwarded into the output tail
/// (pessimistic), so body values stay certified.
Pmf propagate(const Pmf& population, const OffspringLaw& law, std::size_t cap);

/// t-fold propagation; t = 0 returns the initial law unchanged.
Pmf law_at(const Pmf& initial, const OffspringLaw& law, std::int64_t t,
           std::size_t cap);

/// Certified bracket for the extinction probability by time t:
/// P(tau <= t) lies in [value, value + tail].
struct ExtinctionBound {
  double value;
  double tail;
};

ExtinctionBound extinction_by(const Pmf& initial, const OffspringLaw& law,
                              std::int64_t t, std::size_t cap);

inline constexpr std::int64_t kFixedPointBudget = 1'000'000;

/// Smallest fixed point of q = sum_k nu(k) q^k by monotone iteration from 0:
/// the extinction probability from one individual. The tolerance contract is
/// on successive iterate differences, not distance to the fixed point;
/// near-critical laws converge like Theta(1/k), so tight tolerances can
/// exhaust the iteration budget (std::runtime_error reporting the last
/// iterate). Table tail mass shifts the result by at most the tail.
double extinction_probability(const OffspringLaw& law, double tol = 1e-12);

/// Law of the sum of two independent chains at time t, computed two ways —
/// propagate-then-convolve and convolve-then-propagate — which must agree
/// pointwise within 1e-10 below the cap (two independent chains with the
/// same reproduction law sum to another such chain). Returns the
/// convolve-then-propagate result; throws InvariantViolation on
/// disagreement.
Pmf sum_law(const Pmf& a_initial, const Pmf& b_initial, const OffspringLaw& law,
            std::int64_t t, std::size_t cap);

/// Reproduction law of the T-step skeleton chain: the time-T population law
/// from one individual, repackaged. Asserts that the k-individual time-T law
/// equals the k-fold convolution power of the result (within 1e-10, k <= 5)
/// before returning; throws InvariantViolation otherwise.
OffspringLaw skeleton_law(const OffspringLaw& law, std::int64_t T,
                          std::size_t cap);

/// Mass of the k-fold convolution power strictly below x.
double phi(std::int64_t k, double x, const OffspringLaw& law, std::size_t cap);

}  // namespace gwlab::exact
