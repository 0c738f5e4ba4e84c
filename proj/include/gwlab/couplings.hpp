#pragma once

#include <cstdint>

#include "gwlab/chain.hpp"
#include "gwlab/common.hpp"
#include "gwlab/offspring.hpp"

namespace gwlab::couplings {

enum class Relation {
  kUpperAtLeastFactorTimesLower,  // upper_t >= factor * lower_t
  kLowerAtMostUpper,              // lower_t <= upper_t
};

/// Two chains built jointly on one shared draw stream, with a pathwise
/// order that is asserted at every computed index during construction
/// (InvariantViolation if it ever fails — it must not).
///
/// Draw indexing: generation n consumes draws X_1^n, X_2^n, ... lazily in
/// index order from the stream derive_seed(shared_seed, n); the upper chain
/// consumes indices 1..Y_n and the lower chain a prefix of the same
/// sequence.
struct CoupledPath {
  Trajectory upper;
  Trajectory lower;
  Relation relation;
  std::int64_t factor = 1;  // the N in upper >= N * lower
  std::uint64_t shared_seed = 0;
  bool identical = false;  // thinning only: lower matched upper at every index
};

struct SuperposedTriple {
  Trajectory first;
  Trajectory second;
  Trajectory sum;  // pointwise sum, exact at every index
};

/// Two independent chains from one individual each, plus their pointwise
/// sum (itself a chain with the same reproduction law, from two).
SuperposedTriple couple_superposition(
    const OffspringLaw& law, std::int64_t t, std::uint64_t seed,
    std::int64_t population_cap = kDefaultPopulationCap);

/// Population chain from N individuals dominating a coarse block chain from
/// one block: each block groups N consecutive draws and succeeds when their
/// sum reaches a*N; the block chain multiplies by a per success. Maintains
/// upper_t >= N * lower_t. The block chain alone is a chain with the
/// two-point reproduction law (1-q) at 0 and q at a, q = P(N-fold sum >= aN).
/// Only integer a >= 1 keeps block populations integral; other a rejected.
CoupledPath couple_block_minorant(
    const OffspringLaw& law, std::int64_t n_per_block, double a, std::int64_t t,
    std::uint64_t seed, std::int64_t population_cap = kDefaultPopulationCap);

/// Chain and its Bernoulli(p)-thinned companion on shared draws and marks,
/// both from N individuals. Maintains lower_t <= upper_t; `identical`
/// records whether the thinned chain matched the original at every index.
/// The thinned chain alone reproduces with law thin(law, p).
CoupledPath couple_thinning(
    const OffspringLaw& law, double p, std::int64_t initial, std::int64_t t,
    std::uint64_t seed, std::int64_t population_cap = kDefaultPopulationCap);

/// Chain driven by draws x against the chain driven by min(x, level) on the
/// same draws, same initial size. Maintains lower_t <= upper_t.
CoupledPath couple_truncation(
    const OffspringLaw& law, std::int64_t level, std::int64_t t,
    std::uint64_t seed, std::int64_t initial = 1,
    std::int64_t population_cap = kDefaultPopulationCap);

}  // namespace gwlab::couplings
