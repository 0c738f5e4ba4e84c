#include "gwlab/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gwlab::couplings {
namespace {

void add_checked(std::int64_t& acc, std::int64_t x) {
  acc += x;
  if (acc < 0)
    throw std::overflow_error("coupling: offspring sum out of integer range");
}

void verify(const CoupledPath& path) {
  const std::size_t len =
      std::max(path.upper.sizes.size(), path.lower.sizes.size());
  for (std::size_t idx = 0; idx < len; ++idx) {
    const std::int64_t up =
        population_at(path.upper, static_cast<std::int64_t>(idx));
    const std::int64_t lo =
        population_at(path.lower, static_cast<std::int64_t>(idx));
    const bool ok = path.relation == Relation::kUpperAtLeastFactorTimesLower
                        ? up >= path.factor * lo
                        : lo <= up;
    if (!ok)
      throw InvariantViolation("coupling: declared order violated at index " +
                               std::to_string(idx));
  }
}

}  // namespace

SuperposedTriple couple_superposition(const OffspringLaw& law, std::int64_t t,
                                      std::uint64_t seed,
                                      std::int64_t population_cap) {
  if (t < 1) throw std::invalid_argument("couple_superposition: need t >= 1");
  const ChainConfig base{law, std::int64_t{1}, t, population_cap, 0};
  SuperposedTriple triple;
  triple.first = simulate(base, derive_seed(seed, 0));
  triple.second = simulate(base, derive_seed(seed, 1));

  // Sum only over indices where both paths are known exactly (a censored
  // path is unknown past its last computed generation).
  std::size_t known = static_cast<std::size_t>(t) + 1;
  for (const Trajectory* part : {&triple.first, &triple.second})
    if (!part->tau) known = std::min(known, part->sizes.size());
  Trajectory& sum = triple.sum;
  sum.seed = seed;
  for (std::size_t k = 0; k < known; ++k) {
    const std::int64_t v =
        population_at(triple.first, static_cast<std::int64_t>(k)) +
        population_at(triple.second, static_cast<std::int64_t>(k));
    sum.sizes.push_back(v);
    if (v == 0) {
      sum.tau = static_cast<std::int64_t>(k);
      break;
    }
  }
  if (!sum.tau) sum.censored = true;
  return triple;
}

CoupledPath couple_block_minorant(const OffspringLaw& law,
                                  std::int64_t n_per_block, double a,
                                  std::int64_t t, std::uint64_t seed,
                                  std::int64_t population_cap) {
  if (n_per_block < 1)
    throw std::invalid_argument("couple_block_minorant: need block size >= 1");
  if (t < 1) throw std::invalid_argument("couple_block_minorant: need t >= 1");
  if (!(a >= 1.0) || a != std::floor(a))
    throw std::invalid_argument(
        "couple_block_minorant: block factor a must be an integer >= 1 "
        "(non-integer a would make block populations fractional)");
  const std::int64_t ai = static_cast<std::int64_t>(a);
  const std::int64_t n_blk = n_per_block;

  CoupledPath path;
  path.relation = Relation::kUpperAtLeastFactorTimesLower;
  path.factor = n_blk;
  path.shared_seed = seed;
  path.upper.seed = seed;
  path.lower.seed = seed;

  std::int64_t y = n_blk;  // population starts with one block's worth
  std::int64_t m = 1;
  path.upper.sizes = {y};
  path.lower.sizes = {m};
  const std::int64_t threshold = ai * n_blk;

  for (std::int64_t n = 0; n < t && y > 0; ++n) {
    Rng gen(derive_seed(seed, static_cast<std::uint64_t>(n)));
    const std::int64_t marked = n_blk * m;
    std::int64_t y_next = 0;
    std::int64_t hits = 0;
    std::int64_t block_sum = 0;
    for (std::int64_t i = 0; i < y; ++i) {
      const std::int64_t x = sample(law, gen);
      add_checked(y_next, x);
      if (i < marked) {
        block_sum += x;
        if ((i + 1) % n_blk == 0) {
          if (block_sum >= threshold) ++hits;
          block_sum = 0;
        }
      }
    }
    const std::int64_t m_next = ai * hits;
    if (y_next < n_blk * m_next)
      throw InvariantViolation(
          "couple_block_minorant: population fell below the block chain");
    y = y_next;
    path.upper.sizes.push_back(y);
    if (y == 0) path.upper.tau = n + 1;
    if (m > 0) {
      m = m_next;
      path.lower.sizes.push_back(m);
      if (m == 0)
        path.lower.tau =
            static_cast<std::int64_t>(path.lower.sizes.size()) - 1;
    }
    if (y > population_cap) break;  // alive-censored
  }
  if (!path.upper.tau) path.upper.censored = true;
  if (!path.lower.tau) path.lower.censored = true;
  verify(path);
  return path;
}

CoupledPath couple_thinning(const OffspringLaw& law, double p,
                            std::int64_t initial, std::int64_t t,
                            std::uint64_t seed, std::int64_t population_cap) {
  if (!(p >= 0.0) || p > 1.0)
    throw std::invalid_argument("couple_thinning: need p in [0,1]");
  if (initial < 0)
    throw std::invalid_argument("couple_thinning: negative initial size");
  if (t < 1) throw std::invalid_argument("couple_thinning: need t >= 1");

  CoupledPath path;
  path.relation = Relation::kLowerAtMostUpper;
  path.shared_seed = seed;
  path.upper.seed = seed;
  path.lower.seed = seed;

  std::int64_t y = initial;
  std::int64_t yp = initial;
  path.upper.sizes = {y};
  path.lower.sizes = {yp};
  if (y == 0) {
    path.upper.tau = 0;
    path.lower.tau = 0;
    path.identical = true;
    return path;
  }

  for (std::int64_t n = 0; n < t && y > 0; ++n) {
    Rng gen(derive_seed(seed, static_cast<std::uint64_t>(n)));
    std::int64_t y_next = 0;
    std::int64_t yp_next = 0;
    for (std::int64_t i = 0; i < y; ++i) {
      const std::int64_t x = sample(law, gen);
      const bool mark = gen.bernoulli(p);
      add_checked(y_next, x);
      if (i < yp && mark) yp_next += x;
    }
    if (yp_next > y_next)
      throw InvariantViolation(
          "couple_thinning: thinned chain exceeded the original");
    y = y_next;
    path.upper.sizes.push_back(y);
    if (y == 0) path.upper.tau = n + 1;
    if (yp > 0) {
      yp = yp_next;
      path.lower.sizes.push_back(yp);
      if (yp == 0)
        path.lower.tau =
            static_cast<std::int64_t>(path.lower.sizes.size()) - 1;
    }
    if (y > population_cap) break;  // alive-censored
  }
  if (!path.upper.tau) path.upper.censored = true;
  if (!path.lower.tau) path.lower.censored = true;
  path.identical = path.upper.sizes == path.lower.sizes;
  verify(path);
  return path;
}

CoupledPath couple_truncation(const OffspringLaw& law, std::int64_t level,
                              std::int64_t t, std::uint64_t seed,
                              std::int64_t initial,
                              std::int64_t population_cap) {
  if (level < 0)
    throw std::invalid_argument("couple_truncation: negative level");
  if (initial < 0)
    throw std::invalid_argument("couple_truncation: negative initial size");
  if (t < 1) throw std::invalid_argument("couple_truncation: need t >= 1");

  CoupledPath path;
  path.relation = Relation::kLowerAtMostUpper;
  path.shared_seed = seed;
  path.upper.seed = seed;
  path.lower.seed = seed;

  std::int64_t y = initial;
  std::int64_t z = initial;
  path.upper.sizes = {y};
  path.lower.sizes = {z};
  if (y == 0) {
    path.upper.tau = 0;
    path.lower.tau = 0;
    return path;
  }

  for (std::int64_t n = 0; n < t && y > 0; ++n) {
    Rng gen(derive_seed(seed, static_cast<std::uint64_t>(n)));
    std::int64_t y_next = 0;
    std::int64_t z_next = 0;
    for (std::int64_t i = 0; i < y; ++i) {
      const std::int64_t x = sample(law, gen);
      add_checked(y_next, x);
      if (i < z) z_next += std::min(x, level);
    }
    if (z_next > y_next)
      throw InvariantViolation(
          "couple_truncation: truncated chain exceeded the original");
    y = y_next;
    path.upper.sizes.push_back(y);
    if (y == 0) path.upper.tau = n + 1;
    if (z > 0) {
      z = z_next;
      path.lower.sizes.push_back(z);
      if (z == 0)
        path.lower.tau =
            static_cast<std::int64_t>(path.lower.sizes.size()) - 1;
    }
    if (y > population_cap) break;  // alive-censored
  }
  if (!path.upper.tau) path.upper.censored = true;
  if (!path.lower.tau) path.lower.censored = true;
  verify(path);
  return path;
}

}  // namespace gwlab::couplings
