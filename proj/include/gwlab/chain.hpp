#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gwlab/common.hpp"
#include "gwlab/offspring.hpp"
#include "gwlab/pmf.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

// One generation consumes this many individual draws before switching to
// the per-support-atom multinomial decomposition.
inline constexpr std::int64_t kStepDirectLimit = 64;

struct ChainConfig {
  OffspringLaw offspring;
  std::variant<std::int64_t, Pmf> initial{std::int64_t{1}};
  std::int64_t horizon = 1;
  std::int64_t population_cap = kDefaultPopulationCap;
  std::uint64_t seed = 0;
};

void validate(const ChainConfig& config);

/// One simulated path: population sizes from generation 0 until extinction,
/// the horizon, or the population cap. Recording stops at the first zero.
struct Trajectory {
  std::vector<std::int64_t> sizes;
  std::optional<std::int64_t> tau;  // first hitting time of 0; nullopt = not yet
  bool censored = false;            // alive at the horizon or the population cap
  std::uint64_t seed = 0;
};

/// First hitting time of 0 recomputed from the sizes, or nullopt for a path
/// still alive at its end.
std::optional<std::int64_t> tau_of(const Trajectory& traj);

/// Size at generation t: stored value, 0 beyond extinction, or frozen at the
/// last computed value for a path censored before t.
std::int64_t population_at(const Trajectory& traj, std::int64_t t);

/// One generation: the total offspring of y individuals. Absorbing at 0.
/// Large populations decompose into one exact binomial count per support
/// atom; parametric laws sample the parametric law. Throws
/// std::overflow_error instead of wrapping.
std::int64_t step(std::int64_t y, const OffspringLaw& law, Rng& rng);

Trajectory simulate(const ChainConfig& config);
Trajectory simulate(const ChainConfig& config, std::uint64_t seed);

using TrajectoryPredicate = std::function<bool(const Trajectory&)>;

/// Order-independent aggregate over a batch of trajectories. All counters
/// are integers so results are bit-identical for any worker count.
struct EnsembleStats {
  std::int64_t runs = 0;
  std::int64_t horizon = 0;
  std::vector<std::int64_t> alive_count;      // paths with Y_t >= 1, per t
  std::vector<std::int64_t> tau_count;        // extinctions at exactly t
  std::int64_t censored_count = 0;
  std::int64_t event_count = 0;               // predicate hits
  std::vector<std::int64_t> population_sum;   // sum of Y_t over paths
  std::string confidence_method = "hoeffding-one-sided";

  std::int64_t survival_count_at(std::int64_t t) const {
    return alive_count.at(static_cast<std::size_t>(t));
  }
  double survival_fraction_at(std::int64_t t) const {
    return static_cast<double>(survival_count_at(t)) /
           static_cast<double>(runs);
  }
  double mean_population_at(std::int64_t t) const {
    return static_cast<double>(population_sum.at(static_cast<std::size_t>(t))) /
           static_cast<double>(runs);
  }
};

/// Runs `runs` independent trajectories with per-trajectory seeds
/// derive_seed(config.seed, i). The predicate (when given) must be pure; it
/// may be evaluated concurrently. threads <= 0 uses the hardware count.
EnsembleStats batch_simulate(const ChainConfig& config, std::int64_t runs,
                             const TrajectoryPredicate& predicate = {},
                             int threads = 0);

/// Distribution-free one-sided deviation radius: with probability at least
/// `confidence`, the true mean exceeds p_hat - radius.
double hoeffding_radius(std::int64_t n, double confidence);

}  // namespace gwlab
