#include "gwlab/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace gwlab {
namespace {

std::int64_t sample_initial(const Pmf& pmf, Rng& rng) {
  if (pmf.tail_mass() > kMassTol)
    throw std::domain_error("initial law with tail mass is not samplable");
  const double u = rng.next_double();
  double acc = 0.0;
  const auto& probs = pmf.probs();
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return static_cast<std::int64_t>(k);
  }
  for (std::size_t k = probs.size(); k-- > 0;)
    if (probs[k] > 0.0) return static_cast<std::int64_t>(k);
  return 0;
}

std::int64_t step_multinomial(std::int64_t y, const OffspringLaw& law,
                              Rng& rng) {
  const auto& probs = law.probs();
  const std::int64_t last = law.max_support();
  std::int64_t remaining = y;
  double mass_left = law.body_mass();
  std::int64_t total = 0;
  for (std::int64_t k = 0; k <= last && remaining > 0; ++k) {
    const double pk = probs[static_cast<std::size_t>(k)];
    if (pk <= 0.0) continue;
    std::int64_t count;
    if (k == last) {
      count = remaining;  // conditional probability is exactly 1
    } else {
      const double q = std::min(1.0, pk / mass_left);
      count = sample_binomial(remaining, q, rng);
    }
    total += k * count;
    remaining -= count;
    mass_left -= pk;
  }
  return total;
}

}  // namespace

void validate(const ChainConfig& config) {
  if (config.horizon < 1)
    throw std::invalid_argument("ChainConfig: horizon must be >= 1");
  if (config.population_cap < 1)
    throw std::invalid_argument("ChainConfig: population_cap must be >= 1");
  if (const auto* n = std::get_if<std::int64_t>(&config.initial); n && *n < 0)
    throw std::invalid_argument("ChainConfig: negative initial size");
}

std::optional<std::int64_t> tau_of(const Trajectory& traj) {
  for (std::size_t t = 0; t < traj.sizes.size(); ++t)
    if (traj.sizes[t] == 0) return static_cast<std::int64_t>(t);
  return std::nullopt;
}

std::int64_t population_at(const Trajectory& traj, std::int64_t t) {
  if (t < 0) throw std::invalid_argument("population_at: negative time");
  const auto idx = static_cast<std::size_t>(t);
  if (idx < traj.sizes.size()) return traj.sizes[idx];
  if (traj.tau) return 0;
  return traj.sizes.empty() ? 0 : traj.sizes.back();  // censored: frozen
}

std::int64_t step(std::int64_t y, const OffspringLaw& law, Rng& rng) {
  if (y < 0) throw std::invalid_argument("step: negative population");
  if (y == 0) return 0;
  if (law.descriptor()) {
    const auto& d = *law.descriptor();
    if (d.kind == Descriptor::Kind::kPoisson) {
      // Sum of y independent draws is itself a Poisson variable.
      const double total_mean = d.param * static_cast<double>(y);
      if (total_mean > 4.0e15)
        throw std::overflow_error("step: offspring sum out of integer range");
      return sample_poisson(total_mean, rng);
    }
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < y; ++i) {
      sum += sample_geometric(d.param, rng);
      if (sum < 0)
        throw std::overflow_error("step: offspring sum out of integer range");
    }
    return sum;
  }
  if (law.tail_mass() > kMassTol)
    throw std::domain_error(
        "step: law with tail mass and no descriptor is not samplable");
  const std::int64_t kmax = law.max_support();
  if (kmax > 0 && y > std::numeric_limits<std::int64_t>::max() / kmax)
    throw std::overflow_error("step: offspring sum out of integer range");
  if (y <= kStepDirectLimit) {
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < y; ++i) sum += sample(law, rng);
    return sum;
  }
  return step_multinomial(y, law, rng);
}

Trajectory simulate(const ChainConfig& config) {
  return simulate(config, config.seed);
}

Trajectory simulate(const ChainConfig& config, std::uint64_t seed) {
  validate(config);
  Rng rng(seed);
  Trajectory traj;
  traj.seed = seed;
  const std::int64_t y0 =
      std::holds_alternative<std::int64_t>(config.initial)
          ? std::get<std::int64_t>(config.initial)
          : sample_initial(std::get<Pmf>(config.initial), rng);
  traj.sizes.push_back(y0);
  if (y0 == 0) {
    traj.tau = 0;
    return traj;
  }
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    const std::int64_t y = step(traj.sizes.back(), config.offspring, rng);
    traj.sizes.push_back(y);
    if (y == 0) {
      traj.tau = t;
      return traj;
    }
    if (y > config.population_cap) break;  // alive-censored
  }
  traj.censored = true;
  return traj;
}

EnsembleStats batch_simulate(const ChainConfig& config, std::int64_t runs,
                             const TrajectoryPredicate& predicate,
                             int threads) {
  validate(config);
  if (runs < 1) throw std::invalid_argument("batch_simulate: runs must be >= 1");
  const std::int64_t horizon = config.horizon;
  const std::size_t slots = static_cast<std::size_t>(horizon) + 1;

  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (static_cast<std::int64_t>(workers) > runs)
    workers = static_cast<int>(runs);

  struct Local {
    std::vector<std::int64_t> died_at;
    std::vector<std::int64_t> pop_sum;
    std::vector<std::int64_t> frozen_from;  // censored-path freeze values
    std::int64_t censored = 0;
    std::int64_t events = 0;
  };
  std::vector<Local> locals(static_cast<std::size_t>(workers));
  for (auto& l : locals) {
    l.died_at.assign(slots, 0);
    l.pop_sum.assign(slots, 0);
    l.frozen_from.assign(slots + 1, 0);
  }

  const std::int64_t chunk = (runs + workers - 1) / workers;
  auto work = [&](int w) {
    Local& local = locals[static_cast<std::size_t>(w)];
    const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
    const std::int64_t end = std::min(runs, begin + chunk);
    for (std::int64_t i = begin; i < end; ++i) {
      const Trajectory traj =
          simulate(config, derive_seed(config.seed, static_cast<std::uint64_t>(i)));
      for (std::size_t t = 0; t < traj.sizes.size() && t < slots; ++t)
        local.pop_sum[t] += traj.sizes[t];
      if (traj.tau) {
        local.died_at[static_cast<std::size_t>(*traj.tau)] += 1;
      } else {
        local.censored += 1;
        if (traj.sizes.size() < slots)
          local.frozen_from[traj.sizes.size()] += traj.sizes.back();
      }
      if (predicate && predicate(traj)) local.events += 1;
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  EnsembleStats stats;
  stats.runs = runs;
  stats.horizon = horizon;
  stats.tau_count.assign(slots, 0);
  stats.population_sum.assign(slots, 0);
  std::vector<std::int64_t> frozen(slots + 1, 0);
  for (const auto& l : locals) {
    for (std::size_t t = 0; t < slots; ++t) {
      stats.tau_count[t] += l.died_at[t];
      stats.population_sum[t] += l.pop_sum[t];
      frozen[t] += l.frozen_from[t];
    }
    stats.censored_count += l.censored;
    stats.event_count += l.events;
  }
  std::int64_t dead = 0;
  std::int64_t frozen_running = 0;
  stats.alive_count.assign(slots, 0);
  for (std::size_t t = 0; t < slots; ++t) {
    dead += stats.tau_count[t];
    stats.alive_count[t] = runs - dead;
    frozen_running += frozen[t];
    stats.population_sum[t] += frozen_running;
  }
  return stats;
}

double hoeffding_radius(std::int64_t n, double confidence) {
  if (n < 1 || !(confidence > 0.0) || !(confidence < 1.0))
    throw std::invalid_argument("hoeffding_radius: need n >= 1, confidence in (0,1)");
  return std::sqrt(std::log(1.0 / (1.0 - confidence)) /
                   (2.0 * static_cast<double>(n)));
}

}  // namespace gwlab
