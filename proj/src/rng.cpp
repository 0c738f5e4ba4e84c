#include "gwlab/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gwlab {
namespace {

// Inversion around the mode of a unimodal pmf. `pmf_mode` is the mass at
// `mode`; `up(k)` returns pmf(k+1)/pmf(k) and `down(k)` returns
// pmf(k-1)/pmf(k). Visits atoms in the fixed order mode, mode+1, mode-1,
// mode+2, ... so the draw is a deterministic function of one uniform.
template <class Up, class Down>
std::int64_t mode_inversion(std::int64_t mode, double pmf_mode,
                            std::int64_t lo_min, std::int64_t hi_max, Up up,
                            Down down, Rng& rng) {
  const double u = rng.next_double();
  double acc = pmf_mode;
  if (u < acc) return mode;
  std::int64_t lo = mode;
  std::int64_t hi = mode;
  double p_lo = pmf_mode;
  double p_hi = pmf_mode;
  while (lo > lo_min || hi < hi_max) {
    if (hi < hi_max) {
      p_hi *= up(hi);
      ++hi;
      acc += p_hi;
      if (u < acc) return hi;
    }
    if (lo > lo_min) {
      p_lo *= down(lo);
      --lo;
      acc += p_lo;
      if (u < acc) return lo;
    }
    if (p_hi == 0.0 && p_lo == 0.0) break;  // representable mass exhausted
  }
  // Rounding left a sliver of cdf uncovered (< 1e-15); charge it to the
  // right edge so the sampler stays total.
  return hi;
}

}  // namespace

std::int64_t sample_binomial(std::int64_t n, double p, Rng& rng) {
  if (n < 0 || !(p >= 0.0) || p > 1.0)
    throw std::invalid_argument("sample_binomial: need n >= 0 and p in [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - sample_binomial(n, 1.0 - p, rng);

  const double nd = static_cast<double>(n);
  std::int64_t mode = static_cast<std::int64_t>((nd + 1.0) * p);
  if (mode > n) mode = n;
  const double md = static_cast<double>(mode);
  const double log_pmf = std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                         std::lgamma(nd - md + 1.0) + md * std::log(p) +
                         (nd - md) * std::log1p(-p);
  const double odds = p / (1.0 - p);
  return mode_inversion(
      mode, std::exp(log_pmf), 0, n,
      [n, odds](std::int64_t k) {
        return static_cast<double>(n - k) / static_cast<double>(k + 1) * odds;
      },
      [n, odds](std::int64_t k) {
        return static_cast<double>(k) /
               (static_cast<double>(n - k + 1) * odds);
      },
      rng);
}

std::int64_t sample_poisson(double mean, Rng& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("sample_poisson: need finite mean >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // Sequential cdf inversion from 0: expected work O(mean), no lgamma.
    const double u = rng.next_double();
    double pk = std::exp(-mean);
    double acc = pk;
    std::int64_t k = 0;
    while (u >= acc && pk > 0.0) {
      ++k;
      pk *= mean / static_cast<double>(k);
      acc += pk;
    }
    return k;
  }
  const std::int64_t mode = static_cast<std::int64_t>(mean);
  const double md = static_cast<double>(mode);
  const double log_pmf = md * std::log(mean) - mean - std::lgamma(md + 1.0);
  // Practical right edge: mass beyond mode + 40*sd + 128 is < 1e-300.
  const std::int64_t hi_max =
      mode + static_cast<std::int64_t>(40.0 * std::sqrt(mean)) + 128;
  return mode_inversion(
      mode, std::exp(log_pmf), 0, hi_max,
      [mean](std::int64_t k) { return mean / static_cast<double>(k + 1); },
      [mean](std::int64_t k) { return static_cast<double>(k) / mean; }, rng);
}

std::int64_t sample_geometric(double p, Rng& rng) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("sample_geometric: need p in (0,1]");
  if (p == 1.0) return 0;
  const double u = rng.next_double();
  const double k = std::floor(std::log1p(-u) / std::log1p(-p));
  if (!(k >= 0.0)) return 0;
  return static_cast<std::int64_t>(k);
}

}  // namespace gwlab
