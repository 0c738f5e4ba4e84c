#include "gwlab/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace gwlab {

double Descriptor::mean() const {
  switch (kind) {
    case Kind::kPoisson:
      return param;
    case Kind::kGeometric:
      return (1.0 - param) / param;
  }
  return 0.0;
}

double Descriptor::variance() const {
  switch (kind) {
    case Kind::kPoisson:
      return param;
    case Kind::kGeometric:
      return (1.0 - param) / (param * param);
  }
  return 0.0;
}

std::string Descriptor::str() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s(%.17g)",
                kind == Kind::kPoisson ? "poisson" : "geometric", param);
  return buf;
}

void OffspringLaw::finish() {
  if (probs_.empty()) probs_.assign(1, 0.0);
  while (probs_.size() > 1 && probs_.back() == 0.0) probs_.pop_back();
  for (double v : probs_)
    if (!(v >= 0.0))
      throw std::invalid_argument("OffspringLaw: negative probability entry");
  if (tail_ < 0.0 && tail_ > -kMassTol) tail_ = 0.0;
  if (!(tail_ >= 0.0))
    throw std::invalid_argument("OffspringLaw: negative tail mass");
  const double total = body_mass() + tail_;
  if (std::abs(total - 1.0) > kMassTol)
    throw std::invalid_argument("OffspringLaw: total mass " +
                                std::to_string(total) +
                                " differs from 1 beyond tolerance");
  cdf_.resize(probs_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    acc += probs_[k];
    cdf_[k] = acc;
  }
}

OffspringLaw OffspringLaw::from_probs(std::vector<double> probs) {
  return from_table(std::move(probs), 0.0);
}

OffspringLaw OffspringLaw::from_table(std::vector<double> probs,
                                      double tail_mass) {
  OffspringLaw law;
  law.probs_ = std::move(probs);
  law.tail_ = tail_mass;
  law.finish();
  return law;
}

OffspringLaw OffspringLaw::point_mass(std::int64_t k) {
  if (k < 0)
    throw std::invalid_argument("OffspringLaw::point_mass: negative value");
  std::vector<double> probs(static_cast<std::size_t>(k) + 1, 0.0);
  probs.back() = 1.0;
  return from_probs(std::move(probs));
}

OffspringLaw OffspringLaw::poisson(double lambda, std::size_t cap) {
  if (!(lambda >= 0.0) || lambda > 700.0)
    throw std::invalid_argument("poisson: need lambda in [0, 700]");
  OffspringLaw law;
  law.probs_.resize(cap + 1);
  double pk = std::exp(-lambda);
  double sum = 0.0;
  for (std::size_t k = 0; k <= cap; ++k) {
    law.probs_[k] = pk;
    sum += pk;
    pk *= lambda / static_cast<double>(k + 1);
  }
  law.tail_ = std::max(0.0, 1.0 - sum);
  law.descriptor_ = Descriptor{Descriptor::Kind::kPoisson, lambda};
  law.finish();
  return law;
}

OffspringLaw OffspringLaw::geometric(double p, std::size_t cap) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("geometric: need p in (0,1]");
  OffspringLaw law;
  law.probs_.resize(cap + 1);
  double pk = p;
  for (std::size_t k = 0; k <= cap; ++k) {
    law.probs_[k] = pk;
    pk *= 1.0 - p;
  }
  // Tail has the closed form (1-p)^(cap+1).
  law.tail_ = std::exp(static_cast<double>(cap + 1) * std::log1p(-p));
  if (p == 1.0) law.tail_ = 0.0;
  law.descriptor_ = Descriptor{Descriptor::Kind::kGeometric, p};
  law.finish();
  return law;
}

std::int64_t OffspringLaw::max_support() const {
  for (std::size_t k = probs_.size(); k-- > 0;)
    if (probs_[k] > 0.0) return static_cast<std::int64_t>(k);
  return 0;
}

double OffspringLaw::body_mass() const {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

Mean mean(const OffspringLaw& law) {
  if (law.descriptor()) return {law.descriptor()->mean(), true};
  double sum = 0.0;
  const auto& probs = law.probs();
  for (std::size_t k = 0; k < probs.size(); ++k)
    sum += static_cast<double>(k) * probs[k];
  return {sum, law.tail_mass() <= kMassTol};
}

double variance(const OffspringLaw& law) {
  if (law.descriptor()) return law.descriptor()->variance();
  if (law.tail_mass() > kMassTol)
    throw std::domain_error(
        "variance: undefined for a truncated law without a descriptor");
  const auto& probs = law.probs();
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double kd = static_cast<double>(k);
    m1 += kd * probs[k];
    m2 += kd * kd * probs[k];
  }
  return m2 - m1 * m1;
}

OffspringLaw truncate(const OffspringLaw& law, std::int64_t level) {
  if (level < 0)
    throw std::invalid_argument("truncate: negative truncation level");
  const auto& probs = law.probs();
  const std::size_t lvl = static_cast<std::size_t>(level);
  std::vector<double> out;
  if (lvl < probs.size()) {
    // Everything at or beyond the level (including the whole tail, which
    // lies past the table) collapses onto the level. Exact.
    out.assign(probs.begin(), probs.begin() + static_cast<std::ptrdiff_t>(lvl));
    double top = law.tail_mass();
    for (std::size_t k = lvl; k < probs.size(); ++k) top += probs[k];
    out.push_back(top);
  } else {
    // Level past the table: tail values would split between themselves and
    // the level in an unknown way.
    if (law.tail_mass() > kMassTol)
      throw std::invalid_argument(
          "truncate: level beyond the represented support of a tailed law");
    out = probs;
    out.back() += law.tail_mass();  // sub-tolerance remainder
  }
  return OffspringLaw::from_table(std::move(out), 0.0);
}

OffspringLaw thin(const OffspringLaw& law, double p) {
  if (!(p >= 0.0) || p > 1.0)
    throw std::invalid_argument("thin: need p in [0,1]");
  std::vector<double> out(law.probs());
  for (double& v : out) v *= p;
  if (out.empty()) out.assign(1, 0.0);
  out[0] += 1.0 - p;
  return OffspringLaw::from_table(std::move(out), p * law.tail_mass());
}

Pmf to_pmf(const OffspringLaw& law, std::size_t cap) {
  return Pmf::from_probs(law.probs(), law.tail_mass(), cap);
}

Pmf convolve_power(const OffspringLaw& law, std::int64_t k, std::size_t cap) {
  if (k < 0) throw std::invalid_argument("convolve_power: negative power");
  Pmf result = Pmf::point(0, cap);
  if (k == 0) return result;
  Pmf base = to_pmf(law, cap);
  while (true) {
    if (k & 1) result = convolve(result, base, cap);
    k >>= 1;
    if (k == 0) break;
    base = convolve(base, base, cap);
  }
  return result;
}

std::int64_t sample(const OffspringLaw& law, Rng& rng) {
  if (law.descriptor()) {
    const auto& d = *law.descriptor();
    return d.kind == Descriptor::Kind::kPoisson
               ? sample_poisson(d.param, rng)
               : sample_geometric(d.param, rng);
  }
  if (law.tail_mass() > kMassTol)
    throw std::domain_error(
        "sample: truncated law without a descriptor is not exactly samplable");
  const auto& cdf = law.cdf();
  const double u = rng.next_double();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it != cdf.end())
    return static_cast<std::int64_t>(it - cdf.begin());
  return law.max_support();
}

}  // namespace gwlab
