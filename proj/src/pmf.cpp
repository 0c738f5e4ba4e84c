#include "gwlab/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace gwlab {
namespace {

void trim_trailing_zeros(std::vector<double>& v) {
  while (v.size() > 1 && v.back() == 0.0) v.pop_back();
}

}  // namespace

Pmf Pmf::point(std::int64_t k, std::size_t cap) {
  if (k < 0) throw std::invalid_argument("Pmf::point: negative support point");
  Pmf p;
  p.cap_ = cap;
  if (static_cast<std::size_t>(k) <= cap) {
    p.probs_.assign(static_cast<std::size_t>(k) + 1, 0.0);
    p.probs_.back() = 1.0;
  } else {
    p.probs_.assign(1, 0.0);
    p.tail_ = 1.0;
  }
  return p;
}

Pmf Pmf::from_probs(std::vector<double> probs, double tail_mass,
                    std::size_t cap) {
  Pmf p;
  p.cap_ = cap;
  p.tail_ = tail_mass;
  if (probs.size() > cap + 1) {
    for (std::size_t k = cap + 1; k < probs.size(); ++k) p.tail_ += probs[k];
    probs.resize(cap + 1);
  }
  if (probs.empty()) probs.assign(1, 0.0);
  trim_trailing_zeros(probs);
  p.probs_ = std::move(probs);
  if (p.tail_ < 0.0 && p.tail_ > -kMassTol) p.tail_ = 0.0;
  p.check();
  return p;
}

void Pmf::check() const {
  for (double v : probs_)
    if (!(v >= 0.0))
      throw std::invalid_argument("Pmf: negative probability entry");
  if (!(tail_ >= 0.0))
    throw std::invalid_argument("Pmf: negative tail mass");
  const double total = total_mass();
  if (std::abs(total - 1.0) > kMassTol)
    throw std::invalid_argument("Pmf: total mass " + std::to_string(total) +
                                " differs from 1 beyond tolerance");
}

double Pmf::body_mass() const {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

double Pmf::mass_below(double x) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    if (static_cast<double>(k) >= x) break;
    sum += probs_[k];
  }
  return sum;
}

double Pmf::mass_at_least(double x) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k)
    if (static_cast<double>(k) >= x) sum += probs_[k];
  return sum;
}

double Pmf::mean_body() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k)
    sum += static_cast<double>(k) * probs_[k];
  return sum;
}

double Pmf::second_moment_body() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k)
    sum += static_cast<double>(k) * static_cast<double>(k) * probs_[k];
  return sum;
}

Pmf convolve(const Pmf& a, const Pmf& b, std::size_t cap) {
  const auto& pa = a.probs();
  const auto& pb = b.probs();
  std::vector<double> out(
      std::min(pa.size() + pb.size() - 1, cap + 1), 0.0);
  double overflow = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double ai = pa[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < pb.size(); ++j) {
      const double m = ai * pb[j];
      if (i + j <= cap)
        out[i + j] += m;
      else
        overflow += m;
    }
  }
  // Joint tail events are counted once: a-tail against all of b, plus
  // b-tail against the body of a.
  const double tail =
      a.tail_mass() * b.total_mass() + b.tail_mass() * a.body_mass() + overflow;
  return Pmf::from_probs(std::move(out), tail, cap);
}

std::optional<std::string> tail_warning(const Pmf& p, std::string_view op) {
  if (p.tail_mass() <= kTailWarnThreshold) return std::nullopt;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%.*s: tail mass %.6g beyond support cap %zu",
                static_cast<int>(op.size()), op.data(), p.tail_mass(),
                p.cap());
  return std::string(buf);
}

}  // namespace gwlab
