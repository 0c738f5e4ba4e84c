#include "gwlab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwlab::exact {

Pmf propagate(const Pmf& population, const OffspringLaw& law,
              std::size_t cap) {
  const auto& pop = population.probs();
  const auto& nu = law.probs();
  const double nu_tail = law.tail_mass();
  const double nu_total = law.body_mass() + nu_tail;

  std::vector<double> out(cap + 1, 0.0);
  double out_tail = population.tail_mass();

  // Incrementally maintain the k-fold power of the reproduction law: one
  // convolution step per population support point.
  std::vector<double> power{1.0};
  double power_tail = 0.0;
  double power_body = 1.0;
  for (std::size_t k = 0; k < pop.size(); ++k) {
    const double w = pop[k];
    if (w > 0.0) {
      for (std::size_t j = 0; j < power.size(); ++j) out[j] += w * power[j];
      out_tail += w * power_tail;
    }
    if (k + 1 == pop.size()) break;
    std::vector<double> next(std::min(power.size() + nu.size() - 1, cap + 1),
                             0.0);
    double overflow = 0.0;
    for (std::size_t i = 0; i < power.size(); ++i) {
      const double pi = power[i];
      if (pi == 0.0) continue;
      for (std::size_t j = 0; j < nu.size(); ++j) {
        const double m = pi * nu[j];
        if (i + j <= cap)
          next[i + j] += m;
        else
          overflow += m;
      }
    }
    power_tail = power_tail * nu_total + nu_tail * power_body + overflow;
    power_body = power_body * (nu_total - nu_tail) - overflow;
    power.swap(next);
  }
  return Pmf::from_probs(std::move(out), out_tail, cap);
}

Pmf law_at(const Pmf& initial, const OffspringLaw& law, std::int64_t t,
           std::size_t cap) {
  if (t < 0) throw std::invalid_argument("law_at: negative time");
  Pmf current = initial;
  for (std::int64_t s = 0; s < t; ++s) current = propagate(current, law, cap);
  return current;
}

ExtinctionBound extinction_by(const Pmf& initial, const OffspringLaw& law,
                              std::int64_t t, std::size_t cap) {
  const Pmf at_t = law_at(initial, law, t, cap);
  return {at_t.mass_at_zero(), at_t.tail_mass()};
}

double extinction_probability(const OffspringLaw& law, double tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("extinction_probability: tol must be > 0");
  const auto& probs = law.probs();
  double q = 0.0;
  for (std::int64_t it = 0; it < kFixedPointBudget; ++it) {
    double g = 0.0;
    for (std::size_t k = probs.size(); k-- > 0;) g = g * q + probs[k];
    if (std::abs(g - q) < tol) return g;
    q = g;
  }
  throw std::runtime_error(
      "extinction_probability: no convergence within budget; last iterate " +
      std::to_string(q));
}

Pmf sum_law(const Pmf& a_initial, const Pmf& b_initial, const OffspringLaw& law,
            std::int64_t t, std::size_t cap) {
  const Pmf joint = law_at(convolve(a_initial, b_initial, cap), law, t, cap);
  const Pmf separate = convolve(law_at(a_initial, law, t, cap),
                                law_at(b_initial, law, t, cap), cap);
  double worst = 0.0;
  for (std::size_t j = 0; j <= cap; ++j)
    worst = std::max(worst, std::abs(joint.at(j) - separate.at(j)));
  if (worst > 1e-10)
    throw InvariantViolation(
        "sum_law: dual computations disagree by " + std::to_string(worst));
  return joint;
}

OffspringLaw skeleton_law(const OffspringLaw& law, std::int64_t T,
                          std::size_t cap) {
  if (T < 1) throw std::invalid_argument("skeleton_law: need T >= 1");
  const Pmf one = law_at(Pmf::point(1, cap), law, T, cap);
  OffspringLaw skeleton =
      OffspringLaw::from_table(one.probs(), one.tail_mass());
  for (std::int64_t k = 1; k <= 5; ++k) {
    const Pmf direct = law_at(Pmf::point(k, cap), law, T, cap);
    const Pmf powered = convolve_power(skeleton, k, cap);
    for (std::size_t j = 0; j <= cap; ++j)
      if (std::abs(direct.at(j) - powered.at(j)) > 1e-10)
        throw InvariantViolation(
            "skeleton_law: k-individual law differs from the k-fold power at "
            "k=" + std::to_string(k) + ", j=" + std::to_string(j));
  }
  return skeleton;
}

double phi(std::int64_t k, double x, const OffspringLaw& law,
           std::size_t cap) {
  if (k < 0) throw std::invalid_argument("phi: negative power");
  return convolve_power(law, k, cap).mass_below(x);
}

}  // namespace gwlab::exact
