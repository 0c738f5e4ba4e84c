#include "gwlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace gwlab::analysis {
namespace {

std::string u64_str(std::uint64_t v) { return std::to_string(v); }

void attach_tail_warning(Certificate& cert, const Pmf& pmf,
                         std::string_view op) {
  if (auto w = tail_warning(pmf, op)) cert.warnings.push_back(*w);
}

}  // namespace

std::string_view kind_name(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::kSubcriticalDecay:
      return "subcritical-decay";
    case CertificateKind::kSupercriticalSurvival:
      return "supercritical-survival";
    case CertificateKind::kLemma1Rate:
      return "lemma1-rate";
    case CertificateKind::kCriterionWitness:
      return "criterion-witness";
    case CertificateKind::kCriticalMarkov:
      return "critical-markov";
    case CertificateKind::kThinningPipeline:
      return "thinning-pipeline";
  }
  return "unknown";
}

std::string Certificate::to_json_string() const {
  nlohmann::json j;
  j["kind"] = kind_name(kind);
  j["parameters"] = parameters;
  j["bound_value"] = bound_value;
  j["verdict"] = pass ? "pass" : "fail";
  j["provenance"] = provenance;
  j["warnings"] = warnings;
  return j.dump(2);
}

Certificate subcritical_decay_check(const OffspringLaw& law, const Pmf& initial,
                                    std::int64_t n_max, std::size_t cap) {
  const Mean m = mean(law);
  if (!m.exact || !(m.value < 1.0))
    throw std::invalid_argument(
        "subcritical_decay_check: requires an exact mean < 1");
  if (n_max < 1)
    throw std::invalid_argument("subcritical_decay_check: need n_max >= 1");
  const double e0 = initial.mean_body();

  Certificate cert;
  cert.kind = CertificateKind::kSubcriticalDecay;
  cert.parameters["m"] = m.value;
  cert.parameters["initial_mean"] = e0;
  cert.parameters["n_max"] = static_cast<double>(n_max);

  Pmf current = initial;
  double worst_slack = -std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    current = exact::propagate(current, law, cap);
    // Exact mass at zero is a certified lower bound for extinction by n, so
    // this is an upper bound for P(tau > n).
    const double p_gt = 1.0 - current.mass_at_zero();
    const double bound = std::pow(m.value, static_cast<double>(n)) * e0;
    worst_slack = std::max(worst_slack, p_gt - bound);
    if (m.value > 0.0 && e0 > 0.0)
      max_ratio = std::max(
          max_ratio, p_gt / std::pow(m.value, static_cast<double>(n)));
  }
  cert.parameters["worst_slack"] = worst_slack;
  cert.bound_value = max_ratio;
  cert.pass = worst_slack <= 1e-10;
  cert.provenance["cap"] = std::to_string(cap);
  cert.provenance["final_tail"] = std::to_string(current.tail_mass());
  attach_tail_warning(cert, current, "subcritical_decay_check");
  return cert;
}

Certificate supercritical_certificate(const OffspringLaw& law, double a,
                                      std::int64_t n, std::size_t cap) {
  const Mean m = mean(law);
  if (!(m.value > 1.0))
    throw std::invalid_argument(
        "supercritical_certificate: requires mean > 1");
  if (!(a > 1.0) || !(a < m.value))
    throw std::invalid_argument(
        "supercritical_certificate: need 1 < a < mean");
  if (n < 1)
    throw std::invalid_argument("supercritical_certificate: need n >= 1");

  // Truncated means increase to the full mean, so some level exceeds a.
  std::int64_t level = 0;
  OffspringLaw truncated = truncate(law, 0);
  const std::int64_t level_max =
      static_cast<std::int64_t>(law.support_end()) + 1;
  while (!(mean(truncated).value > a)) {
    ++level;
    if (level > level_max)
      throw std::runtime_error(
          "supercritical_certificate: no truncation level exceeds a within "
          "the represented support; increase the law's cap");
    truncated = truncate(law, level);
  }
  const double mean_m = mean(truncated).value;
  const double var_m = variance(truncated);
  const double gap = mean_m - a;
  const double c = var_m / (gap * gap);

  Certificate cert;
  cert.kind = CertificateKind::kSupercriticalSurvival;
  cert.parameters["m"] = m.value;
  cert.parameters["a"] = a;
  cert.parameters["M"] = static_cast<double>(level);
  cert.parameters["mean_truncated"] = mean_m;
  cert.parameters["var_truncated"] = var_m;
  cert.parameters["c"] = c;
  cert.parameters["c_linear_gap"] = var_m / gap;
  cert.parameters["n"] = static_cast<double>(n);
  cert.provenance["cap"] = std::to_string(cap);

  if (!(static_cast<double>(n) > c)) {
    cert.pass = false;
    cert.bound_value = 0.0;
    cert.parameters["n_min_admissible"] = std::floor(c) + 1.0;
    return cert;
  }

  // log of prod_{i>=0} (1 - c/(n a^i)); the summand decays geometrically,
  // and the dropped tail is bounded by x/((1-x)(1-1/a)) at the cutoff.
  double log_sum = 0.0;
  double x = c / static_cast<double>(n);
  std::int64_t terms = 0;
  double residual = 0.0;
  while (x > 0.0) {
    residual = x / ((1.0 - x) * (1.0 - 1.0 / a));
    if (residual < 1e-14 || terms > 100000) break;
    log_sum += std::log1p(-x);
    x /= a;
    ++terms;
  }
  // Rounding the tail into the sum keeps the product a lower bound.
  cert.bound_value = std::exp(log_sum - residual);
  cert.pass = cert.bound_value > 0.0;
  cert.parameters["product_terms"] = static_cast<double>(terms);
  cert.parameters["log_residual"] = residual;
  return cert;
}

Certificate lemma1_rate(const OffspringLaw& law, std::int64_t block_size,
                        double a, std::size_t cap) {
  if (block_size < 1)
    throw std::invalid_argument("lemma1_rate: need block size >= 1");
  if (!(a >= 1.0) || a != std::floor(a))
    throw std::invalid_argument("lemma1_rate: a must be an integer >= 1");
  const double q_hat =
      1.0 - exact::phi(block_size, a * static_cast<double>(block_size), law, cap);
  const double value = a * q_hat;

  Certificate cert;
  cert.kind = CertificateKind::kLemma1Rate;
  cert.parameters["N"] = static_cast<double>(block_size);
  cert.parameters["a"] = a;
  cert.parameters["block_success_probability"] = q_hat;
  cert.bound_value = value;
  cert.pass = value > 1.0;
  cert.provenance["cap"] = std::to_string(cap);
  return cert;
}

Certificate criterion_search(const OffspringLaw& law,
                             const CriterionOptions& options) {
  if (options.n_max < 1 || options.t_max < 1)
    throw std::invalid_argument("criterion_search: need n_max, t_max >= 1");
  if (options.runs < 1)
    throw std::invalid_argument("criterion_search: need runs >= 1");

  Certificate cert;
  cert.kind = CertificateKind::kCriterionWitness;
  cert.parameters["nu0"] = law.mass_at_zero();
  if (law.mass_at_zero() == 0.0)
    cert.warnings.push_back(
        "criterion hypothesis nu(0) > 0 not satisfied; scanning anyway");
  cert.parameters["n_max"] = static_cast<double>(options.n_max);
  cert.parameters["t_max"] = static_cast<double>(options.t_max);
  cert.provenance["seed"] = u64_str(options.seed);
  cert.provenance["runs"] = std::to_string(options.runs);
  cert.provenance["confidence"] = std::to_string(options.confidence);
  cert.provenance["cap"] = std::to_string(options.cap);
  cert.provenance["exact_cell_budget"] =
      std::to_string(options.exact_cell_budget);
  cert.provenance["scan_order"] = "diagonals N+T ascending, N ascending within";

  // Exact-mode cache: per initial size N, the population laws at 0..T.
  std::unordered_map<std::int64_t, std::vector<Pmf>> chains;
  double max_value = -1.0;
  double max_upper = -1.0;
  std::int64_t arg_n = 0;
  std::int64_t arg_t = 0;

  for (std::int64_t diag = 2; diag <= options.n_max + options.t_max; ++diag) {
    const std::int64_t n_lo = std::max<std::int64_t>(1, diag - options.t_max);
    const std::int64_t n_hi = std::min(options.n_max, diag - 1);
    for (std::int64_t N = n_lo; N <= n_hi; ++N) {
      const std::int64_t T = diag - N;
      const double target = 2.0 * static_cast<double>(N);
      double value;
      double upper;
      bool exact_mode;
      if (static_cast<std::uint64_t>(N) * static_cast<std::uint64_t>(T) <=
          options.exact_cell_budget) {
        exact_mode = true;
        auto& chain = chains[N];
        if (chain.empty()) chain.push_back(Pmf::point(N, options.cap));
        while (static_cast<std::int64_t>(chain.size()) <= T)
          chain.push_back(exact::propagate(chain.back(), law, options.cap));
        const Pmf& at_t = chain[static_cast<std::size_t>(T)];
        value = at_t.mass_at_least(target);
        upper = value + at_t.tail_mass();
      } else {
        exact_mode = false;
        ChainConfig config{law, N, T, options.population_cap,
                           derive_seed(options.seed,
                                       static_cast<std::uint64_t>(N) * 1000003ULL +
                                           static_cast<std::uint64_t>(T))};
        const auto stats = batch_simulate(
            config, options.runs,
            [T, target](const Trajectory& traj) {
              return static_cast<double>(population_at(traj, T)) >= target;
            },
            options.threads);
        const double p_hat = static_cast<double>(stats.event_count) /
                             static_cast<double>(options.runs);
        const double radius = hoeffding_radius(options.runs, options.confidence);
        value = p_hat - radius;
        upper = p_hat + radius;
      }
      if (value > max_value) {
        max_value = value;
        arg_n = N;
        arg_t = T;
      }
      max_upper = std::max(max_upper, upper);
      if (value > 0.5) {
        cert.pass = true;
        cert.parameters["N"] = static_cast<double>(N);
        cert.parameters["T"] = static_cast<double>(T);
        cert.parameters["value"] = value;
        cert.parameters["value_upper"] = upper;
        cert.bound_value = value;
        cert.provenance["mode"] = exact_mode ? "exact" : "monte-carlo";
        return cert;
      }
    }
  }
  cert.pass = false;
  cert.bound_value = max_value;
  cert.parameters["max_value"] = max_value;
  cert.parameters["max_upper_bound"] = max_upper;
  cert.parameters["max_at_N"] = static_cast<double>(arg_n);
  cert.parameters["max_at_T"] = static_cast<double>(arg_t);
  cert.provenance["mode"] = "scan-exhausted";
  return cert;
}

Certificate criterion_search(const OffspringLaw& law, std::int64_t n_max,
                             std::int64_t t_max, std::int64_t runs,
                             double confidence) {
  CriterionOptions options;
  options.n_max = n_max;
  options.t_max = t_max;
  options.runs = runs;
  options.confidence = confidence;
  return criterion_search(law, options);
}

Certificate critical_markov_bound(const OffspringLaw& law, std::int64_t N,
                                  std::int64_t T, std::size_t cap) {
  const Mean m = mean(law);
  if (!m.exact || std::abs(m.value - 1.0) > 1e-12)
    throw std::invalid_argument(
        "critical_markov_bound: requires a critical law (|mean - 1| <= 1e-12)");
  if (N < 1 || T < 1)
    throw std::invalid_argument("critical_markov_bound: need N, T >= 1");

  const Pmf at_t = exact::law_at(Pmf::point(N, cap), law, T, cap);
  const double body = at_t.mass_at_least(2.0 * static_cast<double>(N));
  const double upper = body + at_t.tail_mass();
  const double bound =
      std::pow(m.value, static_cast<double>(T)) / 2.0;  // E[Y_T]/(2N)

  Certificate cert;
  cert.kind = CertificateKind::kCriticalMarkov;
  cert.parameters["m"] = m.value;
  cert.parameters["N"] = static_cast<double>(N);
  cert.parameters["T"] = static_cast<double>(T);
  cert.parameters["exact_probability"] = body;
  cert.parameters["exact_probability_upper"] = upper;
  cert.bound_value = bound;
  cert.pass = upper <= bound + 1e-10;
  cert.provenance["cap"] = std::to_string(cap);
  cert.provenance["tail"] = std::to_string(at_t.tail_mass());
  attach_tail_warning(cert, at_t, "critical_markov_bound");
  return cert;
}

Certificate thinning_pipeline(const OffspringLaw& law, std::int64_t N,
                              std::int64_t T, std::int64_t M, double p,
                              const ThinningOptions& options) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("thinning_pipeline: need p in (0,1)");
  if (N < 1 || T < 1 || M < 0)
    throw std::invalid_argument("thinning_pipeline: need N, T >= 1 and M >= 0");
  if (options.runs < 1)
    throw std::invalid_argument("thinning_pipeline: need runs >= 1");

  // Sub-probability propagation restricted to {0..M}: mass whose partial sum
  // ever exceeds M can never return (offspring are non-negative), so
  // dropping it at each incremental convolution step is exact.
  double r = 0.0;
  double violated = 0.0;
  if (N <= M) {
    const auto& nu = law.probs();
    const double nu_tail = law.tail_mass();
    const std::size_t width = static_cast<std::size_t>(M) + 1;
    std::vector<double> current(width, 0.0);
    current[static_cast<std::size_t>(N)] = 1.0;
    for (std::int64_t step_idx = 0; step_idx < T; ++step_idx) {
      std::vector<double> out(width, 0.0);
      std::vector<double> power{1.0};
      double power_lost = 0.0;
      double power_body = 1.0;
      for (std::size_t k = 0; k < width; ++k) {
        const double w = current[k];
        if (w > 0.0) {
          for (std::size_t j = 0; j < power.size(); ++j) out[j] += w * power[j];
          violated += w * power_lost;
        }
        if (k + 1 == width) break;
        std::vector<double> next(
            std::min(power.size() + nu.size() - 1, width), 0.0);
        double overflow = 0.0;
        for (std::size_t i = 0; i < power.size(); ++i) {
          const double pi = power[i];
          if (pi == 0.0) continue;
          for (std::size_t j = 0; j < nu.size(); ++j) {
            const double mass = pi * nu[j];
            if (i + j <= static_cast<std::size_t>(M))
              next[i + j] += mass;
            else
              overflow += mass;
          }
        }
        power_lost += overflow + nu_tail * power_body;
        power_body = power_body * (law.body_mass()) - overflow;
        power.swap(next);
      }
      current.swap(out);
    }
    for (std::size_t k = static_cast<std::size_t>(2 * N); k < width; ++k)
      r += current[k];
  }

  const double p_tm =
      std::exp(static_cast<double>(T) * static_cast<double>(M) * std::log(p));
  const double bound = r * p_tm;

  // Direct simulation of the thinned chain for the cross-check.
  const OffspringLaw thinned = thin(law, p);
  ChainConfig config{thinned, N, T, options.population_cap, options.seed};
  const double target = 2.0 * static_cast<double>(N);
  const auto stats = batch_simulate(
      config, options.runs,
      [T, target](const Trajectory& traj) {
        return static_cast<double>(population_at(traj, T)) >= target;
      },
      options.threads);
  const double estimate = static_cast<double>(stats.event_count) /
                          static_cast<double>(options.runs);
  const double sigma =
      std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(options.runs));

  Certificate cert;
  cert.kind = CertificateKind::kThinningPipeline;
  cert.parameters["N"] = static_cast<double>(N);
  cert.parameters["T"] = static_cast<double>(T);
  cert.parameters["M"] = static_cast<double>(M);
  cert.parameters["p"] = p;
  cert.parameters["restricted_event_probability"] = r;
  cert.parameters["violated_mass"] = violated;
  cert.parameters["p_power_TM"] = p_tm;
  cert.parameters["thinned_estimate"] = estimate;
  cert.parameters["thinned_sigma"] = sigma;
  cert.bound_value = bound;
  cert.pass = bound <= estimate + 4.0 * sigma;
  cert.provenance["runs"] = std::to_string(options.runs);
  cert.provenance["seed"] = u64_str(options.seed);
  cert.provenance["population_cap"] = std::to_string(options.population_cap);
  return cert;
}

}  // namespace gwlab::analysis
