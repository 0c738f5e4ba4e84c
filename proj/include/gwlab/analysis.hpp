#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gwlab/chain.hpp"
#include "gwlab/exact.hpp"
#include "gwlab/offspring.hpp"

namespace gwlab::analysis {

enum class CertificateKind {
  kSubcriticalDecay,
  kSupercriticalSurvival,
  kLemma1Rate,
  kCriterionWitness,
  kCriticalMarkov,
  kThinningPipeline,
};

std::string_view kind_name(CertificateKind kind);

/// Numeric witness of a quantitative bound: parameters, the bound value, a
/// pass/fail verdict and enough provenance (seeds, runs, caps) to reproduce
/// the computation bit for bit. Serializes to a deterministic JSON document.
struct Certificate {
  CertificateKind kind;
  std::map<std::string, double> parameters;
  double bound_value = 0.0;
  bool pass = false;
  std::map<std::string, std::string> provenance;
  std::vector<std::string> warnings;

  std::string to_json_string() const;
};

/// Verifies the geometric decay of the survival probability of a
/// subcritical chain: exact P(tau > n) <= m^n * E[Y_0] for every n <= n_max
/// (tolerance 1e-10). bound_value reports the largest observed
/// P(tau > n) / m^n, the implied constant of the decay. Requires mean < 1.
Certificate subcritical_decay_check(const OffspringLaw& law, const Pmf& initial,
                                    std::int64_t n_max,
                                    std::size_t cap = kDefaultCap);

/// Survival certificate for a supercritical law via truncation and a
/// second-moment bound: picks the smallest truncation level M with
/// E[X ^ M] > a, forms c = Var(X ^ M) / (E[X ^ M] - a)^2, and for n > c
/// returns the infinite-product lower bound on survival from n individuals,
/// prod_{i>=0} (1 - c/(n a^i)), evaluated by log-summation with the
/// geometric tail bounded analytically (relative precision better than
/// 1e-10, rounded down so the value stays a certified lower bound). The
/// linear-gap variant of the constant is surfaced as "c_linear_gap".
/// With n <= c the certificate fails and reports the minimal admissible n.
Certificate supercritical_certificate(const OffspringLaw& law, double a,
                                      std::int64_t n,
                                      std::size_t cap = kDefaultCap);

/// Block-survival rate a * P(N-fold sum >= aN): when it exceeds 1 the block
/// chain is supercritical and survival from one individual is certified.
/// Integer a >= 1 only.
Certificate lemma1_rate(const OffspringLaw& law, std::int64_t block_size,
                        double a, std::size_t cap = kDefaultCap);

struct CriterionOptions {
  std::int64_t n_max = 64;
  std::int64_t t_max = 64;
  std::int64_t runs = 100000;
  double confidence = 0.999;
  std::uint64_t seed = 0;
  std::size_t cap = 1024;               // support cap in exact mode
  std::uint64_t exact_cell_budget = 256;  // exact when N*T <= budget
  std::int64_t population_cap = kDefaultPopulationCap;
  int threads = 0;
};

/// Scans (N, T) in diagonal order (N+T = 2, 3, ... with N ascending inside a
/// diagonal) for the local survival criterion P(Y_T >= 2N from N) > 1/2.
/// Cells with N*T within the work budget are evaluated exactly (the reported
/// value is the certified body mass); larger cells use Monte Carlo with a
/// one-sided Hoeffding lower confidence bound. Returns the scan-order-first
/// witness, or a failing certificate reporting the maximum observed value
/// and its upper bound over the scan.
Certificate criterion_search(const OffspringLaw& law,
                             const CriterionOptions& options = {});
Certificate criterion_search(const OffspringLaw& law, std::int64_t n_max,
                             std::int64_t t_max, std::int64_t runs,
                             double confidence);

/// For a critical law (|mean - 1| <= 1e-12): the first-moment bound
/// P(Y_T >= 2N from N) <= E[Y_T]/(2N) = 1/2, checked against the exact
/// probability (pass iff exact <= 1/2 + 1e-10, tail included).
Certificate critical_markov_bound(const OffspringLaw& law, std::int64_t N,
                                  std::int64_t T, std::size_t cap = kDefaultCap);

struct ThinningOptions {
  std::int64_t runs = 100000;
  std::uint64_t seed = 0;
  std::int64_t population_cap = kDefaultPopulationCap;
  int threads = 0;
};

/// Computes r = P(running max <= M up to T and Y_T >= 2N, from N) exactly by
/// propagation restricted to {0..M} (overflow drops into a violated bucket),
/// then certifies the lower bound r * p^(T*M) for the thinned chain's event
/// P(Y^p_T >= 2N) against a direct simulation of the thinned chain
/// (pass iff bound <= estimate + 4 sigma). Requires p in (0,1).
Certificate thinning_pipeline(const OffspringLaw& law, std::int64_t N,
                              std::int64_t T, std::int64_t M, double p,
                              const ThinningOptions& options = {});

}  // namespace gwlab::analysis
