// Acceptance suite: runs every acceptance criterion at its pinned tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failures. An optional argv[1] names the CLI binary, enabling the
// end-to-end byte-determinism check.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gwlab/analysis.hpp"
#include "gwlab/chain.hpp"
#include "gwlab/couplings.hpp"
#include "gwlab/exact.hpp"
#include "test_laws.hpp"

using namespace gwlab;
namespace ex = gwlab::exact;
namespace an = gwlab::analysis;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s  criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++failures;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Monte Carlo survival at t = 20 within 4 standard errors of the exact
//    law, across the whole finite test family; reject on > 1 failing law.
void criterion_1() {
  const std::int64_t runs = 100000;
  const std::int64_t horizon = 20;
  int failing = 0;
  std::string detail;
  const auto family = laws::finite_family();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& law = family[i];
    const double exact_alive =
        1.0 - ex::extinction_by(Pmf::point(1), law, horizon, kDefaultCap).value;
    const ChainConfig config{law, std::int64_t{1}, horizon,
                             kDefaultPopulationCap,
                             derive_seed(20250801, i)};
    const auto stats = batch_simulate(config, runs);
    const double p_hat = stats.survival_fraction_at(horizon);
    const double se =
        std::sqrt(exact_alive * (1.0 - exact_alive) / static_cast<double>(runs));
    if (std::abs(p_hat - exact_alive) > 4.0 * se) {
      ++failing;
      detail += " law#" + std::to_string(i);
    }
  }
  report(1, failing <= 1,
         "MC vs exact survival at t=20, 1e5 runs, 4 SE: " +
             std::to_string(failing) + " of 8 laws outside" + detail);
}

// 2. Subcritical decay: exact P(tau > n) <= 0.5^n for n <= 30 (1e-10).
void criterion_2() {
  const auto cert =
      an::subcritical_decay_check(laws::subcritical(), Pmf::point(1), 30);
  report(2, cert.pass,
         "exact P(tau>n) <= 0.5^n for n <= 30, worst slack " +
             std::to_string(cert.parameters.at("worst_slack")));
}

// 3. Superposition law: dual computations agree pointwise <= 1e-10 for
//    t <= 6 over every finite test law.
void criterion_3() {
  const std::size_t cap = 1024;
  bool ok = true;
  std::string what;
  for (const auto& law : laws::finite_family()) {
    for (std::int64_t t = 0; t <= 6 && ok; ++t) {
      for (std::int64_t i : {1, 3}) {
        try {
          (void)ex::sum_law(Pmf::point(i, cap), Pmf::point(1, cap), law, t, cap);
        } catch (const InvariantViolation& e) {
          ok = false;
          what = e.what();
        }
      }
    }
  }
  report(3, ok, ok ? "sum-law dual computations agree <= 1e-10, t <= 6"
                   : "disagreement: " + what);
}

// 4. Extinction powers: finite-t identity to 1e-10 and fixed-point q^n to
//    1e-8 through the independent finite-horizon route.
void criterion_4() {
  const std::size_t cap = 2048;
  bool ok = true;
  for (const auto& law :
       {laws::subcritical(), laws::critical(), laws::supercritical()}) {
    std::vector<Pmf> chains;
    for (std::int64_t n = 1; n <= 5; ++n)
      chains.push_back(Pmf::point(n, cap));
    for (std::int64_t t = 1; t <= 20; ++t) {
      for (auto& chain : chains) chain = ex::propagate(chain, law, cap);
      const double base = chains[0].mass_at_zero();
      for (std::int64_t n = 2; n <= 5; ++n)
        if (std::abs(chains[static_cast<std::size_t>(n - 1)].mass_at_zero() -
                     std::pow(base, static_cast<double>(n))) > 1e-10)
          ok = false;
    }
  }
  // Non-critical laws converge geometrically, so the horizon-60 value is an
  // independent route to q itself.
  for (const auto& law : {laws::subcritical(), laws::supercritical()}) {
    const double q = ex::extinction_probability(law, 1e-12);
    for (std::int64_t n = 1; n <= 5; ++n) {
      const double via_horizon =
          ex::extinction_by(Pmf::point(n, cap), law, 60, cap).value;
      if (std::abs(via_horizon - std::pow(q, static_cast<double>(n))) > 1e-8)
        ok = false;
    }
  }
  report(4, ok, "extinction powers: finite-t identity 1e-10, q^n via t=60 1e-8");
}

// 5. Skeleton laws: semigroup within 1e-9 for T, S <= 3 (the k <= 5
//    convolution-power identity is asserted inside every construction).
//    Cap 256 covers the occupied support; above-cap excursions that return
//    below it weigh far less than the tolerance at these horizons.
void criterion_5() {
  const std::size_t cap = 256;
  bool ok = true;
  for (const auto& law : {laws::critical(), laws::supercritical(),
                          laws::trunc_poisson(1.0)}) {
    for (std::int64_t big = 1; big <= 3 && ok; ++big) {
      for (std::int64_t small = 1; small <= 3 && ok; ++small) {
        try {
          const auto nested =
              ex::skeleton_law(ex::skeleton_law(law, big, cap), small, cap);
          const auto direct = ex::skeleton_law(law, big * small, cap);
          for (std::size_t j = 0; j <= cap; ++j)
            if (std::abs(nested.at(j) - direct.at(j)) > 1e-9) ok = false;
        } catch (const InvariantViolation&) {
          ok = false;
        }
      }
    }
  }
  report(5, ok, "skeleton semigroup 1e-9 and k-fold power identities");
}

// 6. Truncation certificate on the worked two-point law.
void criterion_6() {
  const auto cert = an::supercritical_certificate(laws::supercritical(), 1.25, 13);
  const double truth = 1.0 - std::pow(1.0 / 3.0, 13.0);
  const bool ok = cert.pass && std::abs(cert.parameters.at("c") - 12.0) < 1e-9 &&
                  cert.bound_value > 0.0 && cert.bound_value <= truth + 1e-9;
  report(6, ok,
         "certificate c = " + std::to_string(cert.parameters.at("c")) +
             ", product bound " + std::to_string(cert.bound_value) +
             " within (0, 1 - q^13]");
}

// 7. Couplings: zero pathwise violations over 1e4 seeds, t <= 20 each.
void criterion_7() {
  std::int64_t violations = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    try {
      (void)couplings::couple_block_minorant(laws::supercritical(), 3, 2.0, 20,
                                             derive_seed(71, s), 1000000);
    } catch (const InvariantViolation&) {
      ++violations;
    }
    try {
      (void)couplings::couple_thinning(laws::critical(), 0.9, 4, 20,
                                       derive_seed(72, s));
    } catch (const InvariantViolation&) {
      ++violations;
    }
    try {
      (void)couplings::couple_truncation(OffspringLaw::poisson(2.0), 3, 20,
                                         derive_seed(73, s), 1, 10000);
    } catch (const InvariantViolation&) {
      ++violations;
    }
  }
  report(7, violations == 0,
         "block/thinning/truncation orders over 1e4 seeds x t=20: " +
             std::to_string(violations) + " violations");
}

// 8. Local criterion, forward consistency: exact witness above 1/2 and the
//    matching block-rate certificate on the skeleton with a = 2.
void criterion_8() {
  const auto law = laws::supercritical();
  const auto witness = an::criterion_search(law, 64, 64, 10000, 0.999);
  bool ok = witness.pass && witness.provenance.at("mode") == "exact" &&
            witness.parameters.at("value") > 0.5;
  double rate_value = 0.0;
  if (ok) {
    const auto T = static_cast<std::int64_t>(witness.parameters.at("T"));
    const auto N = static_cast<std::int64_t>(witness.parameters.at("N"));
    const auto rate =
        an::lemma1_rate(ex::skeleton_law(law, T, 2048), N, 2.0, 2048);
    rate_value = rate.bound_value;
    ok = rate.pass &&
         std::abs(rate.bound_value - 2.0 * witness.parameters.at("value")) <
             1e-10;
  }
  report(8, ok,
         "exact witness value " +
             std::to_string(witness.pass ? witness.parameters.at("value") : -1.0) +
             " > 1/2 and skeleton block rate " + std::to_string(rate_value) +
             " > 1");
}

// 9. Critical laws: the full exact scan stays at or below 1/2, and the
//    two-point critical chain is essentially extinct by t = 1e4.
void criterion_9() {
  bool ok = true;
  std::string detail;
  for (const auto& law : {laws::critical(), laws::trunc_poisson(1.0)}) {
    an::CriterionOptions options;
    options.n_max = 16;
    options.t_max = 16;
    options.cap = 1024;
    const auto cert = an::criterion_search(law, options);
    const double upper = cert.pass ? 1.0 : cert.parameters.at("max_upper_bound");
    if (cert.pass || upper > 0.5 + 1e-10) ok = false;
    detail += " max=" + std::to_string(upper);
  }
  const ChainConfig config{laws::critical(), std::int64_t{1}, 10000,
                           kDefaultPopulationCap, 90210};
  const auto stats = batch_simulate(config, 10000);
  const double extinct = 1.0 - stats.survival_fraction_at(10000);
  if (!(extinct > 0.97)) ok = false;
  report(9, ok,
         "critical scans N,T <= 16 stay <= 1/2 (+1e-10):" + detail +
             "; extinct fraction by t=1e4: " + std::to_string(extinct));
}

// 10. Byte-identical certificates across reruns with one master seed, at the
//     library level and (when the binary is named) through the CLI.
void criterion_10(const char* cli_path) {
  auto run_suite = []() {
    std::string blob;
    blob += an::supercritical_certificate(laws::supercritical(), 1.25, 13)
                .to_json_string();
    blob += an::subcritical_decay_check(laws::subcritical(), Pmf::point(1), 20)
                .to_json_string();
    an::CriterionOptions options;
    options.n_max = 6;
    options.t_max = 6;
    options.runs = 5000;
    options.seed = 424242;
    options.exact_cell_budget = 4;  // force Monte Carlo cells
    blob += an::criterion_search(laws::subcritical(), options).to_json_string();
    an::ThinningOptions thin_options;
    thin_options.runs = 5000;
    thin_options.seed = 424242;
    blob += an::thinning_pipeline(laws::critical(), 1, 2, 4, 0.9, thin_options)
                .to_json_string();
    return blob;
  };
  bool ok = run_suite() == run_suite();
  std::string detail = "library certificates byte-identical across reruns";
  if (cli_path != nullptr) {
    const std::string base = std::string("\"") + cli_path + "\"";
    const std::string cmd_a = base +
                              " criterion --nu 0:0.75,2:0.25 --nmax 6 --tmax 6 "
                              "--runs 2000 --seed 99 --out accept_cli_a.json";
    const std::string cmd_b = base +
                              " criterion --nu 0:0.75,2:0.25 --nmax 6 --tmax 6 "
                              "--runs 2000 --seed 99 --out accept_cli_b.json";
    if (std::system(cmd_a.c_str()) != 0 || std::system(cmd_b.c_str()) != 0) {
      ok = false;
      detail += "; CLI invocation failed";
    } else {
      const auto a = read_file("accept_cli_a.json");
      const auto b = read_file("accept_cli_b.json");
      if (a.empty() || a != b) {
        ok = false;
        detail += "; CLI outputs differ";
      } else {
        detail += "; CLI outputs byte-identical";
      }
    }
  }
  report(10, ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli_path = argc > 1 ? argv[1] : nullptr;
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(cli_path);
  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria failed\n", failures);
  return failures;
}
