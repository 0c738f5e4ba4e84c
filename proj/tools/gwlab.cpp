// gwlab: simulate Galton-Watson chains, compute exact extinction tables,
// search the local survival criterion, and emit machine-readable
// certificates. See --help for the distribution grammar.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gwlab/analysis.hpp"
#include "gwlab/chain.hpp"
#include "gwlab/couplings.hpp"
#include "gwlab/exact.hpp"
#include "gwlab/parse.hpp"

namespace {

using nlohmann::json;

constexpr const char* kGrammarHelp =
    "Distribution syntax (whitespace-insensitive):\n"
    "  \"0:0.25,2:0.75\"   finite pmf as value:prob pairs, mass must total 1\n"
    "  \"poisson(1.0)\"    Poisson with the given mean\n"
    "  \"geometric(0.5)\"  P(k) = (1-p)^k p on {0,1,2,...}\n"
    "  \"delta(3)\"        point mass\n";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write output file " + path);
}

struct CommonFlags {
  std::string nu;
  std::int64_t init = 1;
  std::int64_t horizon = 50;
  std::int64_t runs = 100000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  std::size_t cap = 0;  // 0 = per-command default
  std::int64_t population_cap = gwlab::kDefaultPopulationCap;
  std::string format = "csv";
  std::string out;
  bool exact = false;
};

std::uint64_t resolve_seed(const CommonFlags& flags) {
  if (flags.seed_given) return flags.seed;
  if (const char* env = std::getenv("GWLAB_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw std::invalid_argument("GWLAB_SEED is not an unsigned integer");
    return static_cast<std::uint64_t>(v);
  }
  return 0;
}

std::size_t cap_or(const CommonFlags& flags, std::size_t fallback) {
  return flags.cap == 0 ? fallback : flags.cap;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_nu = true) {
  if (with_nu)
    cmd->add_option("--nu", flags.nu, "offspring distribution")->required();
  cmd->add_option("--init", flags.init, "initial population size");
  cmd->add_option("--horizon", flags.horizon, "number of generations");
  cmd->add_option("--runs", flags.runs, "Monte Carlo trajectories");
  cmd->add_option("--seed", flags.seed, "master seed (else $GWLAB_SEED, else 0)")
      ->each([&flags](const std::string&) { flags.seed_given = true; });
  cmd->add_option("--threads", flags.threads,
                  "worker cap, 0 = hardware (results do not depend on it)");
  cmd->add_option("--cap", flags.cap, "pmf support cap (0 = command default)");
  cmd->add_option("--pop-cap", flags.population_cap,
                  "population safety bound; larger paths are alive-censored");
  cmd->add_option("--format", flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", flags.out,
                  "write the table to this file (summary JSON then goes to stdout)");
  cmd->add_flag("--exact", flags.exact, "force exact oracle mode where available");
}

json base_summary(const char* command, const CommonFlags& flags,
                  std::uint64_t seed) {
  json j;
  j["command"] = command;
  j["nu"] = flags.nu;
  j["seed"] = seed;
  j["runs"] = flags.runs;
  j["horizon"] = flags.horizon;
  j["init"] = flags.init;
  j["population_cap"] = flags.population_cap;
  j["warnings"] = json::array();
  return j;
}

int cmd_simulate(const CommonFlags& flags) {
  const auto law = gwlab::parse_offspring(flags.nu, cap_or(flags, gwlab::kDefaultCap));
  const std::uint64_t seed = resolve_seed(flags);
  gwlab::ChainConfig config{law, flags.init, flags.horizon,
                            flags.population_cap, seed};
  const auto stats = gwlab::batch_simulate(config, flags.runs, {}, flags.threads);

  std::string csv = "t,alive_fraction,mean_pop\n";
  for (std::int64_t t = 0; t <= flags.horizon; ++t)
    csv += std::to_string(t) + "," + g17(stats.survival_fraction_at(t)) + "," +
           g17(stats.mean_population_at(t)) + "\n";

  json summary = base_summary("simulate", flags, seed);
  summary["survival_fraction"] = stats.survival_fraction_at(flags.horizon);
  summary["censored"] = stats.censored_count;
  summary["mean_population_final"] = stats.mean_population_at(flags.horizon);
  summary["confidence_method"] = stats.confidence_method;

  if (!flags.out.empty()) {
    write_text(flags.out, csv);
    std::cout << summary.dump(2) << "\n";
  } else if (flags.format == "json") {
    json table;
    for (std::int64_t t = 0; t <= flags.horizon; ++t) {
      table["t"].push_back(t);
      table["alive_fraction"].push_back(stats.survival_fraction_at(t));
      table["mean_pop"].push_back(stats.mean_population_at(t));
    }
    summary["table"] = table;
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << csv;
  }
  return 0;
}

int cmd_extinction(const CommonFlags& flags, double tol) {
  const std::size_t cap = cap_or(flags, gwlab::kDefaultCap);
  const auto law = gwlab::parse_offspring(flags.nu, cap);
  const double q = gwlab::exact::extinction_probability(law, tol);
  const double q_pow =
      std::pow(q, static_cast<double>(flags.init));

  json rows = json::array();
  std::string csv;
  csv += "# q = " + g17(q) + "\n";
  csv += "# q_pow_init = " + g17(q_pow) + "\n";
  csv += "t,ext_le_t,tail_bound\n";
  gwlab::Pmf current = gwlab::Pmf::point(flags.init, cap);
  for (std::int64_t t = 0; t <= flags.horizon; ++t) {
    if (t > 0) current = gwlab::exact::propagate(current, law, cap);
    csv += std::to_string(t) + "," + g17(current.mass_at_zero()) + "," +
           g17(current.tail_mass()) + "\n";
    rows.push_back({{"t", t},
                    {"ext_le_t", current.mass_at_zero()},
                    {"tail_bound", current.tail_mass()}});
  }

  json summary = base_summary("extinction", flags, 0);
  summary.erase("seed");
  summary.erase("runs");
  summary["q"] = q;
  summary["q_pow_init"] = q_pow;
  summary["tol"] = tol;
  if (auto w = gwlab::tail_warning(current, "extinction"))
    summary["warnings"].push_back(*w);

  if (!flags.out.empty()) {
    write_text(flags.out, csv);
    std::cout << summary.dump(2) << "\n";
  } else if (flags.format == "json") {
    summary["table"] = rows;
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << csv;
  }
  return 0;
}

int cmd_criterion(const CommonFlags& flags, std::int64_t n_max,
                  std::int64_t t_max, double confidence) {
  const auto law = gwlab::parse_offspring(flags.nu, cap_or(flags, gwlab::kDefaultCap));
  gwlab::analysis::CriterionOptions options;
  options.n_max = n_max;
  options.t_max = t_max;
  options.runs = flags.runs;
  options.confidence = confidence;
  options.seed = resolve_seed(flags);
  options.cap = cap_or(flags, 1024);
  options.population_cap = flags.population_cap;
  options.threads = flags.threads;
  if (flags.exact)
    options.exact_cell_budget = std::numeric_limits<std::uint64_t>::max();
  const auto cert = gwlab::analysis::criterion_search(law, options);
  write_text(flags.out, cert.to_json_string() + "\n");
  return 0;
}

int cmd_certificate(const CommonFlags& flags, double a, std::int64_t n) {
  const auto law = gwlab::parse_offspring(flags.nu, cap_or(flags, gwlab::kDefaultCap));
  const auto cert = gwlab::analysis::supercritical_certificate(
      law, a, n, cap_or(flags, gwlab::kDefaultCap));
  write_text(flags.out, cert.to_json_string() + "\n");
  return 0;
}

int cmd_couple(const CommonFlags& flags, const std::string& construction,
               std::int64_t block_size, double a, double p,
               std::int64_t level) {
  const auto law = gwlab::parse_offspring(flags.nu, cap_or(flags, gwlab::kDefaultCap));
  const std::uint64_t seed = resolve_seed(flags);
  const std::int64_t horizon = flags.horizon;

  std::int64_t violations = 0;
  std::int64_t identical = 0;
  std::int64_t lower_alive = 0;
  for (std::int64_t i = 0; i < flags.runs; ++i) {
    const std::uint64_t run_seed = gwlab::derive_seed(seed, static_cast<std::uint64_t>(i));
    try {
      if (construction == "superposition") {
        (void)gwlab::couplings::couple_superposition(law, horizon, run_seed,
                                                     flags.population_cap);
      } else if (construction == "block") {
        const auto path = gwlab::couplings::couple_block_minorant(
            law, block_size, a, horizon, run_seed, flags.population_cap);
        if (!path.lower.tau) ++lower_alive;
      } else if (construction == "thinning") {
        const auto path = gwlab::couplings::couple_thinning(
            law, p, flags.init, horizon, run_seed, flags.population_cap);
        if (path.identical) ++identical;
      } else if (construction == "truncation") {
        (void)gwlab::couplings::couple_truncation(
            law, level, horizon, run_seed, flags.init, flags.population_cap);
      } else {
        throw std::invalid_argument("unknown construction '" + construction +
                                    "'");
      }
    } catch (const gwlab::InvariantViolation&) {
      ++violations;
    }
  }

  json report = base_summary("couple", flags, seed);
  report["construction"] = construction;
  report["violations"] = violations;
  if (construction == "thinning") {
    report["p"] = p;
    report["identical_fraction"] =
        static_cast<double>(identical) / static_cast<double>(flags.runs);
  }
  if (construction == "block") {
    report["N"] = block_size;
    report["a"] = a;
    report["block_chain_alive_fraction"] =
        static_cast<double>(lower_alive) / static_cast<double>(flags.runs);
  }
  if (construction == "truncation") report["M"] = level;
  write_text(flags.out, report.dump(2) + "\n");
  return violations == 0 ? 0 : 1;
}

int cmd_sweep(const CommonFlags& flags, double theta_min, double theta_max,
              double theta_step, double confidence) {
  if (!(theta_step > 0.0) || theta_min > theta_max || theta_min < 0.0 ||
      theta_max > 2.0)
    throw std::invalid_argument(
        "sweep: need 0 <= theta-min <= theta-max <= 2 and theta-step > 0");
  const std::uint64_t seed = resolve_seed(flags);
  const double radius =
      std::sqrt(std::log(2.0 / (1.0 - confidence)) /
                (2.0 * static_cast<double>(flags.runs)));

  std::string csv = "m,survival_estimate,ci_low,ci_high\n";
  std::int64_t index = 0;
  for (double theta = theta_min; theta <= theta_max + 1e-12;
       theta = theta_min + static_cast<double>(++index) * theta_step) {
    // Two-point family: mass 1 - theta/2 at 0 and theta/2 at 2; mean theta.
    const auto law =
        gwlab::OffspringLaw::from_probs({1.0 - theta / 2.0, 0.0, theta / 2.0});
    gwlab::ChainConfig config{law, flags.init, flags.horizon,
                              flags.population_cap,
                              gwlab::derive_seed(seed, static_cast<std::uint64_t>(index))};
    const auto stats =
        gwlab::batch_simulate(config, flags.runs, {}, flags.threads);
    const double p_hat = stats.survival_fraction_at(flags.horizon);
    csv += g17(theta) + "," + g17(p_hat) + "," +
           g17(std::max(0.0, p_hat - radius)) + "," +
           g17(std::min(1.0, p_hat + radius)) + "\n";
  }

  if (!flags.out.empty()) {
    write_text(flags.out, csv);
    json summary;
    summary["command"] = "sweep";
    summary["seed"] = seed;
    summary["points"] = index;
    summary["confidence"] = confidence;
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("Galton-Watson branching-process laboratory.\n\n") +
               kGrammarHelp};
  app.require_subcommand(1);

  CommonFlags flags;
  double tol = 1e-9;
  std::int64_t n_max = 16;
  std::int64_t t_max = 16;
  double confidence = 0.999;
  double a = 2.0;
  std::int64_t cert_n = 0;
  std::string construction = "block";
  std::int64_t block_size = 3;
  double p = 0.9;
  std::int64_t level = 3;
  double theta_min = 0.5;
  double theta_max = 1.5;
  double theta_step = 0.05;

  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo batch: CSV of t,alive_fraction,mean_pop");
  add_common(simulate, flags);

  auto* extinction = app.add_subcommand(
      "extinction", "extinction probability q and the exact P(tau <= t) table");
  add_common(extinction, flags);
  extinction->add_option(
      "--tol", tol,
      "fixed-point iterate tolerance (near-critical laws converge slowly)");

  auto* criterion = app.add_subcommand(
      "criterion", "scan for the local survival criterion witness");
  add_common(criterion, flags);
  criterion->add_option("--nmax", n_max, "largest initial size scanned");
  criterion->add_option("--tmax", t_max, "largest horizon scanned");
  criterion->add_option("--confidence", confidence,
                        "confidence for Monte Carlo lower bounds");

  auto* certificate = app.add_subcommand(
      "certificate", "supercritical survival certificate (truncation bound)");
  add_common(certificate, flags);
  certificate->add_option("--a", a, "growth factor, 1 < a < mean")->required();
  certificate->add_option("--n", cert_n, "initial size for the product bound")
      ->required();

  auto* couple = app.add_subcommand(
      "couple", "run a coupled construction over many seeds, count violations");
  add_common(couple, flags);
  couple
      ->add_option("--construction", construction,
                   "superposition | block | thinning | truncation")
      ->check(CLI::IsMember({"superposition", "block", "thinning", "truncation"}));
  couple->add_option("--N", block_size, "block size for the block chain");
  couple->add_option("--a", a, "integer block factor");
  couple->add_option("--p", p, "thinning retention probability");
  couple->add_option("--M", level, "truncation level");

  auto* sweep = app.add_subcommand(
      "sweep", "survival across the two-point family with mean theta");
  add_common(sweep, flags, /*with_nu=*/false);
  sweep->add_option("--theta-min", theta_min, "first mean");
  sweep->add_option("--theta-max", theta_max, "last mean");
  sweep->add_option("--theta-step", theta_step, "mean increment");
  sweep->add_option("--confidence", confidence, "two-sided interval confidence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(flags);
    if (extinction->parsed()) return cmd_extinction(flags, tol);
    if (criterion->parsed())
      return cmd_criterion(flags, n_max, t_max, confidence);
    if (certificate->parsed()) return cmd_certificate(flags, a, cert_n);
    if (couple->parsed())
      return cmd_couple(flags, construction, block_size, a, p, level);
    if (sweep->parsed())
      return cmd_sweep(flags, theta_min, theta_max, theta_step, confidence);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
