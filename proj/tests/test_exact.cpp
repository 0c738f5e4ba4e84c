#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gwlab/chain.hpp"
#include "gwlab/exact.hpp"
#include "test_laws.hpp"

using namespace gwlab;
namespace ex = gwlab::exact;

namespace {
constexpr std::size_t kCap = 1024;
}

TEST_CASE("propagate: absorption and one-step law") {
  const auto law = laws::critical();
  const auto from_zero = ex::propagate(Pmf::point(0, kCap), law, kCap);
  CHECK(from_zero.mass_at_zero() == 1.0);

  const auto from_one = ex::propagate(Pmf::point(1, kCap), law, kCap);
  CHECK(from_one.at(0) == 0.5);
  CHECK(from_one.at(2) == 0.5);

  const auto from_two = ex::propagate(Pmf::point(2, kCap), law, kCap);
  CHECK(from_two.at(0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(from_two.at(2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(from_two.at(4) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("law_at: two-step tree") {
  const auto law = laws::critical();
  const auto start = Pmf::point(1, kCap);
  const auto at_zero = ex::law_at(start, law, 0, kCap);
  CHECK(at_zero.at(1) == 1.0);

  // Enumerated by hand: 5/8 at 0, 1/4 at 2, 1/8 at 4.
  const auto at_two = ex::law_at(start, law, 2, kCap);
  CHECK(at_two.at(0) == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(at_two.at(2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(at_two.at(4) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("extinction mass at zero is nondecreasing in t") {
  for (const auto& law : laws::finite_family()) {
    Pmf current = Pmf::point(1, kCap);
    double previous = current.mass_at_zero();
    for (int t = 0; t < 12; ++t) {
      current = ex::propagate(current, law, kCap);
      CHECK(current.mass_at_zero() >= previous - 1e-15);
      previous = current.mass_at_zero();
    }
  }
}

TEST_CASE("extinction_by") {
  CHECK(ex::extinction_by(Pmf::point(1, kCap), OffspringLaw::point_mass(0), 1,
                          kCap)
            .value == 1.0);
  CHECK(ex::extinction_by(Pmf::point(1, kCap), laws::subcritical(), 1, kCap)
            .value == 0.75);
  // Supercritical: approaches q = 1/3 from below.
  const auto law = laws::supercritical();
  double previous = 0.0;
  for (int t = 1; t <= 20; ++t) {
    const auto bound = ex::extinction_by(Pmf::point(1, kCap), law, t, kCap);
    CHECK(bound.value >= previous);
    CHECK(bound.value < 1.0 / 3.0);
    previous = bound.value;
  }
  CHECK(previous == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("extinction_probability fixed points") {
  CHECK(ex::extinction_probability(laws::supercritical(), 1e-12) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(ex::extinction_probability(laws::subcritical(), 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // No extinction when no zero offspring is possible.
  CHECK(ex::extinction_probability(laws::one_or_two(), 1e-12) == 0.0);
  CHECK(ex::extinction_probability(laws::delta_one(), 1e-12) == 0.0);
}

TEST_CASE("extinction_probability at criticality: slow convergence caveat") {
  // Theta(1/k) convergence: a loose iterate tolerance lands near 1.
  const double q = ex::extinction_probability(laws::critical(), 1e-9);
  CHECK(q > 0.9999);
  CHECK(q <= 1.0);
  // A tolerance beyond the iteration budget reports rather than stalls.
  CHECK_THROWS_AS(ex::extinction_probability(laws::critical(), 1e-14),
                  std::runtime_error);
}

TEST_CASE("sum of two independent chains at t = 1") {
  const auto law = laws::critical();
  const auto one = Pmf::point(1, kCap);
  const auto sum = ex::sum_law(one, one, law, 1, kCap);
  CHECK(sum.at(0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(sum.at(2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(sum.at(4) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("sum law at t = 0 reduces to a convolution; point mass at 0 is neutral") {
  const auto law = laws::supercritical();
  const auto a = Pmf::point(2, kCap);
  const auto b = Pmf::point(3, kCap);
  const auto at_zero = ex::sum_law(a, b, law, 0, kCap);
  CHECK(at_zero.at(5) == 1.0);

  const auto neutral = ex::sum_law(Pmf::point(0, kCap), b, law, 4, kCap);
  const auto direct = ex::law_at(b, law, 4, kCap);
  for (std::size_t j = 0; j <= kCap; ++j)
    CHECK(neutral.at(j) == doctest::Approx(direct.at(j)).epsilon(1e-12));
}

TEST_CASE("dual sum computations agree for every finite test law") {
  for (const auto& law : laws::finite_family())
    for (std::int64_t t = 0; t <= 6; ++t)
      for (std::int64_t i = 1; i <= 4; i += 3)
        CHECK_NOTHROW(
            ex::sum_law(Pmf::point(i, kCap), Pmf::point(1, kCap), law, t, kCap));
}

TEST_CASE("skeleton law") {
  const auto law = laws::critical();
  const auto t1 = ex::skeleton_law(law, 1, kCap);
  for (std::size_t k = 0; k < law.support_end(); ++k)
    CHECK(t1.at(k) == law.at(k));

  const auto t2 = ex::skeleton_law(law, 2, kCap);
  CHECK(t2.at(0) == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(t2.at(2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(t2.at(4) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("skeleton of a skeleton composes horizons") {
  // Cap 256 keeps the wide nested propagation fast; the one-step growth
  // factor makes above-cap excursions that return below it lighter than
  // 1e-9 at these horizons.
  const std::size_t cap = 256;
  for (const auto& law : {laws::critical(), laws::supercritical(),
                          laws::trunc_poisson(1.0)}) {
    for (std::int64_t big : {2, 3}) {
      for (std::int64_t small : {2, 3}) {
        const auto nested =
            ex::skeleton_law(ex::skeleton_law(law, big, cap), small, cap);
        const auto direct = ex::skeleton_law(law, big * small, cap);
        for (std::size_t j = 0; j < 128; ++j)
          CHECK(std::abs(nested.at(j) - direct.at(j)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("phi: mass of the k-fold sum strictly below x") {
  const auto law = laws::critical();
  CHECK(ex::phi(0, 1.0, law, kCap) == 1.0);   // the empty sum is 0
  CHECK(ex::phi(0, 0.0, law, kCap) == 0.0);   // strict inequality
  CHECK(ex::phi(1, 2.0, law, kCap) == 0.5);
  CHECK(ex::phi(2, 3.0, law, kCap) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("extinction by t from n individuals is the n-th power") {
  for (const auto& law :
       {laws::subcritical(), laws::critical(), laws::supercritical(),
        laws::trunc_poisson(1.2)}) {
    for (std::int64_t t : {1, 5, 20}) {
      const double base =
          ex::extinction_by(Pmf::point(1, kCap), law, t, kCap).value;
      for (std::int64_t n = 2; n <= 5; ++n) {
        const double direct =
            ex::extinction_by(Pmf::point(n, kCap), law, t, kCap).value;
        CHECK(std::abs(direct - std::pow(base, static_cast<double>(n))) <=
              1e-10);
      }
    }
  }
}

TEST_CASE("finite-horizon extinction converges to the fixed point") {
  const auto law = laws::supercritical();
  const double q = ex::extinction_probability(law, 1e-12);
  const double at_60 =
      ex::extinction_by(Pmf::point(1, kCap), law, 60, kCap).value;
  CHECK(std::abs(at_60 - q) <= 1e-9);
}

TEST_CASE("oracle agreement: Monte Carlo matches exact laws") {
  for (const auto& law : laws::finite_family()) {
    const std::int64_t runs = 20000;
    const std::int64_t horizon = 10;
    const ChainConfig config{law, std::int64_t{1}, horizon,
                             kDefaultPopulationCap, 404};
    const auto stats = batch_simulate(config, runs);
    const double exact_alive =
        1.0 - ex::extinction_by(Pmf::point(1, kCap), law, horizon, kCap).value;
    const double se =
        std::sqrt(std::max(exact_alive * (1.0 - exact_alive), 1e-12) /
                  static_cast<double>(runs));
    CHECK(std::abs(stats.survival_fraction_at(horizon) - exact_alive) <=
          4.0 * se + 1e-9);
  }
}
