#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "homsim/budget.hpp"

using namespace homsim;
using budget::NoiseBudget;
using budget::ValueWithSigma;

TEST_CASE("background contribution") {
  CHECK(budget::background_contribution(1100.0, 0.0) == 0.0);
  // 80 of 1100 counts/s: 2b - b^2 = 0.1402
  CHECK(budget::background_contribution(1100.0, 80.0) == doctest::Approx(0.14).epsilon(2e-3));
  CHECK(budget::background_contribution(1100.0, 1100.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(budget::background_contribution(1100.0, 1200.0), DomainError);
  CHECK_THROWS_AS(budget::background_contribution(0.0, 0.0), DomainError);

  // monotone increasing in the noise fraction, exactly 0 at b = 0
  double prev = -1.0;
  for (double noise = 0.0; noise <= 1100.0; noise += 55.0) {
    const double d = budget::background_contribution(1100.0, noise);
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("spectral impurity contribution: ledger and model modes") {
  CHECK(budget::spectral_impurity_contribution(1.0, budget::ImpurityMode::kPaperLedger) == 0.0);
  CHECK(budget::spectral_impurity_contribution(1.0, budget::ImpurityMode::kModel) == 0.0);
  CHECK(budget::spectral_impurity_contribution(0.94, budget::ImpurityMode::kPaperLedger) == 0.13);
  // the dilution model gives 1 - 0.94^2 = 0.1164, deliberately not equal to
  // the tabulated ledger value
  CHECK(budget::spectral_impurity_contribution(0.94, budget::ImpurityMode::kModel) ==
        doctest::Approx(0.1164).epsilon(1e-9));
  CHECK_THROWS_AS(budget::spectral_impurity_contribution(0.0), DomainError);
  CHECK_THROWS_AS(budget::spectral_impurity_contribution(0.8, budget::ImpurityMode::kPaperLedger),
                  DomainError);
}

TEST_CASE("compose is additive and permutation invariant") {
  NoiseBudget b;
  b.baseline = 0.0;
  b.contributions = {{"background", 0.14}, {"impurity", 0.13}, {"fiber", 0.07}};
  CHECK(budget::compose(b) == doctest::Approx(0.34).epsilon(1e-12));
  CHECK(!budget::exceeds_distinguishable_bound(b));

  NoiseBudget empty;
  empty.baseline = 0.05;
  CHECK(budget::compose(empty) == 0.05);
  NoiseBudget single;
  single.baseline = 0.1;
  single.contributions = {{"x", 0.2}};
  CHECK(budget::compose(single) == doctest::Approx(0.3).epsilon(1e-15));

  std::mt19937 shuffler(3);
  for (int i = 0; i < 20; ++i) {
    auto c = b;
    std::shuffle(c.contributions.begin(), c.contributions.end(), shuffler);
    CHECK(budget::compose(c) == doctest::Approx(budget::compose(b)).epsilon(1e-15));
  }

  NoiseBudget over;
  over.contributions = {{"a", 0.3}, {"b", 0.3}};
  CHECK(budget::exceeds_distinguishable_bound(over));
}

TEST_CASE("visibility with error propagation") {
  SUBCASE("degenerate cases") {
    auto v = budget::visibility({0.5, 0.0}, {0.5, 0.0});
    CHECK(v.value == 0.0);
    CHECK(v.sigma == 0.0);
    auto v2 = budget::visibility({0.5, 0.0}, {0.0, 0.0});
    CHECK(v2.value == 1.0);
    CHECK(v2.sigma == 0.0);
    CHECK_THROWS_AS(budget::visibility({0.0, 0.0}, {0.1, 0.0}), DomainError);
  }
  SUBCASE("published values") {
    auto v = budget::visibility({0.54, 0.04}, {0.35, 0.04});
    CHECK(v.value == doctest::Approx(0.35).epsilon(0.02));
    CHECK(v.sigma == doctest::Approx(0.088).epsilon(0.01));
    // independent propagation arithmetic
    const double expected_sigma =
        std::sqrt(std::pow(0.04 / 0.54, 2) + std::pow(0.35 * 0.04 / (0.54 * 0.54), 2));
    CHECK(v.sigma == doctest::Approx(expected_sigma).epsilon(1e-12));
  }
  SUBCASE("invariant under common scaling of the central values") {
    auto v1 = budget::visibility({0.54, 0.0}, {0.35, 0.0});
    auto v2 = budget::visibility({5.4, 0.0}, {3.5, 0.0});
    CHECK(v1.value == doctest::Approx(v2.value).epsilon(1e-12));
  }
}

TEST_CASE("entanglement time") {
  budget::RateConfig cfg;  // defaults: 4e-5, 1e8, prefactor 0.5, overlap off
  const auto t = budget::entanglement_time(cfg);
  CHECK(t.finite);
  CHECK(t.seconds == doctest::Approx(12.5).epsilon(1e-12));

  SUBCASE("quadratic scaling in efficiency, linear in rate") {
    auto c2 = cfg;
    c2.collection_efficiency *= 2.0;
    CHECK(budget::entanglement_time(c2).seconds == doctest::Approx(12.5 / 4.0).epsilon(1e-12));
    auto c3 = cfg;
    c3.rep_rate *= 2.0;
    CHECK(budget::entanglement_time(c3).seconds == doctest::Approx(12.5 / 2.0).epsilon(1e-12));
  }
  SUBCASE("strictly decreasing in rate and efficiency") {
    double prev = 1e300;
    for (double eff = 1e-5; eff < 1e-3; eff *= 1.7) {
      auto c = cfg;
      c.collection_efficiency = eff;
      const double s = budget::entanglement_time(c).seconds;
      CHECK(s < prev);
      prev = s;
    }
  }
  SUBCASE("zero rate is an infinite-time flagged result, not an error") {
    auto c = cfg;
    c.rep_rate = 0.0;
    const auto z = budget::entanglement_time(c);
    CHECK(!z.finite);
    CHECK(std::isinf(z.seconds));
  }
  SUBCASE("overlap factor") {
    auto c = cfg;
    c.overlap_factor_enabled = true;
    c.natural_linewidth = 13.26e6;  // against the 50 MHz linewidth
    CHECK(budget::entanglement_time(c).seconds ==
          doctest::Approx(12.5 * 50.0 / 13.26).epsilon(1e-9));
    c.natural_linewidth = 80e6;  // wider than the linewidth: capped at 1
    CHECK(budget::entanglement_time(c).seconds == doctest::Approx(12.5).epsilon(1e-12));
  }
}
