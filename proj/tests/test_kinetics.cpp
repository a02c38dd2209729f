#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "homsim/kinetics.hpp"

using namespace homsim;

TEST_CASE("chain analysis in the two-level limit") {
  // shelf_prob = 0 with strong pumping: the antibunching rate is
  // pump + gamma and the shelving mode carries no amplitude.
  EmissionDynamics dyn;
  dyn.pump_rate = 1e8;
  dyn.gamma = 1.0 / 12e-9;
  dyn.shelf_prob = 0.0;
  dyn.shelf_lifetime = 150e-9;

  const auto ca = kinetics::analyze(dyn);
  CHECK(ca.lambda_fast == doctest::Approx(dyn.pump_rate + dyn.gamma).epsilon(1e-9));
  CHECK(ca.p_excited_ss ==
        doctest::Approx(dyn.pump_rate / (dyn.pump_rate + dyn.gamma)).epsilon(1e-9));

  const auto ac = kinetics::dynamics_to_autocorr(dyn);
  CHECK(ac.a == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(ac.tau1 == doctest::Approx(1.0 / (dyn.pump_rate + dyn.gamma)).epsilon(1e-9));
}

TEST_CASE("dynamics <-> autocorr round trip") {
  const double gamma = 1.0 / 12e-9;
  for (const AutocorrParams target :
       {AutocorrParams{0.4, 6e-9, 80e-9}, AutocorrParams{1.0, 8.4706e-9, 80e-9},
        AutocorrParams{0.05, 4e-9, 200e-9}, AutocorrParams{2.5, 10e-9, 60e-9}}) {
    const auto dyn = kinetics::autocorr_to_dynamics(target, gamma);
    CHECK(dyn.pump_rate > 0.0);
    CHECK(dyn.shelf_prob >= 0.0);
    CHECK(dyn.shelf_prob < 1.0);
    const auto back = kinetics::dynamics_to_autocorr(dyn);
    CHECK(back.a == doctest::Approx(target.a).epsilon(1e-6));
    CHECK(back.tau1 == doctest::Approx(target.tau1).epsilon(1e-6));
    CHECK(back.tau2 == doctest::Approx(target.tau2).epsilon(1e-6));
  }
}

TEST_CASE("unreachable autocorr targets are refused") {
  const double gamma = 1.0 / 12e-9;
  // antibunching slower than radiative decay cannot come from this chain
  CHECK_THROWS_AS(kinetics::autocorr_to_dynamics({0.5, 20e-9, 100e-9}, gamma), DomainError);
  CHECK_THROWS_AS(kinetics::autocorr_to_dynamics({0.5, 90e-9, 80e-9}, gamma), DomainError);
}

TEST_CASE("interval sampler: normalization, rate, and antibunching hole") {
  AutocorrParams target{0.4, 6e-9, 80e-9};
  const double gamma = 1.0 / 12e-9;
  const auto dyn = kinetics::autocorr_to_dynamics(target, gamma);
  const auto ca = kinetics::analyze(dyn);

  const double eff = 1020.0 / ca.emission_rate;
  kinetics::IntervalSampler sampler(dyn, eff);

  // detected rate equals efficiency x emission rate
  CHECK(sampler.detected_rate() == doctest::Approx(1020.0).epsilon(1e-6));
  CHECK(sampler.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sampler.density(0.0) == doctest::Approx(0.0).epsilon(1e-20));

  Rng rng(7, 1);
  const int n = 400000;
  double sum = 0.0;
  int below5 = 0, below50 = 0;
  for (int i = 0; i < n; ++i) {
    const double t = sampler.next(rng);
    sum += t;
    if (t < 5e-9) ++below5;
    if (t < 50e-9) ++below50;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - sampler.mean_interval()) < 4.0 * sampler.mean_interval() / std::sqrt(n));
  // left tail (the antibunching hole) against the analytic CDF
  const double p5 = sampler.cdf(5e-9);
  const double p50 = sampler.cdf(50e-9);
  CHECK(std::abs(below5 - n * p5) < 4.0 * std::sqrt(n * p5) + 4.0);
  CHECK(std::abs(below50 - n * p50) < 4.0 * std::sqrt(n * p50) + 4.0);
}

TEST_CASE("interval sampler at efficiency 1 matches the structural chain") {
  EmissionDynamics dyn;
  dyn.pump_rate = 8e7;
  dyn.gamma = 1.0 / 12e-9;
  dyn.shelf_prob = 0.2;
  dyn.shelf_lifetime = 120e-9;

  kinetics::IntervalSampler sampler(dyn, 1.0);

  // structural sampling: Exp(p) + Exp(gamma) (+ Exp(d) w.p. shelf_prob)
  Rng rng_a(3, 1), rng_b(4, 2);
  const int n = 300000;
  double mean_ph = 0.0, mean_st = 0.0, m2_ph = 0.0, m2_st = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = sampler.next(rng_a);
    mean_ph += t;
    m2_ph += t * t;
    double g = rng_b.exponential(dyn.pump_rate) + rng_b.exponential(dyn.gamma);
    if (rng_b.bernoulli(dyn.shelf_prob)) g += rng_b.exponential(1.0 / dyn.shelf_lifetime);
    mean_st += g;
    m2_st += g * g;
  }
  mean_ph /= n;
  mean_st /= n;
  const double se = std::sqrt((m2_ph / n - mean_ph * mean_ph) / n) +
                    std::sqrt((m2_st / n - mean_st * mean_st) / n);
  CHECK(std::abs(mean_ph - mean_st) < 4.0 * se);
  CHECK(1.0 / sampler.mean_interval() ==
        doctest::Approx(kinetics::analyze(dyn).emission_rate).epsilon(1e-6));
}
