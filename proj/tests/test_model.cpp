#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "homsim/model.hpp"
#include "support/test_oracles.hpp"

using namespace homsim;

namespace {

PairConfig symmetric_pair(double xi, double delta_f0, double sd1 = 0.0, double sd2 = 0.0,
                          double a = 0.0, double tau1 = 12e-9, double tau2 = 100e-9) {
  PairConfig pc;
  pc.emitter1.gamma = pc.emitter2.gamma = 1.0 / 12e-9;
  pc.emitter1.sd_fwhm = sd1;
  pc.emitter2.sd_fwhm = sd2;
  pc.emitter1.autocorr = pc.emitter2.autocorr = {a, tau1, tau2};
  pc.xi = xi;
  pc.delta_f0 = delta_f0;
  return pc;
}

}  // namespace

TEST_CASE("g1 first-order coherence") {
  const double gamma = 1.0 / 12e-9;
  CHECK(model::g1(0.0, gamma) == 1.0);
  CHECK(model::g1(24e-9, gamma) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(model::g1(-24e-9, gamma) == model::g1(24e-9, gamma));
  CHECK_THROWS_AS(model::g1(1e-9, 0.0), DomainError);
  CHECK_THROWS_AS(model::g1(std::nan(""), gamma), DomainError);
}

TEST_CASE("g2_auto three-level form") {
  AutocorrParams p{0.5, 8e-9, 200e-9};
  CHECK(model::g2_auto(0.0, p) == 0.0);  // exactly, for any valid a
  CHECK(model::g2_auto(0.0, {3.0, 5e-9, 50e-9}) == 0.0);
  // closed-form evaluation: 1 - 1.5 e^-1 + 0.5 e^-0.04
  const double expected = 1.0 - 1.5 * std::exp(-1.0) + 0.5 * std::exp(-0.04);
  CHECK(model::g2_auto(8e-9, p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.9286).epsilon(1e-3));
  CHECK(model::g2_auto(1e-4, p) == doctest::Approx(1.0).epsilon(1e-9));  // asymptote
  CHECK_THROWS_AS(model::g2_auto(1e-9, {-0.1, 8e-9, 200e-9}), DomainError);
}

TEST_CASE("dephasing envelope: characteristic function of the summed Lorentzian") {
  CHECK(model::dephasing_envelope(0.0, 88e6, 106e6) == 1.0);
  CHECK(model::dephasing_envelope(5e-9, 0.0, 0.0) == 1.0);  // no diffusion, no dephasing
  // 1/e point at tau = 1/(pi (88+106) MHz) = 1.6408 ns; the 1/e full width
  // of the interference feature is twice that.
  const double tau_e = 1.0 / (std::numbers::pi * 194e6);
  CHECK(model::dephasing_envelope(tau_e, 88e6, 106e6) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(model::dephasing_envelope(2.0 * tau_e, 88e6, 106e6) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(model::dephasing_envelope(1e-9, -1.0, 0.0), DomainError);
}

TEST_CASE("dephasing envelope equals the Monte Carlo cosine average") {
  // E[cos(2 pi (nu1 - nu2) tau)] over >= 1e6 sampled Lorentzian pairs,
  // within 3 standard errors across a grid spanning [0, 10 ns].
  for (double tau : {0.5e-9, 1e-9, 2e-9, 3.5e-9, 5e-9, 7e-9, 10e-9}) {
    const auto est = test_oracles::mc_dephasing(tau, 88e6, 106e6, 1'000'000, 99);
    const double analytic = model::dephasing_envelope(tau, 88e6, 106e6);
    CHECK(std::abs(est.mean - analytic) < 3.0 * est.std_error);
  }
}

TEST_CASE("g2_cross closed form and limits") {
  SUBCASE("perfect coalescence at tau = 0") {
    auto pc = symmetric_pair(1.0, 50e6);
    CHECK(model::g2_cross(0.0, pc) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("distinguishable floor 0.5") {
    auto pc = symmetric_pair(0.0, 0.0);
    CHECK(model::g2_cross(0.0, pc) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("direct evaluation with detuning beat, envelope off") {
    auto pc = symmetric_pair(1.0, 93e6);
    // independent arithmetic for the same inputs
    const double auto_term = 0.5 * (1.0 - std::exp(-3e-9 / 12e-9));
    const double coherence = std::exp(-0.25);  // e^{-gamma tau} with gamma = 1/12 ns
    const double beat = std::cos(2.0 * std::numbers::pi * 93e6 * 3e-9);
    const double expected = auto_term + 0.5 * (1.0 - coherence * beat);
    CHECK(model::g2_cross(3e-9, pc, false) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.681).epsilon(2e-3));
  }
  SUBCASE("asymptote") {
    auto pc = symmetric_pair(0.7, 93e6, 88e6, 106e6, 0.5, 8e-9, 80e-9);
    const double tau_far = 50.0 * std::max({8e-9, 80e-9, 12e-9});
    CHECK(std::abs(model::g2_cross(tau_far, pc) - 1.0) < 1e-3);
  }
}

TEST_CASE("g2_cross is even and monotone in xi at tau = 0") {
  auto pc = symmetric_pair(0.6, 93e6, 88e6, 106e6, 0.4, 8e-9, 60e-9);
  for (double tau = 0.0; tau <= 60e-9; tau += 1.3e-9) {
    CHECK(model::g2_cross(tau, pc) == doctest::Approx(model::g2_cross(-tau, pc)).epsilon(1e-14));
    CHECK(model::g2_auto(tau, pc.emitter1.autocorr) ==
          doctest::Approx(model::g2_auto(-tau, pc.emitter1.autocorr)).epsilon(1e-14));
  }
  double prev = 1.0;
  for (double xi : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    auto p = symmetric_pair(xi, 0.0);
    const double v = model::g2_cross(0.0, p);
    CHECK(v == doctest::Approx(0.5 * (1.0 - xi)).epsilon(1e-12));
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("distinguishable decomposition is exact at xi = 0") {
  PairConfig pc = symmetric_pair(0.0, 93e6, 88e6, 106e6, 0.7, 6e-9, 90e-9);
  pc.emitter2.autocorr = {0.3, 9e-9, 50e-9};
  for (double tau = -40e-9; tau <= 40e-9; tau += 0.7e-9) {
    const double direct = model::g2_cross(tau, pc);
    const double expected = 0.25 * model::g2_auto(tau, pc.emitter1.autocorr) +
                            0.25 * model::g2_auto(tau, pc.emitter2.autocorr) + 0.5;
    CHECK(direct == expected);  // machine precision: same arithmetic path collapses
  }
}

TEST_CASE("interference feature width conventions") {
  auto pc = symmetric_pair(1.0, 93e6, 0.0, 0.0);
  CHECK(model::interference_feature_width(pc) == doctest::Approx(24e-9).epsilon(1e-12));

  auto pc2 = symmetric_pair(1.0, 93e6, 88e6, 106e6);
  const double dephasing_only =
      model::interference_feature_width(pc2, model::WidthConvention::kDephasingOnly);
  CHECK(dephasing_only == doctest::Approx(2.0 / (std::numbers::pi * 194e6)).epsilon(1e-12));
  CHECK(dephasing_only == doctest::Approx(3.28e-9).epsilon(1e-3));

  const double both = model::interference_feature_width(pc2);
  CHECK(both == doctest::Approx(2.0 / (1.0 / 12e-9 + std::numbers::pi * 194e6)).epsilon(1e-12));
  CHECK(both == doctest::Approx(2.89e-9).epsilon(1e-3));
}

TEST_CASE("dip_fwhm of a two-level curve and error cases") {
  std::vector<double> tau, g;
  for (double t = -60e-9; t <= 60e-9; t += 0.05e-9) {
    tau.push_back(t);
    g.push_back(1.0 - std::exp(-std::abs(t) / 5e-9));
  }
  const double w = model::dip_fwhm(tau, g, 30e-9, 55e-9);
  CHECK(w == doctest::Approx(2.0 * 5e-9 * std::numbers::ln2).epsilon(1e-4));

  std::vector<double> flat(tau.size(), 1.0);
  CHECK_THROWS_AS(model::dip_fwhm(tau, flat, 30e-9, 55e-9), DomainError);
}
