#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "homsim/stark.hpp"

using namespace homsim;
using stark::Line;
using stark::LinePair;
using stark::StarkResponse;

namespace {

// synthetic response whose Ex slope for negative voltages is
// (270-25)/2.9 = 84.48 MHz/V: moves a 270 MHz detuning to 25 MHz at -2.9 V
StarkResponse example_response() {
  StarkResponse r;
  r.field_per_volt_par = 0.01e6;   // (V/m)/V, 0.5 MV/m at +50 V
  r.field_per_volt_perp = 0.004e6;
  r.d_perp = 1200.0;               // Hz/(V/m)
  r.d_parallel = 8928.2758620689656;
  r.v_min = -30.0;
  r.v_max = 50.0;
  return r;
}

}  // namespace

TEST_CASE("transition_freqs basics") {
  auto r = example_response();
  LinePair base{270e6, -2e9};

  SUBCASE("V = 0 leaves the base frequencies") {
    auto lp = stark::transition_freqs(r, base, 0.0);
    CHECK(lp.f_ex == base.f_ex);
    CHECK(lp.f_ey == base.f_ey);
  }
  SUBCASE("pure common mode when d_perp = 0") {
    auto r2 = r;
    r2.d_perp = 0.0;
    for (double v : {-20.0, -5.0, 3.0, 40.0}) {
      auto lp = stark::transition_freqs(r2, base, v);
      CHECK(lp.f_ex - lp.f_ey == doctest::Approx(base.f_ex - base.f_ey).epsilon(1e-12));
    }
  }
  SUBCASE("anchor arithmetic: 270 MHz -> 25 MHz at -2.9 V") {
    auto lp = stark::transition_freqs(r, base, -2.9);
    CHECK(lp.f_ex == doctest::Approx(25e6).epsilon(1e-6));
  }
  SUBCASE("out-of-range voltage") {
    CHECK_THROWS_AS(stark::transition_freqs(r, base, 51.0), DomainError);
    CHECK_THROWS_AS(stark::transition_freqs(r, base, -31.0), DomainError);
  }
}

TEST_CASE("response is affine in V on each sign and splitting only via d_perp") {
  auto r = example_response();
  LinePair base{100e6, -1e9};
  // affine on V > 0: three-point check
  auto f = [&](double v) { return stark::transition_freqs(r, base, v).f_ex; };
  const double f1 = f(10.0), f2 = f(20.0), f3 = f(30.0);
  CHECK(f3 - f2 == doctest::Approx(f2 - f1).epsilon(1e-12));
  const double g1 = f(-10.0), g2 = f(-20.0), g3 = f(-30.0);
  CHECK(g3 - g2 == doctest::Approx(g2 - g1).epsilon(1e-12));

  // Ex - Ey splitting independent of d_parallel
  auto r2 = r;
  r2.d_parallel *= 3.7;
  for (double v : {-25.0, -1.0, 0.5, 33.0}) {
    auto a = stark::transition_freqs(r, base, v);
    auto b = stark::transition_freqs(r2, base, v);
    CHECK(a.f_ex - a.f_ey == doctest::Approx(b.f_ex - b.f_ey).epsilon(1e-12));
  }
}

TEST_CASE("tune_to_resonance") {
  auto r = example_response();

  SUBCASE("already resonant") {
    auto res = stark::tune_to_resonance(r, {0.0, -2e9}, 0.0, Line::kEx);
    CHECK(res.v_opt == 0.0);
    CHECK(res.residual_detuning == 0.0);
  }
  SUBCASE("published scenario: optimum near -2.9 V with small residual") {
    auto res = stark::tune_to_resonance(r, {270e6, -2e9}, 0.0, Line::kEx);
    CHECK(std::abs(res.v_opt - (-2.9)) < 0.3);
    CHECK(res.residual_detuning <= 25e6);
    CHECK(!res.clipped);
  }
  SUBCASE("optimum outside the range clips to the boundary") {
    auto r2 = r;
    r2.v_min = -1.0;
    auto res = stark::tune_to_resonance(r2, {270e6, -2e9}, 0.0, Line::kEx);
    CHECK(res.v_opt == -1.0);
    CHECK(res.residual_detuning > 0.0);
    CHECK(res.clipped);
  }
  SUBCASE("local and grid optimality") {
    auto res = stark::tune_to_resonance(r, {270e6, -2e9}, 0.0, Line::kEx);
    auto resid = [&](double v) {
      return std::abs(stark::transition_freqs(r, {270e6, -2e9}, v).f_ex - 0.0);
    };
    CHECK(res.residual_detuning <= resid(res.v_opt - 1e-3) + 1e-9);
    CHECK(res.residual_detuning <= resid(res.v_opt + 1e-3) + 1e-9);
    for (double v = r.v_min; v <= r.v_max; v += 0.8) {
      CHECK(res.residual_detuning <= resid(v) + 1e-9);
    }
  }
}

TEST_CASE("tuning scan: single crossing and presentation offsets") {
  auto r = example_response();
  stark::TuningScanConfig cfg;
  cfg.response = r;
  cfg.tunable_base = {270e6, -2e9};
  cfg.fixed_line = 0.0;
  cfg.tunable_fwhm = 85e6;
  cfg.fixed_fwhm = 217e6;
  cfg.peak_rate = 20e3;
  cfg.background_rate = 500.0;
  cfg.dwell = 1e-3;
  for (int i = 0; i < 201; ++i) cfg.grid.push_back(-1000e6 + 10e6 * i);

  std::vector<double> voltages;
  for (double v = -30.0; v <= 50.0; v += 5.0) voltages.push_back(v);
  auto scan = stark::simulate_tuning_scan(cfg, voltages, 9);
  REQUIRE(scan.size() == voltages.size());

  // the tunable line crosses the fixed line exactly once on a monotone
  // (fixed-sign) segment of the response
  int crossings = 0;
  for (std::size_t i = 1; i < voltages.size(); ++i) {
    const double d0 =
        stark::transition_freqs(r, cfg.tunable_base, voltages[i - 1]).f_ex - cfg.fixed_line;
    const double d1 =
        stark::transition_freqs(r, cfg.tunable_base, voltages[i]).f_ex - cfg.fixed_line;
    if (d0 * d1 < 0.0) ++crossings;
  }
  CHECK(crossings == 1);

  // offsets are metadata only: spectra are unshifted counts
  CHECK(scan[0].display_offset_rate == 0.0);
  CHECK(scan[3].display_offset_rate == doctest::Approx(60e3));
  double m0 = 0.0, m3 = 0.0;
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    m0 += static_cast<double>(scan[0].spectrum.counts[i]);
    m3 += static_cast<double>(scan[3].spectrum.counts[i]);
  }
  CHECK(m3 < 3.0 * m0);  // same scale, no 20 kCts/s baked into the data

  // crossing voltage from the scan agrees with the optimizer within spacing
  auto res = stark::tune_to_resonance(r, cfg.tunable_base, cfg.fixed_line, Line::kEx);
  double best_v = voltages[0];
  double best = 1e18;
  for (double v : voltages) {
    const double d = std::abs(stark::transition_freqs(r, cfg.tunable_base, v).f_ex - cfg.fixed_line);
    if (d < best) {
      best = d;
      best_v = v;
    }
  }
  CHECK(std::abs(best_v - res.v_opt) <= 5.0);
}
