#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "homsim/correlator.hpp"
#include "homsim/rng.hpp"
#include "support/test_oracles.hpp"

using namespace homsim;
using tcspc::CorrelatorConfig;
using tcspc::Normalization;

namespace {

ClickStream poisson_streams(double rate_c, double rate_d, double duration, std::uint64_t seed) {
  ClickStream s;
  s.duration = duration;
  s.seed = seed;
  Rng rc(seed, 1), rd(seed, 2);
  double t = rc.exponential(rate_c);
  while (t < duration) {
    s.clicks.push_back({static_cast<TimePs>(t * 1e12), Detector::C, Provenance::Dark});
    t += rc.exponential(rate_c);
  }
  t = rd.exponential(rate_d);
  while (t < duration) {
    s.clicks.push_back({static_cast<TimePs>(t * 1e12), Detector::D, Provenance::Dark});
    t += rd.exponential(rate_d);
  }
  std::sort(s.clicks.begin(), s.clicks.end(),
            [](const Click& a, const Click& b) { return a.time_ps < b.time_ps; });
  return s;
}

}  // namespace

TEST_CASE("single hand-countable pair") {
  ClickStream s;
  s.duration = 1.0;
  s.clicks = {{0, Detector::C, Provenance::Signal1},
              {5000, Detector::D, Provenance::Signal2}};  // +5 ns
  CorrelatorConfig cfg;
  cfg.window = 50e-9;
  auto h = correlate(s, cfg);
  CHECK(h.total_counts() == 1);
  // the count sits in the bin containing +5 ns
  const std::size_t center = h.center_index();
  const std::size_t expect = center + 5000 / 64;  // 5 ns / 64 ps = 78.1 -> bin 78
  CHECK(h.counts[expect] == 1);
  CHECK(h.bin_centers[expect] == doctest::Approx(78 * 64e-12));
}

TEST_CASE("empty stream gives an all-zero histogram, not an error") {
  ClickStream s;
  s.duration = 1.0;
  auto h = correlate(s, CorrelatorConfig{});
  CHECK(h.total_counts() == 0);
  CHECK(h.size() == 2 * 1562 + 1);
  auto n = tcspc::normalize(h);
  for (double v : n.g2) CHECK(v == 0.0);
}

TEST_CASE("streaming correlator equals brute force on a random stream") {
  auto s = poisson_streams(4e5, 4e5, 0.01, 42);
  CorrelatorConfig cfg;
  cfg.window = 100e-9;
  auto h = correlate(s, cfg);
  auto brute = test_oracles::brute_force_pairs(s.clicks, cfg.bin_ps(), cfg.half_bins());
  REQUIRE(h.counts.size() == brute.size());
  for (std::size_t i = 0; i < brute.size(); ++i) CHECK(h.counts[i] == brute[i]);
  CHECK(h.total_counts() > 100);  // the check bites
}

TEST_CASE("uncorrelated Poisson streams normalize to a flat g2 of 1") {
  // bench-rate case: expected counts per bin r_C r_D T dt = 0.0465
  {
    const double rate = 1100.0, duration = 600.0;
    auto s = poisson_streams(rate, rate, duration, 7);
    auto h = tcspc::normalize(correlate(s, CorrelatorConfig{}));
    const double expect = rate * rate * duration * 64e-12;
    CHECK(expect == doctest::Approx(0.0465).epsilon(1e-3));
    const double total_expect = expect * static_cast<double>(h.size());
    CHECK(std::abs(static_cast<double>(h.total_counts()) - total_expect) <
          4.0 * std::sqrt(total_expect));
  }

  // dense case: flat at 1 and the two normalization modes agree within 2%
  {
    const double rate = 30000.0, duration = 400.0;
    auto s = poisson_streams(rate, rate, duration, 8);
    auto h = tcspc::normalize(correlate(s, CorrelatorConfig{}));
    auto h2 = h;
    h2.normalization = Normalization::kTailAverage;
    h2 = tcspc::normalize(std::move(h2));
    const double mean_rp = static_cast<double>(h.total_counts()) / h.norm_denom /
                           static_cast<double>(h.size());
    const double mean_ta = static_cast<double>(h2.total_counts()) / h2.norm_denom /
                           static_cast<double>(h2.size());
    CHECK(mean_rp == doctest::Approx(1.0).epsilon(0.02));
    CHECK(mean_ta == doctest::Approx(mean_rp).epsilon(0.02));
  }
}

TEST_CASE("symmetry statistic of a symmetric stream is Poisson-consistent") {
  auto s = poisson_streams(3000.0, 3000.0, 200.0, 21);
  auto h = correlate(s, CorrelatorConfig{});
  double asym = 0.0;
  double total = 0.0;
  const std::size_t c = h.center_index();
  double expect_abs = 0.0;
  for (std::size_t k = 1; k <= c; ++k) {
    const double a = static_cast<double>(h.counts[c + k]);
    const double b = static_cast<double>(h.counts[c - k]);
    asym += std::abs(a - b);
    total += a + b;
    // E|Poisson diff| for equal means m: ~ sqrt(2 * 2m / pi)
    expect_abs += std::sqrt(2.0 * (a + b) / std::numbers::pi);
  }
  CHECK(asym / total < 5.0 * expect_abs / total);
  CHECK(asym > 0.0);
}

TEST_CASE("rebinning conserves counts and rescales errors") {
  auto s = poisson_streams(20000.0, 20000.0, 300.0, 5);
  auto h = tcspc::normalize(correlate(s, CorrelatorConfig{}));

  SUBCASE("identity") {
    auto r = tcspc::rebin(h, 1);
    CHECK(r.counts == h.counts);
  }
  SUBCASE("conservation for assorted factors") {
    for (int f : {2, 3, 5, 7, 16, 33}) {
      auto r = tcspc::rebin(h, f);
      CHECK(r.total_counts() == h.total_counts());
      // tau = 0 stays centered exactly for odd factors; even factors group
      // off-center by half an original bin
      const double center = r.bin_centers[r.center_index()];
      if (f % 2 == 1) {
        CHECK(center == doctest::Approx(0.0).epsilon(1e-15));
      } else {
        CHECK(std::abs(center) <= 0.5 * h.bin_width + 1e-15);
      }
    }
  }
  SUBCASE("error scaling ~ 1/4 for x16 on flat data") {
    auto r = tcspc::rebin(h, 16);
    double mean_err = 0.0, mean_err16 = 0.0;
    std::size_t n = 0, n16 = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (std::isfinite(h.g2_err[i])) {
        mean_err += h.g2_err[i];
        ++n;
      }
    }
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {  // skip ragged edges
      if (std::isfinite(r.g2_err[i])) {
        mean_err16 += r.g2_err[i];
        ++n16;
      }
    }
    mean_err /= static_cast<double>(n);
    mean_err16 /= static_cast<double>(n16);
    CHECK(mean_err / mean_err16 == doctest::Approx(4.0).epsilon(0.15));
    // g2 mean unchanged
    double m = 0.0;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) m += r.g2[i];
    m /= static_cast<double>(r.size() - 2);
    CHECK(m == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("normalization error paths") {
  ClickStream s;
  s.duration = 0.0;  // no duration recorded
  s.clicks = {{0, Detector::C, Provenance::Dark}, {5000, Detector::D, Provenance::Dark}};
  CorrelatorConfig cfg;
  auto acc = tcspc::StreamingCorrelator(cfg);
  acc.push_merged(s.clicks);
  CHECK_THROWS_AS(acc.finish(0.0), DomainError);

  // zero-count bins keep g2 = 0 with undefined (NaN) error
  auto s2 = poisson_streams(50.0, 50.0, 10.0, 3);
  auto h = tcspc::normalize(correlate(s2, cfg));
  bool saw_zero = false;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h.counts[i] == 0) {
      saw_zero = true;
      CHECK(h.g2[i] == 0.0);
      CHECK(!std::isfinite(h.g2_err[i]));
    }
  }
  CHECK(saw_zero);
}

TEST_CASE("merging accumulators is order independent") {
  auto s1 = poisson_streams(1000.0, 1000.0, 50.0, 11);
  auto s2 = poisson_streams(1000.0, 1000.0, 50.0, 12);
  CorrelatorConfig cfg;
  tcspc::StreamingCorrelator a(cfg), b(cfg), ab(cfg);
  a.push_merged(s1.clicks);
  b.push_merged(s2.clicks);
  a += b;
  // segments correlated independently then merged == merged counts
  tcspc::StreamingCorrelator c(cfg), d(cfg);
  d.push_merged(s2.clicks);
  c.push_merged(s1.clicks);
  d += c;
  CHECK(a.finish(100.0).counts == d.finish(100.0).counts);
}
