#include <benchmark/benchmark.h>

#include "homsim/fit.hpp"
#include "homsim/rng.hpp"

using namespace homsim;

static void lorentzian_fit(benchmark::State& state) {
  std::vector<double> grid;
  for (int i = 0; i < 321; ++i) grid.push_back(-800e6 + 5e6 * i);
  mc::Spectrum s;
  s.freq = grid;
  s.dwell = 2e-3;
  Rng rng(5, 1);
  for (double f : grid) {
    const double hw = 44e6;
    const double rate = 2000.0 + 25000.0 * hw * hw / (f * f + hw * hw);
    s.counts.push_back(static_cast<std::int64_t>(rng.poisson(rate * s.dwell)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fitting::fit_lorentzian(s));
  }
}
BENCHMARK(lorentzian_fit)->Unit(benchmark::kMicrosecond);

static void g2_cross_fit(benchmark::State& state) {
  // synthetic normalized histogram at acceptance-like binning
  tcspc::CorrelationHistogram h;
  h.bin_width = 64e-12;
  h.duration = 1e5;
  h.rate_c = h.rate_d = 1100.0;
  h.normalization = tcspc::Normalization::kRateProduct;
  h.norm_denom = h.rate_c * h.rate_d * h.duration * h.bin_width;
  Rng rng(9, 1);
  const std::int64_t half = static_cast<std::int64_t>(500e-9 / 64e-12);
  for (std::int64_t k = -half; k <= half; ++k) {
    const double tau = static_cast<double>(k) * 64e-12;
    const double at = std::abs(tau);
    const double g =
        1.0 - 0.86 * (0.5 * (2.0 * std::exp(-at / 8.5e-9) - std::exp(-at / 80e-9)) +
                      0.5 * 0.52 * std::exp(-6.9e8 * at) * std::cos(2e9 * tau));
    h.bin_centers.push_back(tau);
    h.counts.push_back(static_cast<std::int64_t>(rng.poisson(std::max(g, 0.0) * h.norm_denom)));
  }
  h = tcspc::normalize(std::move(h));
  const auto coarse = tcspc::rebin(h, 16);

  fitting::G2Fixed fx;
  fx.dilution = 0.86;
  fx.gamma_bar = 1.0 / 12e-9;
  fx.env_fwhm_sum = 194e6;
  fx.delta_f0 = 93e6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fitting::fit_g2(coarse, fitting::G2Model::kCross, fx));
  }
}
BENCHMARK(g2_cross_fit)->Unit(benchmark::kMillisecond);
