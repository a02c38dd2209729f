#include <benchmark/benchmark.h>

#include "homsim/correlator.hpp"
#include "homsim/rng.hpp"

using namespace homsim;

namespace {

std::vector<Click> make_clicks(double rate_per_det, double seconds, std::uint64_t seed) {
  Rng rc(seed, 1), rd(seed, 2);
  std::vector<Click> out;
  double tc = rc.exponential(rate_per_det), td = rd.exponential(rate_per_det);
  while (tc < seconds || td < seconds) {
    if (tc <= td) {
      out.push_back({static_cast<TimePs>(tc * 1e12), Detector::C, Provenance::Dark});
      tc += rc.exponential(rate_per_det);
    } else {
      out.push_back({static_cast<TimePs>(td * 1e12), Detector::D, Provenance::Dark});
      td += rd.exponential(rate_per_det);
    }
  }
  return out;
}

}  // namespace

static void correlate_clicks(benchmark::State& state) {
  const auto clicks = make_clicks(1100.0, static_cast<double>(state.range(0)), 3);
  tcspc::CorrelatorConfig cfg;
  std::int64_t processed = 0;
  for (auto _ : state) {
    tcspc::StreamingCorrelator corr(cfg);
    corr.push_merged(clicks);
    benchmark::DoNotOptimize(corr.clicks_c());
    processed += static_cast<std::int64_t>(clicks.size());
  }
  state.counters["clicks/s"] =
      benchmark::Counter(static_cast<double>(processed), benchmark::Counter::kIsRate);
}
BENCHMARK(correlate_clicks)->Arg(100)->Unit(benchmark::kMillisecond);

static void rebin_histogram(benchmark::State& state) {
  const auto clicks = make_clicks(20000.0, 50.0, 4);
  tcspc::StreamingCorrelator corr{tcspc::CorrelatorConfig{}};
  corr.push_merged(clicks);
  const auto hist = tcspc::normalize(corr.finish(50.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tcspc::rebin(hist, 16));
  }
}
BENCHMARK(rebin_histogram);
