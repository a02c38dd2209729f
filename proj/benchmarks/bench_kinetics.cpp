#include <benchmark/benchmark.h>

#include "homsim/kinetics.hpp"
#include "homsim/mc.hpp"

using namespace homsim;

namespace {

EmissionDynamics bench_dynamics() {
  return kinetics::autocorr_to_dynamics({1.0, 8.4706e-9, 80e-9}, 1.0 / 12e-9);
}

}  // namespace

static void interval_sampler_draw(benchmark::State& state) {
  const auto dyn = bench_dynamics();
  const double eff = 1020.0 / kinetics::analyze(dyn).emission_rate;
  kinetics::IntervalSampler sampler(dyn, eff);
  Rng rng(1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.next(rng));
  }
}
BENCHMARK(interval_sampler_draw);

static void hom_generation(benchmark::State& state) {
  const auto dyn = bench_dynamics();
  const double eff = 1020.0 / kinetics::analyze(dyn).emission_rate;
  mc::HomConfig cfg;
  cfg.pair.emitter1.f_ex = 93e6;
  cfg.pair.emitter1.f_ey = 93e6 - 3e9;
  cfg.pair.emitter2.f_ey = -3e9;
  cfg.pair.emitter1.sd_fwhm = 88e6;
  cfg.pair.emitter2.sd_fwhm = 106e6;
  cfg.pair.emitter1.autocorr = cfg.pair.emitter2.autocorr = {1.0, 8.4706e-9, 80e-9};
  cfg.pair.delta_f0 = 93e6;
  cfg.pair.xi = 0.59261;
  cfg.dynamics1 = cfg.dynamics2 = dyn;
  cfg.detector_c.efficiency = cfg.detector_d.efficiency = eff;
  cfg.detector_c.dark_rate = cfg.detector_d.dark_rate = 40.0;
  cfg.detector_c.background_rate = cfg.detector_d.background_rate = 40.0;

  const double seconds = static_cast<double>(state.range(0));
  std::uint64_t seed = 1;
  std::int64_t clicks = 0;
  for (auto _ : state) {
    auto stats = mc::run_hom(cfg, seconds, seed++, {});
    clicks += stats.clicks_c + stats.clicks_d;
  }
  state.counters["clicks/s"] =
      benchmark::Counter(static_cast<double>(clicks), benchmark::Counter::kIsRate);
}
BENCHMARK(hom_generation)->Arg(200)->Unit(benchmark::kMillisecond);
