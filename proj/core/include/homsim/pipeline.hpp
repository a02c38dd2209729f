#pragma once

#include <optional>
#include <string>

#include "homsim/config.hpp"
#include "homsim/fit.hpp"

// Scenario orchestration: each runner executes one experiment pipeline
// (simulate -> correlate -> normalize -> fit -> extract) and returns the
// derived quantities; run() additionally writes CSV data, JSON results and
// an SVG plot into the output directory and produces a one-line summary.
//
// The correlation analysis is frozen as: rate-product normalization, fit on
// a histogram rebinned by fit_rebin (so Poisson weights are in their
// Gaussian regime), noise dilution supplied to the fit from the configured
// dark/background rates and the measured totals, dip width read off the
// fitted curve at half depth against the 30-60 ns local baseline.
// Perpendicular runs are fit with xi pinned to 0 (the distinguishable
// reference); a free-xi fit is reported alongside as a consistency check.

namespace homsim::pipeline {

struct RunOptions {
  std::optional<double> duration_override;       // s
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> output_dir_override;
  bool dump_clicks = false;  // also write the raw click stream (hom/autocorr)
  bool write_files = true;
};

struct HomScenarioResult {
  tcspc::CorrelationHistogram histogram;  // normalized, full resolution
  tcspc::CorrelationHistogram rebinned;
  fitting::FitResult fit;             // reporting fit (xi pinned for perpendicular)
  std::optional<fitting::FitResult> fit_free_xi;  // consistency fit, perpendicular runs
  fitting::G2Fixed fixed;
  mc::HomRunStats stats;
  double g2_zero = 0.0;
  double g2_zero_sigma = 0.0;
  double dip_fwhm = 0.0;  // s
  double dilution = 0.0;
};

struct AutocorrScenarioResult {
  tcspc::CorrelationHistogram histogram;
  tcspc::CorrelationHistogram rebinned;
  fitting::FitResult fit;
  mc::HomRunStats stats;
  double dilution = 0.0;
  double dip_fwhm = 0.0;  // s, of the fitted curve
};

struct PleScenarioResult {
  mc::Spectrum spectrum;
  fitting::FitResult fit;
};

struct TuningScanResult {
  std::vector<stark::TuningScanPoint> scan;
  stark::TuneResult tune;
  int crossings = 0;  // sign changes of the line detuning across the voltage grid
};

HomScenarioResult run_hom_scenario(const config::RunConfig& cfg, double duration,
                                   std::uint64_t seed, std::vector<Click>* collect = nullptr);
AutocorrScenarioResult run_autocorr_scenario(const config::RunConfig& cfg, double duration,
                                             std::uint64_t seed,
                                             std::vector<Click>* collect = nullptr);
PleScenarioResult run_ple_scenario(const config::RunConfig& cfg, std::uint64_t seed);
TuningScanResult run_tuning_scenario(const config::RunConfig& cfg, std::uint64_t seed);

struct RunOutcome {
  std::string summary;  // one line, e.g. "g2_par(0)=0.35+-0.02 dip_fwhm=5.6 ns"
  std::string results_json;
};

RunOutcome run(const config::RunConfig& cfg, const RunOptions& opts = {});

}  // namespace homsim::pipeline
