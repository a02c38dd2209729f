#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homsim/budget.hpp"
#include "homsim/correlator.hpp"
#include "homsim/mc.hpp"
#include "homsim/stark.hpp"
#include "homsim/types.hpp"

// Run configuration: a single JSON file fully determines a run. Configs use
// bench units (ns, MHz, V, counts/s); everything is converted to SI on
// parse. Parsing is strict: unknown scenario names, missing required
// sections and out-of-range values fail with the offending field named.

namespace homsim::config {

enum class Scenario { kHom, kAutocorr, kPle, kTuningScan, kBudget, kRate };

const char* to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct PleSettings {
  double center = 0.0;          // Hz
  double span = 1.6e9;          // Hz
  int points = 321;
  double dwell = 2e-3;          // s
  double peak_rate = 25e3;      // counts/s
  double background_rate = 2e3; // counts/s
  double init_pulse = 5e-6;     // s

  std::vector<double> grid() const;
};

struct TuningScanSettings {
  stark::StarkResponse response;
  stark::LinePair tunable_base;  // Hz
  double fixed_line = 0.0;       // Hz
  double tunable_fwhm = 85e6;    // Hz
  double fixed_fwhm = 217e6;     // Hz
  double v_start = -30.0;
  double v_stop = 50.0;
  double v_step = 5.0;
  double display_offset_step = 20e3;  // counts/s
};

struct BudgetSettings {
  budget::NoiseBudget budget;
  double signal_total = 1100.0;  // counts/s per detector
  double noise_total = 80.0;     // counts/s per detector
  double purity = 0.94;
  // measured correlation floors feeding the visibility estimate
  budget::ValueWithSigma g2_perp{0.54, 0.04};
  budget::ValueWithSigma g2_par{0.35, 0.04};
};

// Emission dynamics either given explicitly or derived from the emitters'
// autocorrelation targets plus a detected count-rate target (the efficiency
// is then chosen to reach that rate).
struct DynamicsSpec {
  bool from_autocorr = true;
  double target_rate_cps = 1020.0;             // per emitter, both outputs
  std::vector<EmissionDynamics> explicit_dyn;  // used when !from_autocorr
};

struct RunConfig {
  Scenario scenario = Scenario::kHom;
  std::optional<std::uint64_t> seed;
  double duration = 0.0;  // s, for stochastic scenarios
  std::string output_dir = "out";

  std::vector<EmitterModel> emitters;
  DynamicsSpec dynamics;
  DetectorModel detector_c;
  DetectorModel detector_d;

  // hom
  double xi = 1.0;
  double delta_f0 = 0.0;  // Hz
  mc::Polarization polarization = mc::Polarization::kParallel;
  double pairing_window = 0.0;      // s, 0 = auto
  double impurity_detuning = 3e9;   // Hz

  tcspc::CorrelatorConfig correlator;
  int fit_rebin = 16;
  int autocorr_emitter = 1;  // 1-based, for the autocorr scenario

  PleSettings ple;
  TuningScanSettings tuning;
  BudgetSettings budget_settings;
  budget::RateConfig rate;

  void validate() const;

  // Resolved simulation inputs (after from_autocorr derivation).
  mc::HomConfig hom_config() const;
  std::vector<EmissionDynamics> resolved_dynamics() const;
  double resolved_efficiency() const;
};

RunConfig parse(const std::string& json_text);
RunConfig load(const std::string& path);
std::string serialize(const RunConfig& cfg);

}  // namespace homsim::config
