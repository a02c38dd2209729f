#include "homsim/presets.hpp"

namespace homsim::presets {

namespace {

using config::RunConfig;
using config::Scenario;

// Shared two-emitter interference setup (Fig. 2(d) spectra + noise budget):
// detuning 93 MHz, linewidths 88/106 MHz, lifetime 12 ns, 94% purity,
// 1020 signal + 80 noise counts/s per detector. The autocorrelation shape
// (a = 1.0, tau1 = 8.4706 ns, tau2 = 80 ns) and xi = 0.59261 are calibrated
// so the noise-diluted model hits the published dip widths and floors:
// parallel 5.6 ns / 0.345, perpendicular 9.2 ns / 0.573.
RunConfig hom_base() {
  RunConfig c;
  c.scenario = Scenario::kHom;
  c.duration = 1.0e6;
  c.emitters.resize(2);
  auto& e1 = c.emitters[0];
  e1.f_ex = 93e6;
  e1.f_ey = 93e6 - 3e9;
  e1.gamma = 1.0 / 12e-9;
  e1.sd_fwhm = 88e6;
  e1.spin_purity = 0.94;
  e1.autocorr = {1.0, 8.4706e-9, 80e-9};
  auto& e2 = c.emitters[1];
  e2 = e1;
  e2.f_ex = 0.0;
  e2.f_ey = -3e9;
  e2.sd_fwhm = 106e6;
  c.dynamics.from_autocorr = true;
  c.dynamics.target_rate_cps = 1020.0;
  c.detector_c.dark_rate = 40.0;
  c.detector_c.background_rate = 40.0;
  c.detector_c.jitter_sigma = 50e-12;
  c.detector_c.dead_time = 50e-9;
  c.detector_d = c.detector_c;
  c.xi = 0.59261;
  c.delta_f0 = 93e6;
  c.correlator.bin_width = 64e-12;
  c.correlator.window = 500e-9;
  c.fit_rebin = 16;
  return c;
}

RunConfig autocorr_base(double a, double tau1, double tau2, double linewidth,
                        std::uint64_t seed) {
  RunConfig c;
  c.scenario = Scenario::kAutocorr;
  c.seed = seed;
  c.duration = 2.0e4;
  c.emitters.resize(1);
  auto& e = c.emitters[0];
  e.f_ex = 0.0;
  e.f_ey = -3e9;
  e.gamma = 1.0 / 12e-9;
  e.sd_fwhm = linewidth;
  e.autocorr = {a, tau1, tau2};
  c.dynamics.from_autocorr = true;
  c.dynamics.target_rate_cps = 10000.0;
  c.detector_c.dark_rate = 50.0;
  c.detector_c.background_rate = 50.0;
  c.detector_d = c.detector_c;
  c.correlator.window = 400e-9;
  c.fit_rebin = 16;
  return c;
}

RunConfig fig2() {
  RunConfig c;
  c.scenario = Scenario::kTuningScan;
  c.seed = 7;
  auto& t = c.tuning;
  // Linear response calibrated to the published anchors: 270 MHz detuning at
  // 0 V, resonance at -2.9 V (slope 270/2.9 = 93.10 MHz/V on the Ex line for
  // negative voltages; the published 25 MHz was the achieved floor, which a
  // linear response has no term for), 0.5 MV/m at +50 V.
  t.response.field_per_volt_par = 0.01e6;
  t.response.field_per_volt_perp = 0.004e6;
  t.response.d_perp = 1200.0;  // Hz/(V/m) == MHz/(MV/m)
  t.response.d_parallel = 9790.3448275862073;
  t.response.v_min = -30.0;
  t.response.v_max = 50.0;
  t.tunable_base = {270e6, 270e6 - 3e9};
  t.fixed_line = 0.0;
  t.tunable_fwhm = 85e6;
  t.fixed_fwhm = 217e6;
  t.v_start = -30.0;
  t.v_stop = 50.0;
  t.v_step = 5.0;
  t.display_offset_step = 20e3;
  c.ple.center = 0.0;
  c.ple.span = 2000e6;
  c.ple.points = 401;
  c.ple.dwell = 1e-3;
  c.ple.peak_rate = 20e3;
  c.ple.background_rate = 500.0;
  c.ple.init_pulse = 5e-6;
  return c;
}

RunConfig budget_preset() {
  RunConfig c;
  c.scenario = Scenario::kBudget;
  auto& b = c.budget_settings;
  b.budget.baseline = 0.0;
  b.budget.contributions = {
      {"background-and-dark-counts", 0.14},
      {"spectral-impurity", 0.13},
      {"fiber-polarization-rotation", 0.07},
  };
  b.signal_total = 1100.0;
  b.noise_total = 80.0;
  b.purity = 0.94;
  return c;
}

RunConfig rate_preset() {
  RunConfig c;
  c.scenario = Scenario::kRate;
  c.rate.collection_efficiency = 4e-5;
  c.rate.rep_rate = 1e8;
  c.rate.linewidth = 50e6;
  c.rate.natural_linewidth = 13.26e6;
  c.rate.success_prefactor = 0.5;
  c.rate.overlap_factor_enabled = false;
  return c;
}

}  // namespace

std::vector<PresetInfo> list() {
  return {
      {"paper-fig2",
       "gate-voltage tuning scan: two-line PLE family, 270 MHz detuning tuned to resonance near "
       "-2.9 V"},
      {"paper-fig3a", "single-emitter autocorrelation with a 7.5 ns antibunching dip"},
      {"paper-fig3b", "single-emitter autocorrelation with a 9.5 ns antibunching dip"},
      {"paper-fig3c",
       "two-emitter cross-correlation, perpendicular polarizations (distinguishable: g2(0) ~ "
       "0.54, dip 9.2 ns)"},
      {"paper-fig3d",
       "two-emitter cross-correlation, parallel polarizations (interfering: g2(0) ~ 0.35, dip "
       "5.6 ns)"},
      {"paper-budget", "g2(0) noise ledger: 0.14 background + 0.13 impurity + 0.07 fiber = 0.34"},
      {"paper-rate",
       "entanglement-pair generation time from collection efficiency, linewidth and repetition "
       "rate"},
  };
}

bool exists(const std::string& name) {
  for (const auto& p : list()) {
    if (p.name == name) return true;
  }
  return false;
}

config::RunConfig get(const std::string& name) {
  if (name == "paper-fig2") return fig2();
  if (name == "paper-fig3a") return autocorr_base(0.5, 6.7304e-9, 50e-9, 88e6, 101);
  if (name == "paper-fig3b") return autocorr_base(0.5, 8.2811e-9, 60e-9, 106e6, 102);
  if (name == "paper-fig3c") {
    auto c = hom_base();
    c.polarization = mc::Polarization::kPerpendicular;
    c.seed = 11;
    return c;
  }
  if (name == "paper-fig3d") {
    auto c = hom_base();
    c.polarization = mc::Polarization::kParallel;
    c.seed = 12;
    return c;
  }
  if (name == "paper-budget") return budget_preset();
  if (name == "paper-rate") return rate_preset();
  throw DomainError("unknown preset '" + name + "'");
}

}  // namespace homsim::presets
