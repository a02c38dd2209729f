#pragma once

#include <string>
#include <vector>

#include "homsim/config.hpp"

// Built-in parameter sets reproducing the published reference experiment:
// the tuning scan, the single-emitter autocorrelations, both two-emitter
// interference configurations, the g2(0) noise ledger and the entanglement
// rate estimate. Emitter and noise parameters are the published values
// (linewidths 88/106 MHz, detuning 93 MHz, lifetime 12 ns, 1100 counts/s per
// detector of which 80 are background, 94% spectral purity); the
// autocorrelation shapes and the interference amplitude are calibrated so
// the analytic model reproduces the published dip widths and floors.

namespace homsim::presets {

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> list();
bool exists(const std::string& name);
config::RunConfig get(const std::string& name);

}  // namespace homsim::presets
