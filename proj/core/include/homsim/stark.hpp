#pragma once

#include <span>
#include <vector>

#include "homsim/mc.hpp"
#include "homsim/types.hpp"

// DC Stark tuning: gate voltage -> electric field at the emitter -> optical
// transition shifts, plus a 1-D optimizer that minimizes the detuning between
// one tunable emitter and a fixed reference. Fields perpendicular to the
// emitter axis split |Ex> and |Ey>; parallel fields shift both together. The
// voltage-to-field response is linear, calibrated against published anchor
// points rather than electrode geometry; the perpendicular component enters
// through its magnitude (level repulsion).

namespace homsim::stark {

struct StarkResponse {
  double field_per_volt_par = 0.0;   // (V/m)/V
  double field_per_volt_perp = 0.0;  // (V/m)/V
  double d_parallel = 0.0;           // Hz/(V/m), common-mode shift
  double d_perp = 0.0;               // Hz/(V/m), Ex/Ey splitting
  double v_min = 0.0;                // V
  double v_max = 0.0;                // V

  void validate() const {
    require(v_max > v_min, "stark.v_range must be nonempty");
    require_finite(field_per_volt_par, "stark.field_per_volt_par");
    require_finite(field_per_volt_perp, "stark.field_per_volt_perp");
    require_finite(d_parallel, "stark.d_parallel");
    require_finite(d_perp, "stark.d_perp");
  }
};

struct LinePair {
  double f_ex = 0.0;  // Hz
  double f_ey = 0.0;  // Hz
};

enum class Line { kEx, kEy };

// Shifted transition frequencies at gate voltage v. Throws on v outside the
// response's voltage range.
LinePair transition_freqs(const StarkResponse& resp, const LinePair& base, double v);

struct TuneResult {
  double v_opt = 0.0;             // V, clipped to the allowed range
  double residual_detuning = 0.0; // Hz, |f_line(v_opt) - f_target|
  bool clipped = false;
};

// Voltage minimizing |f_line(v) - f_target| for the selected line of the
// tunable emitter. Exact for the piecewise-linear response; evaluates each
// linearity segment in closed form and clips to the voltage range.
TuneResult tune_to_resonance(const StarkResponse& resp, const LinePair& tunable_base,
                             double f_target, Line target_line);

struct TuningScanPoint {
  double voltage = 0.0;
  mc::Spectrum spectrum;
  double display_offset_rate = 0.0;  // counts/s, presentation stacking offset only
};

struct TuningScanConfig {
  StarkResponse response;
  LinePair tunable_base;        // shifted per voltage
  double fixed_line = 0.0;      // Hz, reference emitter line center
  double tunable_fwhm = 100e6;  // Hz
  double fixed_fwhm = 100e6;    // Hz
  double peak_rate = 20e3;      // counts/s
  double background_rate = 200.0;
  double dwell = 1e-3;          // s
  double init_pulse = 5e-6;     // s
  std::vector<double> grid;     // Hz, scan frequencies
  double display_offset_step = 20e3;  // counts/s per voltage step
};

// One two-line PLE spectrum per voltage: the tunable emitter's Ex line moves
// per the Stark response, the reference line stays fixed.
std::vector<TuningScanPoint> simulate_tuning_scan(const TuningScanConfig& cfg,
                                                  std::span<const double> voltages,
                                                  std::uint64_t seed);

}  // namespace homsim::stark
