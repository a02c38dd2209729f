#include "homsim/stark.hpp"

#include <algorithm>
#include <cmath>

namespace homsim::stark {

LinePair transition_freqs(const StarkResponse& resp, const LinePair& base, double v) {
  resp.validate();
  require_finite(v, "voltage");
  if (v < resp.v_min || v > resp.v_max) {
    throw DomainError("voltage " + std::to_string(v) + " outside allowed range [" +
                      std::to_string(resp.v_min) + ", " + std::to_string(resp.v_max) + "] V");
  }
  const double e_par = resp.field_per_volt_par * v;
  const double e_perp = resp.field_per_volt_perp * v;
  LinePair out;
  out.f_ex = base.f_ex + resp.d_parallel * e_par + resp.d_perp * std::abs(e_perp);
  out.f_ey = base.f_ey + resp.d_parallel * e_par - resp.d_perp * std::abs(e_perp);
  return out;
}

TuneResult tune_to_resonance(const StarkResponse& resp, const LinePair& tunable_base,
                             double f_target, Line target_line) {
  resp.validate();
  require_finite(f_target, "target frequency");

  auto line_freq = [&](double v) {
    const LinePair lp = transition_freqs(resp, tunable_base, v);
    return target_line == Line::kEx ? lp.f_ex : lp.f_ey;
  };

  // f(v) is linear on v <= 0 and v >= 0 separately (|E_perp| kink at 0).
  // Solve each segment in closed form and keep the best in-range candidate.
  const double sign = (target_line == Line::kEx) ? 1.0 : -1.0;
  const double base = (target_line == Line::kEx) ? tunable_base.f_ex : tunable_base.f_ey;
  const double slope_par = resp.d_parallel * resp.field_per_volt_par;
  const double slope_perp = sign * resp.d_perp * std::abs(resp.field_per_volt_perp);

  std::vector<double> candidates{resp.v_min, resp.v_max};
  if (resp.v_min < 0.0 && resp.v_max > 0.0) candidates.push_back(0.0);
  struct Segment {
    double lo, hi, slope;
  };
  const std::vector<Segment> segments{
      {resp.v_min, std::min(0.0, resp.v_max), slope_par - slope_perp},
      {std::max(0.0, resp.v_min), resp.v_max, slope_par + slope_perp},
  };
  for (const auto& s : segments) {
    if (s.hi <= s.lo || s.slope == 0.0) continue;
    const double v = (f_target - base) / s.slope;
    if (v >= s.lo && v <= s.hi) candidates.push_back(v);
  }

  TuneResult best;
  bool first = true;
  for (double v : candidates) {
    v = std::clamp(v, resp.v_min, resp.v_max);
    const double r = std::abs(line_freq(v) - f_target);
    if (first || r < best.residual_detuning ||
        (r == best.residual_detuning && std::abs(v) < std::abs(best.v_opt))) {
      best.v_opt = v;
      best.residual_detuning = r;
      first = false;
    }
  }
  best.clipped = best.residual_detuning > 1e-3 &&
                 (best.v_opt == resp.v_min || best.v_opt == resp.v_max);
  return best;
}

std::vector<TuningScanPoint> simulate_tuning_scan(const TuningScanConfig& cfg,
                                                  std::span<const double> voltages,
                                                  std::uint64_t seed) {
  cfg.response.validate();
  require(!voltages.empty(), "tuning scan needs at least one voltage");
  require(!cfg.grid.empty(), "tuning scan needs a frequency grid");

  std::vector<TuningScanPoint> out;
  out.reserve(voltages.size());
  for (std::size_t i = 0; i < voltages.size(); ++i) {
    const LinePair shifted = transition_freqs(cfg.response, cfg.tunable_base, voltages[i]);
    const mc::PlePeak peaks[2] = {
        {shifted.f_ex, cfg.tunable_fwhm, cfg.peak_rate},
        {cfg.fixed_line, cfg.fixed_fwhm, cfg.peak_rate},
    };
    TuningScanPoint pt;
    pt.voltage = voltages[i];
    pt.spectrum = mc::simulate_ple_multi(peaks, cfg.grid, cfg.init_pulse, cfg.dwell,
                                         cfg.background_rate, hash_key(seed, 0x5ca2, i));
    pt.display_offset_rate = cfg.display_offset_step * static_cast<double>(i);
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace homsim::stark
