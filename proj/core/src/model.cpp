#include "homsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace homsim::model {

double g1(double tau, double gamma) {
  require_finite(tau, "tau");
  require(gamma > 0.0 && std::isfinite(gamma), "gamma must be > 0");
  return std::exp(-0.5 * gamma * std::abs(tau));
}

double g2_auto(double tau, const AutocorrParams& p) {
  p.validate();
  require_finite(tau, "tau");
  const double at = std::abs(tau);
  return 1.0 - (1.0 + p.a) * std::exp(-at / p.tau1) + p.a * std::exp(-at / p.tau2);
}

double dephasing_envelope(double tau, double fwhm1, double fwhm2) {
  require_finite(tau, "tau");
  require(fwhm1 >= 0.0 && std::isfinite(fwhm1), "fwhm1 must be >= 0");
  require(fwhm2 >= 0.0 && std::isfinite(fwhm2), "fwhm2 must be >= 0");
  return std::exp(-std::numbers::pi * (fwhm1 + fwhm2) * std::abs(tau));
}

double g2_cross(double tau, const PairConfig& cfg, bool envelope_on) {
  cfg.validate();
  require_finite(tau, "tau");
  const double auto1 = g2_auto(tau, cfg.emitter1.autocorr);
  const double auto2 = g2_auto(tau, cfg.emitter2.autocorr);
  const double coherence = g1(tau, cfg.emitter1.gamma) * g1(tau, cfg.emitter2.gamma);
  double beat = std::cos(2.0 * std::numbers::pi * cfg.delta_f0 * tau);
  if (envelope_on) {
    beat *= dephasing_envelope(tau, cfg.emitter1.sd_fwhm, cfg.emitter2.sd_fwhm);
  }
  return 0.25 * auto1 + 0.25 * auto2 + 0.5 * (1.0 - cfg.xi * coherence * beat);
}

double interference_feature_width(const PairConfig& cfg, WidthConvention convention) {
  cfg.validate();
  const double gamma_bar = 0.5 * (cfg.emitter1.gamma + cfg.emitter2.gamma);
  const double dephasing_rate =
      std::numbers::pi * (cfg.emitter1.sd_fwhm + cfg.emitter2.sd_fwhm);
  const double rate = (convention == WidthConvention::kCoherenceAndDephasing)
                          ? gamma_bar + dephasing_rate
                          : dephasing_rate;
  if (rate <= 0.0) throw DomainError("interference feature width is infinite: all rates zero");
  return 2.0 / rate;
}

double dip_fwhm(std::span<const double> tau, std::span<const double> g2, double baseline_lo,
                double baseline_hi) {
  require(tau.size() == g2.size(), "tau and g2 must have equal length");
  require(tau.size() >= 5, "need at least 5 samples");
  require(baseline_hi > baseline_lo && baseline_lo >= 0.0, "invalid baseline window");

  // Local baseline over baseline_lo <= |tau| <= baseline_hi.
  double base_sum = 0.0;
  std::size_t base_n = 0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double at = std::abs(tau[i]);
    if (at >= baseline_lo && at <= baseline_hi) {
      base_sum += g2[i];
      ++base_n;
    }
  }
  require(base_n > 0, "baseline window contains no samples");
  const double baseline = base_sum / static_cast<double>(base_n);

  // Dip minimum restricted to inside the baseline window.
  std::size_t imin = 0;
  double gmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (std::abs(tau[i]) < baseline_lo && g2[i] < gmin) {
      gmin = g2[i];
      imin = i;
    }
  }
  const double depth = baseline - gmin;
  if (!(depth > 1e-12 * std::max(1.0, std::abs(baseline)))) {
    throw DomainError("no dip found: curve is flat or monotone");
  }
  const double half_level = gmin + 0.5 * depth;

  auto crossing = [&](int dir) -> double {
    std::size_t i = imin;
    for (;;) {
      const std::size_t j = (dir > 0) ? i + 1 : i - 1;
      if ((dir > 0 && j >= tau.size()) || (dir < 0 && i == 0)) {
        throw DomainError("dip half level never crossed inside the sampled range");
      }
      if ((g2[i] - half_level) * (g2[j] - half_level) <= 0.0 && g2[i] != g2[j]) {
        const double f = (half_level - g2[i]) / (g2[j] - g2[i]);
        return tau[i] + f * (tau[j] - tau[i]);
      }
      i = j;
    }
  };

  return crossing(+1) - crossing(-1);
}

}  // namespace homsim::model
