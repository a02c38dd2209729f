#include "homsim/budget.hpp"

#include <cmath>
#include <limits>

namespace homsim::budget {

double background_contribution(double signal_total, double noise_total) {
  require(signal_total > 0.0, "signal rate must be > 0");
  require(noise_total >= 0.0 && noise_total <= signal_total,
          "noise rate must be in [0, signal rate]");
  const double b = noise_total / signal_total;
  return 2.0 * b - b * b;
}

double spectral_impurity_contribution(double purity, ImpurityMode mode) {
  require(purity > 0.0 && purity <= 1.0, "purity must be in (0,1]");
  if (mode == ImpurityMode::kModel) {
    return 1.0 - purity * purity;
  }
  // Tabulated reference values; intermediate purities have no published
  // anchor and are refused rather than interpolated.
  if (std::abs(purity - 1.0) < 1e-9) return 0.0;
  if (std::abs(purity - 0.94) < 1e-9) return 0.13;
  throw DomainError("no tabulated impurity contribution for purity " + std::to_string(purity) +
                    "; use ImpurityMode::kModel");
}

double compose(const NoiseBudget& budget) {
  budget.validate();
  double total = budget.baseline;
  for (const auto& c : budget.contributions) total += c.delta_g2;
  return total;
}

bool exceeds_distinguishable_bound(const NoiseBudget& budget) {
  return compose(budget) > 0.5;
}

ValueWithSigma visibility(const ValueWithSigma& g2_perp, const ValueWithSigma& g2_par) {
  require(g2_perp.value > 0.0, "g2_perp must be > 0");
  require(g2_perp.sigma >= 0.0 && g2_par.sigma >= 0.0, "sigmas must be >= 0");
  ValueWithSigma out;
  out.value = 1.0 - g2_par.value / g2_perp.value;
  const double d_par = g2_par.sigma / g2_perp.value;
  const double d_perp = g2_par.value * g2_perp.sigma / (g2_perp.value * g2_perp.value);
  out.sigma = std::sqrt(d_par * d_par + d_perp * d_perp);
  return out;
}

EntanglementTime entanglement_time(const RateConfig& cfg) {
  require(cfg.rep_rate >= 0.0, "rate.rep_rate must be >= 0");
  require(cfg.collection_efficiency >= 0.0 && cfg.collection_efficiency <= 1.0,
          "rate.collection_efficiency must be in [0,1]");
  require(cfg.linewidth > 0.0, "rate.linewidth must be > 0");
  require(cfg.natural_linewidth > 0.0, "rate.natural_linewidth must be > 0");
  require(cfg.success_prefactor >= 0.0, "rate.success_prefactor must be >= 0");
  const double overlap =
      cfg.overlap_factor_enabled ? std::min(1.0, cfg.natural_linewidth / cfg.linewidth) : 1.0;
  const double rate = cfg.rep_rate * cfg.success_prefactor * cfg.collection_efficiency *
                      cfg.collection_efficiency * overlap;
  EntanglementTime out;
  // a vanishing attempt rate is reported as an infinite time, not an error
  if (rate <= 0.0) {
    out.finite = false;
    out.seconds = std::numeric_limits<double>::infinity();
  } else {
    out.seconds = 1.0 / rate;
  }
  return out;
}

}  // namespace homsim::budget
