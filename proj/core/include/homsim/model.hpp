#pragma once

#include <span>

#include "homsim/types.hpp"

// Closed-form correlation functions for two remote single-photon emitters at
// a balanced beamsplitter: single-emitter autocorrelation, first-order
// coherence, the HOM cross-correlation, and the spectral-diffusion dephasing
// envelope. All functions are pure and even in tau.

namespace homsim::model {

// Slowly-varying first-order coherence of a radiatively broadened emitter:
// g1(tau) = exp(-gamma |tau| / 2).
double g1(double tau, double gamma);

// Three-level autocorrelation; g2_auto(0) == 0 exactly, -> 1 as |tau| -> inf,
// exceeds 1 (bunching) at intermediate tau when a > 0.
double g2_auto(double tau, const AutocorrParams& p);

// E[cos(2 pi (nu1 - nu2) tau)] for independent Lorentzian-distributed center
// frequencies with the given FWHMs: exp(-pi (fwhm1 + fwhm2) |tau|). This is
// the characteristic function of a Lorentzian whose FWHM is the sum.
double dephasing_envelope(double tau, double fwhm1, double fwhm2);

// Cross-correlation at the output ports of a balanced beamsplitter:
//   g2(tau) = 1/4 g2_11(tau) + 1/4 g2_22(tau)
//           + 1/2 (1 - xi g1_11 g1_22 cos(2 pi df0 tau) [* envelope])
// With envelope_on the cosine is damped by dephasing_envelope of the two
// spectral-diffusion widths. Valid for balanced input intensities.
double g2_cross(double tau, const PairConfig& cfg, bool envelope_on = true);

enum class WidthConvention {
  // 1/e full width of g1_11 g1_22 * envelope: 2 / (gamma_bar + pi sum_fwhm)
  kCoherenceAndDephasing,
  // dephasing envelope only: 2 / (pi sum_fwhm)
  kDephasingOnly,
};

// 1/e full width of the interference feature. gamma_bar = (gamma1+gamma2)/2.
double interference_feature_width(const PairConfig& cfg,
                                  WidthConvention convention = WidthConvention::kCoherenceAndDephasing);

// Full width of the central dip at half depth between the curve minimum and
// the local baseline, by linear interpolation between bracketing samples.
// The baseline is the mean of g2 over baseline_lo <= |tau| <= baseline_hi.
// Throws DomainError if the curve has no dip (depth <= 0) or the half level
// is never crossed inside the sampled range.
double dip_fwhm(std::span<const double> tau, std::span<const double> g2,
                double baseline_lo, double baseline_hi);

}  // namespace homsim::model
