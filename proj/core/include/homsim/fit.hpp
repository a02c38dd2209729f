#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homsim/correlator.hpp"
#include "homsim/mc.hpp"
#include "homsim/types.hpp"

// Nonlinear least-squares fitting of PLE spectra (Lorentzian) and correlation
// histograms (beamsplitter cross-correlation model with interference
// amplitude xi), with 1-sigma parameter uncertainties from the covariance of
// the linearized problem. The engine is a damped (Levenberg-Marquardt style)
// iteration with analytic Jacobians; an accepted step never increases the
// weighted residual norm.

namespace homsim::fitting {

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> params;
  std::vector<double> sigmas;
  double chi2 = 0.0;
  double chi2_reduced = 0.0;
  bool converged = false;
  int n_iter = 0;
  std::vector<double> residual_history;  // weighted SSR after each accepted step

  double param(const std::string& name) const;
  double sigma(const std::string& name) const;
};

class FitNotConverged : public std::runtime_error {
 public:
  FitNotConverged(const std::string& msg, FitResult last)
      : std::runtime_error(msg), last_state_(std::move(last)) {}
  const FitResult& last_state() const { return last_state_; }

 private:
  FitResult last_state_;
};

struct FitOptions {
  int max_iterations = 200;
  double rel_step_tol = 1e-8;
  double rel_residual_tol = 1e-10;
};

// Generic interface: y_i(p) with analytic Jacobian (row-major points x params).
class LeastSquaresModel {
 public:
  virtual ~LeastSquaresModel() = default;
  virtual std::size_t n_points() const = 0;
  virtual std::size_t n_params() const = 0;
  virtual void eval(std::span<const double> p, std::span<double> y) const = 0;
  virtual void jacobian(std::span<const double> p, std::span<double> jac) const = 0;
  // Box constraints; steps crossing them are rejected. Default: unbounded.
  virtual double lower_bound(std::size_t) const { return -1e300; }
  virtual double upper_bound(std::size_t) const { return 1e300; }
};

FitResult fit_least_squares(const LeastSquaresModel& model, std::span<const double> y_obs,
                            std::span<const double> sigma, std::span<const double> p0,
                            std::span<const std::string> names, const FitOptions& opts = {});

struct LorentzianInit {
  double offset_rate;  // counts/s
  double amplitude;    // counts/s above offset at center
  double center;       // Hz
  double fwhm;         // Hz
};

// Fit offset + amplitude (fwhm/2)^2 / ((f-center)^2 + (fwhm/2)^2) to a
// Poisson-counted spectrum (weights: variance max(counts, 1)). Initial
// values are data driven (argmax center, half-max crossing span) unless
// supplied. Parameters: offset, amplitude, center, fwhm.
FitResult fit_lorentzian(const mc::Spectrum& spectrum,
                         const std::optional<LorentzianInit>& init = std::nullopt,
                         const FitOptions& opts = {});

enum class G2Model { kAuto, kCross };

// Quantities held constant during a g2 fit. The dilution is the squared
// signal fraction (1 - background_contribution); the interference width is
// pinned by the independently measured PLE linewidths, as in the reference
// analysis.
struct G2Fixed {
  double dilution = 1.0;       // q^2 applied to the dip depth
  double gamma_bar = 0.0;      // 1/s, for the cross model coherence factor
  double env_fwhm_sum = 0.0;   // Hz, fwhm1 + fwhm2 of the dephasing envelope
  double delta_f0 = 0.0;       // Hz
  std::optional<double> fixed_xi;  // pin xi (e.g. 0 for perpendicular runs)
};

// Fit a normalized correlation histogram.
//   auto:  baseline * (1 - dilution ((1+a) e^{-|t|/tau1} - a e^{-|t|/tau2}))
//          parameters: baseline, a, tau1, tau2
//   cross: baseline * (1 - dilution (1/2 (1+a)e^{-|t|/tau1} - 1/2 a e^{-|t|/tau2}
//          + 1/2 xi exp(-gamma_bar|t|) env(t) cos(2 pi df0 t)))
//          parameters: baseline, a, tau1, tau2 (shared by both emitters), xi
FitResult fit_g2(const tcspc::CorrelationHistogram& hist, G2Model model, const G2Fixed& fixed,
                 const FitOptions& opts = {});

// Model curve implied by a cross fit, evaluated at tau (s).
double g2_cross_fit_curve(const FitResult& fit, const G2Fixed& fixed, double tau);
double g2_auto_fit_curve(const FitResult& fit, double dilution, double tau);

}  // namespace homsim::fitting
