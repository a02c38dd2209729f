#pragma once

#include <array>

#include "homsim/rng.hpp"
#include "homsim/types.hpp"

// Analysis of the three-state emission chain {ground, excited, shelf} and an
// exact sampler for the waiting time between consecutive *detected* photons
// when each emission survives an independent Bernoulli(efficiency) thinning.
//
// Every emission leaves the chain in the same post-emission mixture
// (ground w.p. 1-shelf_prob, shelf w.p. shelf_prob), so the detected stream
// is a renewal process. Its interval density is a signed mixture of three
// exponentials (the eigenmodes of the thinned chain), sampled by rejection
// from the positive part of the mixture. Thinning leaves the normalized
// autocorrelation g2(tau) unchanged, which is what makes detected-level
// generation statistically identical to emitting every photon and discarding
// most of them.

namespace homsim::kinetics {

struct ChainAnalysis {
  double lambda_fast = 0.0;    // 1/s, faster relaxation rate (antibunching)
  double lambda_slow = 0.0;    // 1/s, slower relaxation rate (shelving)
  double p_excited_ss = 0.0;   // steady-state excited population
  double emission_rate = 0.0;  // photons/s = gamma * p_excited_ss
};

ChainAnalysis analyze(const EmissionDynamics& dyn);

// The autocorrelation shape induced by the chain. Exact via the eigenvalue
// decomposition; verified empirically against simulated streams in the tests.
AutocorrParams dynamics_to_autocorr(const EmissionDynamics& dyn);

// Inverse map: chain parameters reproducing a target autocorrelation shape at
// fixed radiative rate gamma. Throws DomainError when the target is not
// reachable (e.g. 1/tau1 <= gamma).
EmissionDynamics autocorr_to_dynamics(const AutocorrParams& target, double gamma);

class IntervalSampler {
 public:
  IntervalSampler(const EmissionDynamics& dyn, double efficiency);

  // Waiting time from t = 0 with the chain in the ground state.
  double first(Rng& rng) const { return sample(start_, rng); }
  // Waiting time between consecutive detected photons.
  double next(Rng& rng) const { return sample(renewal_, rng); }

  double mean_interval() const { return renewal_.mean; }
  double detected_rate() const { return 1.0 / renewal_.mean; }

  // Renewal-interval density and CDF (used by the tests).
  double density(double t) const;
  double cdf(double t) const;

 private:
  struct Mixture {
    std::array<double, 3> lambda{};  // decay rates, all > 0
    std::array<double, 3> weight{};  // signed, f(t) = sum w_i exp(-lambda_i t)
    // rejection envelope: positive components only
    std::array<double, 3> comp_cum{};  // cumulative selection probabilities
    std::array<int, 3> comp_index{};
    int n_pos = 0;
    double t_safe = 0.0;  // beyond this, accept without evaluating f/g
    double mean = 0.0;
  };

  double sample(const Mixture& m, Rng& rng) const;
  Mixture make_mixture(bool from_ground) const;

  double pump_ = 0.0, gamma_ = 0.0, shelf_prob_ = 0.0, shelf_rate_ = 0.0, efficiency_ = 1.0;
  Mixture renewal_, start_;
};

}  // namespace homsim::kinetics
