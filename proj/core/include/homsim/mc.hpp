#pragma once

#include <functional>
#include <span>
#include <vector>

#include "homsim/kinetics.hpp"
#include "homsim/types.hpp"

// Event-driven Monte Carlo: emitter click streams from three-state dynamics,
// per-emission frequency jitter, pairwise HOM interference at the
// beamsplitter, detector imperfections, and PLE scan simulation.
//
// Interference is applied at pair level: each cross-emitter photon pair
// closer than the pairing window is routed to opposite beamsplitter outputs
// with probability 1/2 [1 - xi exp(-gamma_bar |dt|) cos(2 pi (nu1-nu2) dt)]
// and to a common (uniformly chosen) output otherwise; unpaired photons
// route 50:50. This reproduces the full cross-correlation of balanced-input
// two-photon interference as long as photons rarely overlap, which the
// simulator checks before running.
//
// Detection efficiency is folded into generation: photons are produced
// directly at the detected rate through an exact thinned-interval sampler
// (see kinetics.hpp), which is statistically identical to generating every
// emission and discarding undetected ones, and is what makes half-month
// simulated acquisitions tractable.

namespace homsim::mc {

// Exact continuous-time Markov chain photon stream of one emitter (every
// emission materialized; no detection losses). Deterministic for fixed seed.
std::vector<PhotonRecord> simulate_emitter_stream(const EmitterModel& em,
                                                  const EmissionDynamics& dyn, double duration,
                                                  std::uint64_t seed);

enum class Polarization { kParallel, kPerpendicular };

struct HomConfig {
  PairConfig pair;
  EmissionDynamics dynamics1;
  EmissionDynamics dynamics2;
  DetectorModel detector_c;
  DetectorModel detector_d;
  Polarization polarization = Polarization::kParallel;
  double pairing_window = 0.0;      // s; 0 selects 5x the interference feature width
  double flux_threshold = 0.05;     // max expected photons per pairing window
  double impurity_detuning = 3e9;   // Hz offset of spin-impurity emission
  bool enable_emitter1 = true;      // disabling one emitter turns the setup
  bool enable_emitter2 = true;      // into a plain HBT autocorrelation

  void validate() const;
  double effective_pairing_window() const;  // s
};

// Time-ordered chunks of finalized clicks (both detectors merged).
using ClickSink = std::function<void(std::span<const Click>)>;

struct HomRunStats {
  std::int64_t photons1 = 0;      // generated (post-thinning) photons, emitter 1
  std::int64_t photons2 = 0;
  std::int64_t pairs = 0;         // cross-emitter pairs inside the window
  std::int64_t clicks_c = 0;      // after dead time
  std::int64_t clicks_d = 0;
};

// Streaming driver; clicks are delivered in time order and never retained.
HomRunStats run_hom(const HomConfig& cfg, double duration, std::uint64_t seed,
                    const ClickSink& sink, double chunk_seconds = 50.0);

// Materializing wrapper around run_hom.
ClickStream simulate_hom(const HomConfig& cfg, double duration, std::uint64_t seed);

struct PlePeak {
  double center = 0.0;     // Hz
  double fwhm = 100e6;     // Hz
  double peak_rate = 0.0;  // counts/s at line center
};

struct Spectrum {
  std::vector<double> freq;          // Hz
  std::vector<std::int64_t> counts;  // per point
  double dwell = 0.0;                // s per point
  double init_pulse = 0.0;           // s per point, spin initialization
  double background_rate = 0.0;      // counts/s

  std::vector<double> rate() const;  // counts/s per point
};

// Poisson-sampled PLE spectrum: expected counts per point are
// dwell * (sum_i peak_rate_i * L_i(f) + background), with L a Lorentzian
// normalized to 1 at its center. The init pulse precedes every point and
// contributes no counts; it is kept for scan-time bookkeeping.
Spectrum simulate_ple_multi(std::span<const PlePeak> peaks, std::span<const double> grid,
                            double init_pulse, double dwell, double background_rate,
                            std::uint64_t seed);

// Single-line scan of one emitter's selected transition (center f_ex,
// FWHM sd_fwhm).
Spectrum simulate_ple(const EmitterModel& em, std::span<const double> grid, double init_pulse,
                      double dwell, double peak_rate, double background_rate,
                      std::uint64_t seed);

}  // namespace homsim::mc
