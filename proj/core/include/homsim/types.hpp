#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "homsim/units.hpp"

namespace homsim {

// Thrown when a configuration or argument violates a documented precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a simulation request falls outside a model's validity regime
// (e.g. photon flux too high for the pairwise interference approximation).
class ValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

inline void require_finite(double x, const std::string& name) {
  if (!std::isfinite(x)) throw DomainError(name + " must be finite");
}

// Three-level autocorrelation shape parameters:
//   g2(tau) = 1 - (1+a) exp(-|tau|/tau1) + a exp(-|tau|/tau2)
// a >= 0 is the bunching amplitude, tau1 the antibunching timescale, tau2 the
// shelving timescale. g2(0) == 0 identically for every valid parameter set.
struct AutocorrParams {
  double a = 0.0;
  double tau1 = 10e-9;
  double tau2 = 100e-9;

  void validate() const {
    require_finite(a, "autocorr.a");
    require_finite(tau1, "autocorr.tau1");
    require_finite(tau2, "autocorr.tau2");
    require(a >= 0.0, "autocorr.a must be >= 0");
    require(tau1 > 0.0, "autocorr.tau1 must be > 0");
    require(tau2 > 0.0, "autocorr.tau2 must be > 0");
  }
};

// One emitter's optical parameters. Frequencies are offsets (Hz) from an
// arbitrary common optical reference near the zero-phonon line; only
// differences ever enter the physics.
struct EmitterModel {
  double f_ex = 0.0;        // Hz, |0> <-> |Ex> line center
  double f_ey = 0.0;        // Hz, |0> <-> |Ey> line center
  double gamma = 1.0 / 12e-9;  // 1/s, radiative decay rate (inverse lifetime)
  double sd_fwhm = 0.0;     // Hz, Lorentzian spectral-diffusion FWHM of the selected line
  AutocorrParams autocorr;
  double spin_purity = 1.0;  // fraction of emission from the selected transition

  void validate() const {
    require_finite(f_ex, "emitter.f_ex");
    require_finite(f_ey, "emitter.f_ey");
    require(gamma > 0.0 && std::isfinite(gamma), "emitter.gamma must be > 0");
    require(sd_fwhm >= 0.0 && std::isfinite(sd_fwhm), "emitter.sd_fwhm must be >= 0");
    require(spin_purity >= 0.0 && spin_purity <= 1.0, "emitter.spin_purity must be in [0,1]");
    autocorr.validate();
  }
};

// Two emitters at a balanced beamsplitter. xi is the phenomenological
// interference amplitude; delta_f0 the mean detuning of the selected lines.
struct PairConfig {
  EmitterModel emitter1;
  EmitterModel emitter2;
  double xi = 1.0;
  double delta_f0 = 0.0;  // Hz, f1 - f2 of the selected lines

  void validate() const {
    emitter1.validate();
    emitter2.validate();
    require(xi >= 0.0 && xi <= 1.0, "pair.xi must be in [0,1]");
    require_finite(delta_f0, "pair.delta_f0");
    // When line centers are set, delta_f0 must agree with them.
    if (emitter1.f_ex != 0.0 || emitter2.f_ex != 0.0) {
      if (std::abs(delta_f0 - (emitter1.f_ex - emitter2.f_ex)) > 1.0) {
        throw DomainError("pair.delta_f0 inconsistent with emitter f_ex difference");
      }
    }
  }
};

// Generative three-state dynamics: ground -> excited at pump_rate,
// excited -> (photon emitted, then shelf with shelf_prob else ground) at
// gamma, shelf -> ground at 1/shelf_lifetime.
struct EmissionDynamics {
  double pump_rate = 1e8;      // 1/s
  double gamma = 1.0 / 12e-9;  // 1/s, shared with EmitterModel
  double shelf_prob = 0.0;     // in [0,1)
  double shelf_lifetime = 100e-9;  // s

  void validate() const {
    require(pump_rate > 0.0 && std::isfinite(pump_rate), "dynamics.pump_rate must be > 0");
    require(gamma > 0.0 && std::isfinite(gamma), "dynamics.gamma must be > 0");
    require(shelf_prob >= 0.0 && shelf_prob < 1.0, "dynamics.shelf_prob must be in [0,1)");
    require(shelf_lifetime > 0.0 && std::isfinite(shelf_lifetime),
            "dynamics.shelf_lifetime must be > 0");
  }
};

struct DetectorModel {
  double efficiency = 1.0;       // in [0,1]
  double dark_rate = 0.0;        // counts/s
  double background_rate = 0.0;  // counts/s, sample fluorescence
  double jitter_sigma = 50e-12;  // s, Gaussian timing spread
  double dead_time = 50e-9;      // s

  void validate() const {
    require(efficiency >= 0.0 && efficiency <= 1.0, "detector.efficiency must be in [0,1]");
    require(dark_rate >= 0.0, "detector.dark_rate must be >= 0");
    require(background_rate >= 0.0, "detector.background_rate must be >= 0");
    require(jitter_sigma >= 0.0, "detector.jitter_sigma must be >= 0");
    require(dead_time >= 0.0, "detector.dead_time must be >= 0");
  }
};

// One emitted photon before detection.
struct PhotonRecord {
  double emit_time = 0.0;    // s
  double center_freq = 0.0;  // Hz, sampled per emission
  int emitter_id = 1;        // 1 or 2
  bool off_resonant = false; // spin-impurity emission; never interferes
};

enum class Detector : std::uint8_t { C = 0, D = 1 };

enum class Provenance : std::uint8_t { Signal1 = 0, Signal2 = 1, Dark = 2, Background = 3 };

struct Click {
  TimePs time_ps = 0;
  Detector detector = Detector::C;
  Provenance provenance = Provenance::Signal1;

  friend bool operator==(const Click&, const Click&) = default;
};

// Time-ordered detector click records. Times are integer picoseconds in
// [0, duration]; per detector they are strictly increasing after dead-time
// enforcement.
struct ClickStream {
  std::vector<Click> clicks;  // ordered by time_ps
  double duration = 0.0;      // s
  std::uint64_t seed = 0;

  std::size_t count(Detector d) const {
    std::size_t n = 0;
    for (const auto& c : clicks)
      if (c.detector == d) ++n;
    return n;
  }
};

const char* to_string(Provenance p);
const char* to_string(Detector d);

}  // namespace homsim
