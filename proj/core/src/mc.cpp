#include "homsim/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "homsim/model.hpp"

namespace homsim::mc {

namespace {

constexpr TimePs kNever = std::numeric_limits<TimePs>::max();

TimePs to_ps(double seconds) { return static_cast<TimePs>(std::llround(seconds * 1e12)); }

double normal_from_unit(double u) {
  u = std::clamp(u, 1e-300, 1.0 - 1e-16);
  return Rng::inverse_normal_cdf(u);
}

// Photon times of one emitter, either the exact chain (every emission) or
// the thinned renewal process at the detected rate.
class EmitterSource {
 public:
  EmitterSource(const EmitterModel& em, const EmissionDynamics& dyn, double efficiency,
                std::uint64_t seed, int id)
      : id_(id),
        rng_(seed, id == 1 ? stream_id::kEmitter1 : stream_id::kEmitter2),
        seed_(seed),
        purity_(em.spin_purity),
        pump_(dyn.pump_rate),
        gamma_(dyn.gamma),
        shelf_prob_(dyn.shelf_prob),
        shelf_rate_(1.0 / dyn.shelf_lifetime) {
    freq_stream_ = (id == 1) ? stream_id::kFrequency1 : stream_id::kFrequency2;
    if (efficiency <= 0.0) {
      next_ps_ = kNever;
      rate_ = 0.0;
      return;
    }
    if (efficiency < 1.0) {
      sampler_.emplace(dyn, efficiency);
      rate_ = sampler_->detected_rate();
      next_ps_ = to_ps(sampler_->first(rng_));
    } else {
      rate_ = kinetics::analyze(dyn).emission_rate;
      next_ps_ = to_ps(rng_.exponential(pump_) + rng_.exponential(gamma_));
    }
  }

  TimePs next_time() const { return next_ps_; }
  std::uint64_t index() const { return index_; }
  int id() const { return id_; }
  double rate() const { return rate_; }

  bool impure() const {
    return keyed_uniform(seed_, freq_stream_, 4 * index_ + 1) >= purity_;
  }

  void advance() {
    if (next_ps_ == kNever) return;
    double gap;
    if (sampler_) {
      gap = sampler_->next(rng_);
    } else {
      gap = rng_.exponential(pump_) + rng_.exponential(gamma_);
      if (shelf_prob_ > 0.0 && rng_.bernoulli(shelf_prob_)) {
        gap += rng_.exponential(shelf_rate_);
      }
    }
    next_ps_ += to_ps(gap);
    ++index_;
  }

 private:
  int id_;
  Rng rng_;
  std::uint64_t seed_;
  std::uint64_t freq_stream_;
  double purity_;
  double pump_, gamma_, shelf_prob_, shelf_rate_;
  std::optional<kinetics::IntervalSampler> sampler_;
  TimePs next_ps_ = kNever;
  std::uint64_t index_ = 0;
  double rate_ = 0.0;
};

// Poisson noise clicks on one detector.
class NoiseSource {
 public:
  NoiseSource(double rate, double jitter_sigma, Provenance provenance, Detector det,
              std::uint64_t seed, std::uint64_t stream)
      : rng_(seed, stream), rate_(rate), jitter_sigma_(jitter_sigma), provenance_(provenance),
        detector_(det) {
    next_ps_ = (rate_ > 0.0) ? to_ps(rng_.exponential(rate_)) : kNever;
  }

  TimePs next_time() const { return next_ps_; }

  Click pop() {
    Click c;
    c.time_ps = next_ps_;
    if (jitter_sigma_ > 0.0) c.time_ps += to_ps(jitter_sigma_ * rng_.normal());
    c.detector = detector_;
    c.provenance = provenance_;
    next_ps_ += to_ps(rng_.exponential(rate_));
    return c;
  }

 private:
  Rng rng_;
  double rate_;
  double jitter_sigma_;
  Provenance provenance_;
  Detector detector_;
  TimePs next_ps_ = kNever;
};

struct PendingPhoton {
  TimePs t = 0;
  std::uint64_t index = 0;
  int emitter = 0;
  bool impure = false;
  bool valid = false;
};

void insertion_sort_by_time(std::vector<Click>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i - 1].time_ps <= v[i].time_ps) continue;
    Click key = v[i];
    std::size_t j = i;
    while (j > 0 && v[j - 1].time_ps > key.time_ps) {
      v[j] = v[j - 1];
      --j;
    }
    v[j] = key;
  }
}

class HomEngine {
 public:
  HomEngine(const HomConfig& cfg, double duration, std::uint64_t seed, const ClickSink& sink)
      : cfg_(cfg),
        seed_(seed),
        sink_(sink),
        duration_ps_(to_ps(duration)),
        eff_base_(std::max(cfg.detector_c.efficiency, cfg.detector_d.efficiency)),
        e1_(cfg.pair.emitter1, cfg.dynamics1, cfg.enable_emitter1 ? eff_base_ : 0.0, seed, 1),
        e2_(cfg.pair.emitter2, cfg.dynamics2, cfg.enable_emitter2 ? eff_base_ : 0.0, seed, 2),
        dark_c_(cfg.detector_c.dark_rate, 0.0, Provenance::Dark, Detector::C, seed,
                stream_id::kDarkC),
        dark_d_(cfg.detector_d.dark_rate, 0.0, Provenance::Dark, Detector::D, seed,
                stream_id::kDarkD),
        bg_c_(cfg.detector_c.background_rate, cfg.detector_c.jitter_sigma, Provenance::Background,
              Detector::C, seed, stream_id::kBackgroundC),
        bg_d_(cfg.detector_d.background_rate, cfg.detector_d.jitter_sigma, Provenance::Background,
              Detector::D, seed, stream_id::kBackgroundD) {
    window_ps_ = to_ps(cfg.effective_pairing_window());
    gamma_bar_ = 0.5 * (cfg.pair.emitter1.gamma + cfg.pair.emitter2.gamma);
    xi_eff_ = (cfg.polarization == Polarization::kParallel) ? cfg.pair.xi : 0.0;

    const double occupancy = (e1_.rate() + e2_.rate()) * cfg.effective_pairing_window();
    if (occupancy > cfg.flux_threshold) {
      throw ValidityError(
          "photon flux too high for pairwise interference: expected occupancy " +
          std::to_string(occupancy) + " photons per pairing window exceeds threshold " +
          std::to_string(cfg.flux_threshold));
    }
  }

  HomRunStats run(double chunk_seconds) {
    const TimePs chunk_ps = to_ps(std::max(chunk_seconds, 1e-6));
    const TimePs guard_ps = window_ps_ + 1'000'000;  // pairing delay + jitter margin
    TimePs frontier = 0;
    while (frontier < duration_ps_) {
      const TimePs chunk_end = std::min(frontier + chunk_ps, duration_ps_);
      pump_events(chunk_end);
      const bool last = chunk_end == duration_ps_;
      if (last) {
        evict_pending(kNever);
        flush(kNever);
      } else {
        evict_pending(chunk_end);
        flush(chunk_end - guard_ps);
      }
      frontier = chunk_end;
    }
    return stats_;
  }

 private:
  // Process all events strictly before t_end, in global time order.
  void pump_events(TimePs t_end) {
    for (;;) {
      TimePs t_min = kNever;
      int which = -1;
      auto consider = [&](TimePs t, int tag) {
        if (t < t_min) {
          t_min = t;
          which = tag;
        }
      };
      consider(e1_.next_time(), 0);
      consider(e2_.next_time(), 1);
      consider(dark_c_.next_time(), 2);
      consider(dark_d_.next_time(), 3);
      consider(bg_c_.next_time(), 4);
      consider(bg_d_.next_time(), 5);
      if (which < 0 || t_min >= t_end) return;
      switch (which) {
        case 0:
          handle_photon(e1_, e2_);
          break;
        case 1:
          handle_photon(e2_, e1_);
          break;
        case 2:
          push_noise(dark_c_.pop());
          break;
        case 3:
          push_noise(dark_d_.pop());
          break;
        case 4:
          push_noise(bg_c_.pop());
          break;
        case 5:
          push_noise(bg_d_.pop());
          break;
      }
    }
  }

  void handle_photon(EmitterSource& self, EmitterSource& other) {
    PendingPhoton photon;
    photon.t = self.next_time();
    photon.index = self.index();
    photon.emitter = self.id();
    photon.impure = self.impure();

    evict_pending(photon.t);

    PendingPhoton& partner = pending_[other.id() - 1];
    if (partner.valid && photon.t - partner.t <= window_ps_) {
      route_pair(partner, photon);
      partner.valid = false;
    } else {
      PendingPhoton& own = pending_[self.id() - 1];
      if (own.valid) route_unpaired(own);
      own = photon;
      own.valid = true;
    }
    self.advance();
  }

  // Pendings older than frontier - window can never pair again.
  void evict_pending(TimePs frontier) {
    for (auto& p : pending_) {
      if (p.valid && (frontier == kNever || p.t + window_ps_ < frontier)) {
        route_unpaired(p);
        p.valid = false;
      }
    }
  }

  void route_unpaired(const PendingPhoton& p) {
    const std::uint64_t stream = (p.emitter == 1) ? stream_id::kRoutingUnpaired1
                                                  : stream_id::kRoutingUnpaired2;
    const double u = keyed_uniform(seed_, stream, p.index);
    deliver(p, u < 0.5 ? Detector::C : Detector::D);
  }

  void route_pair(const PendingPhoton& first, const PendingPhoton& second) {
    ++stats_.pairs;
    const double dt = static_cast<double>(second.t - first.t) * 1e-12;
    double v = 0.0;
    if (xi_eff_ > 0.0 && !first.impure && !second.impure) {
      const double coherence = std::exp(-gamma_bar_ * std::abs(dt));
      if (coherence > 1e-14) {
        // per-emission center frequencies; only the difference matters
        const PendingPhoton& p1 = (first.emitter == 1) ? first : second;
        const PendingPhoton& p2 = (first.emitter == 1) ? second : first;
        const double d_nu = cfg_.pair.delta_f0 + photon_freq_offset(p1) - photon_freq_offset(p2);
        v = xi_eff_ * coherence * std::cos(2.0 * std::numbers::pi * d_nu * dt);
      }
    }
    const double p_split = 0.5 * (1.0 - v);
    const std::uint64_t tag = 2 * second.index + static_cast<std::uint64_t>(second.emitter - 1);
    const double u_split = keyed_uniform(seed_, stream_id::kRoutingPairSplit, tag);
    const double u_assign = keyed_uniform(seed_, stream_id::kRoutingPairAssign, tag);
    if (u_split < p_split) {
      const Detector d_first = (u_assign < 0.5) ? Detector::C : Detector::D;
      deliver(first, d_first);
      deliver(second, d_first == Detector::C ? Detector::D : Detector::C);
    } else {
      const Detector both = (u_assign < 0.5) ? Detector::C : Detector::D;
      deliver(first, both);
      deliver(second, both);
    }
  }

  double photon_freq_offset(const PendingPhoton& p) const {
    const double sd = (p.emitter == 1) ? cfg_.pair.emitter1.sd_fwhm : cfg_.pair.emitter2.sd_fwhm;
    const std::uint64_t stream =
        (p.emitter == 1) ? stream_id::kFrequency1 : stream_id::kFrequency2;
    return keyed_cauchy(seed_, stream, 4 * p.index, 0.0, sd);
  }

  void deliver(const PendingPhoton& p, Detector det) {
    if (p.emitter == 1) {
      ++stats_.photons1;
    } else {
      ++stats_.photons2;
    }
    const DetectorModel& dm = (det == Detector::C) ? cfg_.detector_c : cfg_.detector_d;
    if (dm.efficiency < eff_base_) {
      const std::uint64_t stream =
          (p.emitter == 1) ? stream_id::kDetection1 : stream_id::kDetection2;
      if (keyed_uniform(seed_, stream, p.index) >= dm.efficiency / eff_base_) return;
    }
    Click c;
    c.time_ps = p.t;
    if (dm.jitter_sigma > 0.0) {
      const std::uint64_t stream =
          (p.emitter == 1) ? stream_id::kJitterPhoton1 : stream_id::kJitterPhoton2;
      const double z = normal_from_unit(keyed_uniform(seed_, stream, p.index));
      c.time_ps += to_ps(dm.jitter_sigma * z);
    }
    c.detector = det;
    c.provenance = (p.emitter == 1) ? Provenance::Signal1 : Provenance::Signal2;
    push_click(c);
  }

  void push_noise(const Click& c) { push_click(c); }

  void push_click(const Click& c) {
    if (c.time_ps < 0 || c.time_ps > duration_ps_) return;
    buffers_[static_cast<int>(c.detector)].push_back(c);
  }

  // Finalize all clicks with t <= up_to (or everything for kNever): order,
  // apply dead time per detector, merge the two sorted runs and hand the
  // chunk to the sink.
  void flush(TimePs up_to) {
    for (int d = 0; d < 2; ++d) {
      auto& buf = buffers_[d];
      auto& fin = finalized_[d];
      fin.clear();
      insertion_sort_by_time(buf);
      std::size_t keep = buf.size();
      if (up_to != kNever) {
        keep = static_cast<std::size_t>(
            std::lower_bound(buf.begin(), buf.end(), up_to,
                             [](const Click& c, TimePs t) { return c.time_ps <= t; }) -
            buf.begin());
      }
      const double dead = (d == 0) ? cfg_.detector_c.dead_time : cfg_.detector_d.dead_time;
      const TimePs dead_ps = to_ps(dead);
      auto& last = last_click_ps_[d];
      for (std::size_t i = 0; i < keep; ++i) {
        const Click& c = buf[i];
        if (last != kNever && c.time_ps - last < dead_ps) continue;
        last = c.time_ps;
        fin.push_back(c);
      }
      if (d == 0) {
        stats_.clicks_c += static_cast<std::int64_t>(fin.size());
      } else {
        stats_.clicks_d += static_cast<std::int64_t>(fin.size());
      }
      buf.erase(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(keep));
    }
    merged_.resize(finalized_[0].size() + finalized_[1].size());
    std::merge(finalized_[0].begin(), finalized_[0].end(), finalized_[1].begin(),
               finalized_[1].end(), merged_.begin(),
               [](const Click& a, const Click& b) { return a.time_ps < b.time_ps; });
    if (sink_ && !merged_.empty()) sink_(std::span<const Click>(merged_));
  }

  HomConfig cfg_;
  std::uint64_t seed_;
  ClickSink sink_;
  TimePs duration_ps_;
  double eff_base_;
  EmitterSource e1_, e2_;
  NoiseSource dark_c_, dark_d_, bg_c_, bg_d_;
  TimePs window_ps_ = 0;
  double gamma_bar_ = 0.0;
  double xi_eff_ = 0.0;
  PendingPhoton pending_[2];
  std::vector<Click> buffers_[2];
  std::vector<Click> finalized_[2];
  std::vector<Click> merged_;
  TimePs last_click_ps_[2] = {kNever, kNever};
  HomRunStats stats_;
};

}  // namespace

void HomConfig::validate() const {
  pair.validate();
  dynamics1.validate();
  dynamics2.validate();
  detector_c.validate();
  detector_d.validate();
  require(pairing_window >= 0.0, "hom.pairing_window must be >= 0");
  require(flux_threshold > 0.0, "hom.flux_threshold must be > 0");
  require(impurity_detuning > 0.0, "hom.impurity_detuning must be > 0");
  require(std::abs(dynamics1.gamma - pair.emitter1.gamma) < 1e-6 * pair.emitter1.gamma,
          "dynamics1.gamma must match emitter1.gamma");
  require(std::abs(dynamics2.gamma - pair.emitter2.gamma) < 1e-6 * pair.emitter2.gamma,
          "dynamics2.gamma must match emitter2.gamma");
}

double HomConfig::effective_pairing_window() const {
  if (pairing_window > 0.0) return pairing_window;
  return 5.0 * model::interference_feature_width(pair,
                                                 model::WidthConvention::kCoherenceAndDephasing);
}

HomRunStats run_hom(const HomConfig& cfg, double duration, std::uint64_t seed,
                    const ClickSink& sink, double chunk_seconds) {
  cfg.validate();
  require(duration > 0.0 && std::isfinite(duration), "duration must be > 0");
  HomEngine engine(cfg, duration, seed, sink);
  return engine.run(chunk_seconds);
}

ClickStream simulate_hom(const HomConfig& cfg, double duration, std::uint64_t seed) {
  ClickStream out;
  out.duration = duration;
  out.seed = seed;
  run_hom(cfg, duration, seed, [&](std::span<const Click> chunk) {
    out.clicks.insert(out.clicks.end(), chunk.begin(), chunk.end());
  });
  return out;
}

std::vector<PhotonRecord> simulate_emitter_stream(const EmitterModel& em,
                                                  const EmissionDynamics& dyn, double duration,
                                                  std::uint64_t seed) {
  em.validate();
  dyn.validate();
  require(duration > 0.0 && std::isfinite(duration), "duration must be > 0");

  Rng rng(seed, stream_id::kEmitter1);
  const std::uint64_t freq_stream = stream_id::kFrequency1;
  const double shelf_rate = 1.0 / dyn.shelf_lifetime;

  std::vector<PhotonRecord> out;
  double t = rng.exponential(dyn.pump_rate) + rng.exponential(dyn.gamma);
  std::uint64_t index = 0;
  while (t <= duration) {
    PhotonRecord rec;
    rec.emit_time = t;
    rec.emitter_id = 1;
    rec.off_resonant = keyed_uniform(seed, freq_stream, 4 * index + 1) >= em.spin_purity;
    const double jitter = keyed_cauchy(seed, freq_stream, 4 * index, 0.0, em.sd_fwhm);
    rec.center_freq = em.f_ex + jitter + (rec.off_resonant ? 3e9 : 0.0);
    out.push_back(rec);

    double gap = rng.exponential(dyn.pump_rate) + rng.exponential(dyn.gamma);
    if (dyn.shelf_prob > 0.0 && rng.bernoulli(dyn.shelf_prob)) {
      gap += rng.exponential(shelf_rate);
    }
    t += gap;
    ++index;
  }
  return out;
}

std::vector<double> Spectrum::rate() const {
  std::vector<double> r(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    r[i] = dwell > 0.0 ? static_cast<double>(counts[i]) / dwell : 0.0;
  }
  return r;
}

Spectrum simulate_ple_multi(std::span<const PlePeak> peaks, std::span<const double> grid,
                            double init_pulse, double dwell, double background_rate,
                            std::uint64_t seed) {
  require(!grid.empty(), "PLE scan grid must not be empty");
  require(dwell > 0.0, "PLE dwell must be > 0");
  require(init_pulse >= 0.0, "PLE init pulse must be >= 0");
  require(background_rate >= 0.0, "PLE background must be >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    require(grid[i] > grid[i - 1], "PLE scan grid must be strictly increasing");
  }
  for (const auto& p : peaks) {
    require(p.fwhm > 0.0, "PLE peak fwhm must be > 0");
    require(p.peak_rate >= 0.0, "PLE peak rate must be >= 0");
  }

  Spectrum s;
  s.freq.assign(grid.begin(), grid.end());
  s.counts.resize(grid.size());
  s.dwell = dwell;
  s.init_pulse = init_pulse;
  s.background_rate = background_rate;

  Rng rng(seed, stream_id::kPle);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double rate = background_rate;
    for (const auto& p : peaks) {
      const double half = 0.5 * p.fwhm;
      const double df = grid[i] - p.center;
      rate += p.peak_rate * half * half / (df * df + half * half);
    }
    s.counts[i] = static_cast<std::int64_t>(rng.poisson(rate * dwell));
  }
  return s;
}

Spectrum simulate_ple(const EmitterModel& em, std::span<const double> grid, double init_pulse,
                      double dwell, double peak_rate, double background_rate,
                      std::uint64_t seed) {
  em.validate();
  require(em.sd_fwhm > 0.0, "PLE of a zero-width line is undefined");
  const PlePeak peak{em.f_ex, em.sd_fwhm, peak_rate};
  return simulate_ple_multi(std::span<const PlePeak>(&peak, 1), grid, init_pulse, dwell,
                            background_rate, seed);
}

}  // namespace homsim::mc
