#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "homsim/types.hpp"

// Coincidence correlator: delay histograms between two detector channels at
// fixed resolution, normalized to g2(tau) with shot-noise error bars.
//
// All ordered pairs (tC, tD) with tD - tC inside the window are counted (not
// start-stop); bin edges are computed in integer picoseconds so binning is
// exact and platform independent. Bins are centered on tau = 0: bin m covers
// [m*W - W/2, m*W + W/2) for m in [-M, M].

namespace homsim::tcspc {

enum class Normalization { kRateProduct, kTailAverage };

struct CorrelatorConfig {
  double bin_width = 64e-12;  // s
  double window = 100e-9;     // s, max |tau|
  Normalization normalization = Normalization::kRateProduct;

  void validate() const {
    require(bin_width > 0.0, "correlator.bin_width must be > 0");
    require(window >= bin_width, "correlator.window must be >= bin_width");
  }

  TimePs bin_ps() const { return static_cast<TimePs>(bin_width / kPicosecond + 0.5); }
  // bins m in [-M, M]; coverage extends half a bin beyond M*bin.
  std::int64_t half_bins() const { return static_cast<std::int64_t>(window / bin_width); }
};

struct CorrelationHistogram {
  std::vector<double> bin_centers;  // s, symmetric around 0
  std::vector<std::int64_t> counts;
  double bin_width = 64e-12;  // s
  double duration = 0.0;      // s
  double rate_c = 0.0;        // counts/s
  double rate_d = 0.0;        // counts/s
  // Fraction of the nominal bin_width each bin covers; empty means 1 for all.
  // Rebinning with a factor that does not divide the bin count leaves ragged
  // edge groups, which carry exposure < 1 so counts stay conserved while g2
  // stays correctly normalized.
  std::vector<double> exposure;
  std::vector<double> g2;      // filled by normalize()
  std::vector<double> g2_err;  // NaN where counts == 0
  double norm_denom = 0.0;     // expected counts per full-width bin at g2 = 1
  Normalization normalization = Normalization::kRateProduct;
  bool normalized = false;

  std::size_t size() const { return counts.size(); }
  std::int64_t total_counts() const;
  std::size_t center_index() const { return counts.size() / 2; }
  double exposure_at(std::size_t i) const { return exposure.empty() ? 1.0 : exposure[i]; }
  // expected counts in bin i at g2 = 1
  double denom_at(std::size_t i) const { return norm_denom * exposure_at(i); }
};

// Incremental pair counter; chunks must arrive in time order per detector.
// Merging accumulators (operator+=) is associative and commutative, so
// disjoint time segments can be correlated independently.
class StreamingCorrelator {
 public:
  explicit StreamingCorrelator(const CorrelatorConfig& cfg);

  void push(std::span<const Click> clicks_c, std::span<const Click> clicks_d);
  void push_merged(std::span<const Click> clicks);  // any mix of detectors, time-ordered

  StreamingCorrelator& operator+=(const StreamingCorrelator& other);

  // Histogram with counts, rates and duration filled (not yet normalized).
  CorrelationHistogram finish(double duration) const;

  std::int64_t clicks_c() const { return n_c_; }
  std::int64_t clicks_d() const { return n_d_; }

 private:
  void add_click(TimePs t, Detector det);

  CorrelatorConfig cfg_;
  TimePs bin_ps_;
  TimePs window_ps_;  // acceptance edge: |tau| <= (M + 1/2) * bin
  std::int64_t half_bins_;
  std::vector<std::int64_t> counts_;
  std::deque<TimePs> tail_c_, tail_d_;
  std::int64_t n_c_ = 0, n_d_ = 0;
};

// Build the full histogram of a materialized stream.
CorrelationHistogram correlate(const ClickStream& stream, const CorrelatorConfig& cfg);

// Fill g2 and g2_err. Rate-product mode divides counts by
// rate_c * rate_d * duration * bin_width; tail-average mode divides by the
// mean counts over 0.8..1.0 of the window. Errors are Poisson: g2/sqrt(N).
CorrelationHistogram normalize(CorrelationHistogram hist);

// Sum counts in groups of `factor` bins, keeping the tau = 0 bin centered
// (for odd factors exactly; even factors are grouped off-center by half a
// bin). Edge groups may be ragged so that total counts are conserved.
CorrelationHistogram rebin(const CorrelationHistogram& hist, int factor);

}  // namespace homsim::tcspc
