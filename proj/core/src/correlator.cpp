#include "homsim/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace homsim::tcspc {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::int64_t CorrelationHistogram::total_counts() const {
  std::int64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

StreamingCorrelator::StreamingCorrelator(const CorrelatorConfig& cfg) : cfg_(cfg) {
  cfg.validate();
  bin_ps_ = cfg.bin_ps();
  half_bins_ = cfg.half_bins();
  window_ps_ = half_bins_ * bin_ps_ + bin_ps_ / 2;
  counts_.assign(static_cast<std::size_t>(2 * half_bins_ + 1), 0);
}

void StreamingCorrelator::add_click(TimePs t, Detector det) {
  auto& own = (det == Detector::C) ? tail_c_ : tail_d_;
  auto& other = (det == Detector::C) ? tail_d_ : tail_c_;
  const int sign = (det == Detector::C) ? -1 : +1;  // tau = tD - tC

  while (!other.empty() && other.front() < t - window_ps_) other.pop_front();
  for (const TimePs to : other) {
    const TimePs tau = sign * (t - to);
    const std::int64_t m = floor_div(2 * tau + bin_ps_, 2 * bin_ps_);
    if (m >= -half_bins_ && m <= half_bins_) {
      ++counts_[static_cast<std::size_t>(m + half_bins_)];
    }
  }
  own.push_back(t);
  if (det == Detector::C) {
    ++n_c_;
  } else {
    ++n_d_;
  }
  // own tail is trimmed lazily when the other detector clicks; also cap here
  while (!own.empty() && own.front() < t - window_ps_) own.pop_front();
}

void StreamingCorrelator::push(std::span<const Click> clicks_c, std::span<const Click> clicks_d) {
  std::size_t ic = 0, id = 0;
  while (ic < clicks_c.size() || id < clicks_d.size()) {
    const bool take_c =
        id >= clicks_d.size() ||
        (ic < clicks_c.size() && clicks_c[ic].time_ps <= clicks_d[id].time_ps);
    if (take_c) {
      add_click(clicks_c[ic].time_ps, Detector::C);
      ++ic;
    } else {
      add_click(clicks_d[id].time_ps, Detector::D);
      ++id;
    }
  }
}

void StreamingCorrelator::push_merged(std::span<const Click> clicks) {
  for (const auto& c : clicks) add_click(c.time_ps, c.detector);
}

StreamingCorrelator& StreamingCorrelator::operator+=(const StreamingCorrelator& other) {
  require(counts_.size() == other.counts_.size() && bin_ps_ == other.bin_ps_,
          "cannot merge correlators with different configs");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  n_c_ += other.n_c_;
  n_d_ += other.n_d_;
  return *this;
}

CorrelationHistogram StreamingCorrelator::finish(double duration) const {
  require(duration > 0.0, "duration must be > 0");
  CorrelationHistogram h;
  h.bin_width = static_cast<double>(bin_ps_) * kPicosecond;
  h.counts = counts_;
  h.bin_centers.resize(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    h.bin_centers[i] =
        static_cast<double>(static_cast<std::int64_t>(i) - half_bins_) * h.bin_width;
  }
  h.duration = duration;
  h.rate_c = static_cast<double>(n_c_) / duration;
  h.rate_d = static_cast<double>(n_d_) / duration;
  h.normalization = cfg_.normalization;
  return h;
}

CorrelationHistogram correlate(const ClickStream& stream, const CorrelatorConfig& cfg) {
  StreamingCorrelator acc(cfg);
  acc.push_merged(stream.clicks);
  return acc.finish(stream.duration > 0.0 ? stream.duration : 1.0);
}

CorrelationHistogram normalize(CorrelationHistogram h) {
  double denom = 0.0;
  if (h.normalization == Normalization::kRateProduct) {
    denom = h.rate_c * h.rate_d * h.duration * h.bin_width;
    if (denom <= 0.0 && h.total_counts() > 0) {
      throw DomainError("normalize: zero rates but nonzero counts");
    }
  } else {
    // mean counts per unit exposure over 0.8..1.0 of the window, both sides
    const std::size_t n = h.counts.size();
    const double tmax = std::abs(h.bin_centers.front());
    double sum = 0.0, expo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(h.bin_centers[i]) >= 0.8 * tmax) {
        sum += static_cast<double>(h.counts[i]);
        expo += h.exposure_at(i);
      }
    }
    require(expo > 0.0, "normalize: empty tail window");
    denom = sum / expo;
    if (denom <= 0.0 && h.total_counts() > 0) {
      throw DomainError("normalize: zero tail average but nonzero counts");
    }
  }

  h.norm_denom = denom;
  h.g2.resize(h.counts.size());
  h.g2_err.resize(h.counts.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double d = denom * h.exposure_at(i);
    if (d <= 0.0) {
      h.g2[i] = 0.0;
      h.g2_err[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    h.g2[i] = static_cast<double>(h.counts[i]) / d;
    h.g2_err[i] = (h.counts[i] > 0)
                      ? h.g2[i] / std::sqrt(static_cast<double>(h.counts[i]))
                      : std::numeric_limits<double>::quiet_NaN();
  }
  h.normalized = true;
  return h;
}

CorrelationHistogram rebin(const CorrelationHistogram& h, int factor) {
  require(factor >= 1, "rebin factor must be >= 1");
  if (factor == 1) return h;
  const std::int64_t n = static_cast<std::int64_t>(h.counts.size());
  const std::int64_t center = n / 2;

  // Group index of old bin i, aligned so the tau = 0 bin sits in group 0
  // (centered for odd factors).
  auto group_of = [&](std::int64_t i) {
    return floor_div(i - center + factor / 2, factor);
  };
  const std::int64_t gmin = group_of(0);
  const std::int64_t gmax = group_of(n - 1);

  CorrelationHistogram out;
  out.bin_width = h.bin_width * factor;
  out.duration = h.duration;
  out.rate_c = h.rate_c;
  out.rate_d = h.rate_d;
  out.normalization = h.normalization;
  const std::size_t ng = static_cast<std::size_t>(gmax - gmin + 1);
  out.counts.assign(ng, 0);
  out.bin_centers.assign(ng, 0.0);
  out.exposure.assign(ng, 0.0);
  std::vector<int> members(ng, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t g = static_cast<std::size_t>(group_of(i) - gmin);
    out.counts[g] += h.counts[static_cast<std::size_t>(i)];
    out.bin_centers[g] += h.bin_centers[static_cast<std::size_t>(i)];
    out.exposure[g] += h.exposure_at(static_cast<std::size_t>(i)) / static_cast<double>(factor);
    ++members[g];
  }
  for (std::size_t g = 0; g < ng; ++g) {
    out.bin_centers[g] /= static_cast<double>(members[g]);
  }
  if (h.normalized) return normalize(std::move(out));
  return out;
}

}  // namespace homsim::tcspc
