#pragma once

// Test-only independent oracles. These deliberately avoid the library code
// paths they are used to check: brute-force pair counting for the
// correlator, direct Monte Carlo averages for the dephasing envelope, and
// central finite differences for fit Jacobians.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "homsim/rng.hpp"
#include "homsim/types.hpp"

namespace test_oracles {

// All ordered pairs (tC, tD) with tD - tC in [m*w - w/2, m*w + w/2),
// counted by scanning every pair. O(n^2); use on small streams only.
inline std::vector<std::int64_t> brute_force_pairs(std::span<const homsim::Click> clicks,
                                                   std::int64_t bin_ps,
                                                   std::int64_t half_bins) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(2 * half_bins + 1), 0);
  for (const auto& c : clicks) {
    if (c.detector != homsim::Detector::C) continue;
    for (const auto& d : clicks) {
      if (d.detector != homsim::Detector::D) continue;
      const std::int64_t tau = d.time_ps - c.time_ps;
      // floor((tau + bin/2) / bin)
      std::int64_t num = 2 * tau + bin_ps;
      std::int64_t den = 2 * bin_ps;
      std::int64_t m = num / den;
      if ((num % den != 0) && ((num < 0) != (den < 0))) --m;
      if (m >= -half_bins && m <= half_bins) {
        ++counts[static_cast<std::size_t>(m + half_bins)];
      }
    }
  }
  return counts;
}

// Monte Carlo estimate of E[cos(2 pi (nu1 - nu2) tau)] with nu_i drawn from
// Lorentzians of the given FWHMs; returns mean and standard error.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

inline McEstimate mc_dephasing(double tau, double fwhm1, double fwhm2, std::size_t n,
                               std::uint64_t seed) {
  homsim::Rng rng(seed, 0xdeb);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double nu1 = rng.cauchy(0.0, fwhm1);
    const double nu2 = rng.cauchy(0.0, fwhm2);
    const double c = std::cos(2.0 * std::numbers::pi * (nu1 - nu2) * tau);
    sum += c;
    sum2 += c * c;
  }
  McEstimate e;
  e.mean = sum / static_cast<double>(n);
  const double var = sum2 / static_cast<double>(n) - e.mean * e.mean;
  e.std_error = std::sqrt(var / static_cast<double>(n));
  return e;
}

// Central finite-difference Jacobian column for any model functor
// y(p) -> vector.
template <typename Eval>
std::vector<double> fd_jacobian_col(const Eval& eval, std::vector<double> p, std::size_t j,
                                    double rel_step = 1e-6) {
  const double h = std::max(std::abs(p[j]) * rel_step, 1e-14);
  auto lo = p, hi = p;
  hi[j] += h;
  lo[j] -= h;
  const auto y_hi = eval(hi);
  const auto y_lo = eval(lo);
  std::vector<double> col(y_hi.size());
  for (std::size_t i = 0; i < col.size(); ++i) col[i] = (y_hi[i] - y_lo[i]) / (2.0 * h);
  return col;
}

}  // namespace test_oracles
