#include "homsim/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace homsim::fitting {

namespace {

// Cholesky solve of (A + lambda diag(A)) x = b for small dense systems.
// Jacobi-scaled first: parameters can differ by many decades (rates in Hz
// against dimensionless amplitudes), and the raw normal equations lose
// several digits without it.
bool solve_damped(const std::vector<double>& a_in, const std::vector<double>& b_in,
                  std::size_t n, double lambda, std::vector<double>& x) {
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double aii = a_in[i * n + i];
    d[i] = (aii > 0.0) ? 1.0 / std::sqrt(aii) : 1.0;
  }
  std::vector<double> a(n * n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = a_in[i * n + j] * d[i] * d[j];
    a[i * n + i] += lambda;
    if (a[i * n + i] <= 0.0) a[i * n + i] = 1e-30;
    b[i] = b_in[i] * d[i];
  }
  // in-place Cholesky A = L L^T
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (s <= 0.0) return false;
        a[i * n + i] = std::sqrt(s);
      } else {
        a[i * n + j] = s / a[j * n + j];
      }
    }
  }
  x.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * x[k];
    x[i] = s / a[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= a[k * n + ii] * x[k];
    x[ii] = s / a[ii * n + ii];
  }
  for (std::size_t i = 0; i < n; ++i) x[i] *= d[i];
  return true;
}

bool invert_spd(const std::vector<double>& a, std::size_t n, std::vector<double>& inv) {
  inv.assign(n * n, 0.0);
  std::vector<double> col;
  std::vector<double> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    if (!solve_damped(a, e, n, 0.0, col)) return false;
    for (std::size_t i = 0; i < n; ++i) inv[i * n + j] = col[i];
  }
  return true;
}

}  // namespace

double FitResult::param(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return params[i];
  }
  throw DomainError("no fit parameter named " + name);
}

double FitResult::sigma(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return sigmas[i];
  }
  throw DomainError("no fit parameter named " + name);
}

FitResult fit_least_squares(const LeastSquaresModel& model, std::span<const double> y_obs,
                            std::span<const double> sigma, std::span<const double> p0,
                            std::span<const std::string> names, const FitOptions& opts) {
  const std::size_t n = model.n_points();
  const std::size_t k = model.n_params();
  require(y_obs.size() == n && sigma.size() == n, "fit data size mismatch");
  require(p0.size() == k && names.size() == k, "fit parameter size mismatch");
  require(n > k, "fit needs more points than parameters");

  std::vector<double> p(p0.begin(), p0.end());
  std::vector<double> y(n), jac(n * k);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(sigma[i] > 0.0, "fit sigmas must be > 0");
    w[i] = 1.0 / sigma[i];
  }

  auto ssr_of = [&](const std::vector<double>& pp) {
    model.eval(pp, y);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = (y[i] - y_obs[i]) * w[i];
      s += r * r;
    }
    return s;
  };

  FitResult res;
  res.names.assign(names.begin(), names.end());
  double ssr = ssr_of(p);
  res.residual_history.push_back(ssr);

  std::vector<double> h(k * k), g(k), step, p_try(k);
  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;

  while (iter < opts.max_iterations && !converged) {
    ++iter;
    model.jacobian(p, jac);
    std::fill(h.begin(), h.end(), 0.0);
    std::fill(g.begin(), g.end(), 0.0);
    model.eval(p, y);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = (y[i] - y_obs[i]) * w[i];
      for (std::size_t a = 0; a < k; ++a) {
        const double ja = jac[i * k + a] * w[i];
        g[a] += ja * r;
        for (std::size_t b = 0; b <= a; ++b) {
          h[a * k + b] += ja * jac[i * k + b] * w[i];
        }
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) h[a * k + b] = h[b * k + a];
    }

    // active set: a parameter resting on its bound with the gradient pushing
    // outward is frozen for this iteration, otherwise the clamped steps
    // zigzag along the boundary forever
    for (std::size_t a = 0; a < k; ++a) {
      const bool at_lo = p[a] <= model.lower_bound(a) && -g[a] < 0.0;
      const bool at_hi = p[a] >= model.upper_bound(a) && -g[a] > 0.0;
      if (at_lo || at_hi) {
        for (std::size_t b = 0; b < k; ++b) {
          h[a * k + b] = 0.0;
          h[b * k + a] = 0.0;
        }
        h[a * k + a] = 1.0;
        g[a] = 0.0;
      }
    }
    std::vector<double> neg_g(k);
    for (std::size_t a = 0; a < k; ++a) neg_g[a] = -g[a];

    bool accepted = false;
    for (int inner = 0; inner < 60 && !accepted; ++inner) {
      if (!solve_damped(h, neg_g, k, lambda, step)) {
        lambda *= 3.0;
        continue;
      }
      // project onto the box so a parameter resting on its bound does not
      // block progress in the others
      for (std::size_t a = 0; a < k; ++a) {
        p_try[a] = std::clamp(p[a] + step[a], model.lower_bound(a), model.upper_bound(a));
        step[a] = p_try[a] - p[a];
      }
      const double ssr_try = ssr_of(p_try);
      if (ssr_try <= ssr) {
        double max_rel_step = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
          max_rel_step =
              std::max(max_rel_step, std::abs(step[a]) / std::max(std::abs(p[a]), 1e-300));
        }
        const double rel_change = (ssr - ssr_try) / std::max(ssr, 1e-300);
        p = p_try;
        ssr = ssr_try;
        res.residual_history.push_back(ssr);
        accepted = true;
        lambda = std::max(lambda * 0.3, 1e-12);
        if (max_rel_step < opts.rel_step_tol || rel_change < opts.rel_residual_tol) {
          converged = true;
        }
      } else {
        lambda *= 3.0;
      }
    }
    if (!accepted) {
      // no downhill step exists at any damping: local minimum
      converged = true;
    }
  }

  res.params = p;
  res.chi2 = ssr;
  res.chi2_reduced = ssr / static_cast<double>(n - k);
  res.n_iter = iter;
  res.converged = converged;

  if (!converged) {
    res.sigmas.assign(k, 0.0);
    throw FitNotConverged("fit did not converge within max iterations", res);
  }

  // covariance of the linearized problem at the optimum
  model.jacobian(p, jac);
  std::fill(h.begin(), h.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      const double ja = jac[i * k + a] * w[i];
      for (std::size_t b = 0; b <= a; ++b) h[a * k + b] += ja * jac[i * k + b] * w[i];
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) h[a * k + b] = h[b * k + a];
  }
  std::vector<double> cov;
  res.sigmas.assign(k, 0.0);
  if (invert_spd(h, k, cov)) {
    for (std::size_t a = 0; a < k; ++a) {
      res.sigmas[a] = std::sqrt(std::max(0.0, cov[a * k + a]));
    }
  }
  return res;
}

namespace {

class LorentzianCountsModel : public LeastSquaresModel {
 public:
  LorentzianCountsModel(std::span<const double> f, double dwell) : f_(f.begin(), f.end()),
                                                                   dwell_(dwell) {}
  std::size_t n_points() const override { return f_.size(); }
  std::size_t n_params() const override { return 4; }

  void eval(std::span<const double> p, std::span<double> y) const override {
    const double off = p[0], amp = p[1], c = p[2], w = p[3];
    const double q = 0.25 * w * w;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      const double x = f_[i] - c;
      y[i] = dwell_ * (off + amp * q / (x * x + q));
    }
  }

  void jacobian(std::span<const double> p, std::span<double> jac) const override {
    const double amp = p[1], c = p[2], w = p[3];
    const double q = 0.25 * w * w;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      const double x = f_[i] - c;
      const double den = x * x + q;
      const double h = q / den;
      jac[i * 4 + 0] = dwell_;
      jac[i * 4 + 1] = dwell_ * h;
      jac[i * 4 + 2] = dwell_ * amp * 2.0 * x * q / (den * den);
      jac[i * 4 + 3] = dwell_ * amp * x * x / (den * den) * (0.5 * w);
    }
  }

  double lower_bound(std::size_t i) const override {
    switch (i) {
      case 0: return 0.0;        // offset rate
      case 1: return 1e-12;      // amplitude
      case 3: return 1e3;        // fwhm: 1 kHz floor
      default: return -1e300;
    }
  }

 private:
  std::vector<double> f_;
  double dwell_;
};

}  // namespace

FitResult fit_lorentzian(const mc::Spectrum& spectrum, const std::optional<LorentzianInit>& init,
                         const FitOptions& opts) {
  const std::size_t n = spectrum.freq.size();
  require(n >= 5, "fit_lorentzian needs at least 5 points");
  require(spectrum.dwell > 0.0, "spectrum dwell must be > 0");
  for (auto c : spectrum.counts) require(c >= 0, "counts must be nonnegative");

  std::vector<double> y_obs(n), sig(n);
  for (std::size_t i = 0; i < n; ++i) {
    y_obs[i] = static_cast<double>(spectrum.counts[i]);
    sig[i] = std::sqrt(std::max(y_obs[i], 1.0));
  }

  LorentzianInit p0{};
  if (init) {
    p0 = *init;
  } else {
    const auto rates = spectrum.rate();
    // tail baseline: outer 10% of points on each side
    const std::size_t tail = std::max<std::size_t>(1, n / 10);
    double base = 0.0;
    for (std::size_t i = 0; i < tail; ++i) base += rates[i] + rates[n - 1 - i];
    base /= static_cast<double>(2 * tail);

    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (rates[i] > rates[imax]) imax = i;
    }
    const double amp = rates[imax] - base;
    const double half = base + 0.5 * amp;
    std::size_t lo = imax, hi = imax;
    while (lo > 0 && rates[lo] > half) --lo;
    while (hi + 1 < n && rates[hi] > half) ++hi;
    double fwhm = spectrum.freq[hi] - spectrum.freq[lo];
    if (!(fwhm > 0.0)) fwhm = 0.1 * (spectrum.freq.back() - spectrum.freq.front());

    // peak significance: summed excess over the half-max span vs its noise
    double signal = 0.0, noise_var = 0.0;
    const double span = std::max(fwhm, spectrum.freq[1] - spectrum.freq[0]);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(spectrum.freq[i] - spectrum.freq[imax]) <= span) {
        signal += y_obs[i] - base * spectrum.dwell;
        noise_var += std::max(y_obs[i], 1.0);
      }
    }
    if (!(amp > 0.0) || signal < 5.0 * std::sqrt(noise_var)) {
      throw DomainError("fit_lorentzian: no peak found (flat spectrum)");
    }
    p0 = {std::max(base, 0.0), amp, spectrum.freq[imax], fwhm};
  }

  LorentzianCountsModel model(spectrum.freq, spectrum.dwell);
  const std::vector<double> start{p0.offset_rate, p0.amplitude, p0.center, p0.fwhm};
  const std::vector<std::string> names{"offset", "amplitude", "center", "fwhm"};
  return fit_least_squares(model, y_obs, sig, start, names, opts);
}

namespace {

// Gauss-Legendre nodes for the per-bin model average. A rebinned histogram
// bin is wide compared to the interference feature, and the |tau| cusp sits
// inside the central bin; evaluating the model at bin centers instead of
// averaging it over the bin biases xi low by >10% at 1 ns bins. Bins
// containing tau = 0 are split there so each segment is smooth.
struct BinQuadrature {
  std::vector<double> node_tau;     // |tau| at each node (all terms are even)
  std::vector<double> node_weight;  // normalized: weights of one bin sum to 1
  std::vector<std::size_t> offset;  // bin i uses nodes [offset[i], offset[i+1])

  BinQuadrature(std::span<const double> centers, std::span<const double> widths) {
    static constexpr double gx[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
    static constexpr double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    offset.push_back(0);
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double lo = centers[i] - 0.5 * widths[i];
      const double hi = centers[i] + 0.5 * widths[i];
      auto add_segment = [&](double a, double b, double frac) {
        for (int m = 0; m < 3; ++m) {
          node_tau.push_back(std::abs(a + (b - a) * gx[m]));
          node_weight.push_back(frac * gw[m]);
        }
      };
      if (lo < 0.0 && hi > 0.0) {
        add_segment(lo, 0.0, -lo / (hi - lo));
        add_segment(0.0, hi, hi / (hi - lo));
      } else {
        add_segment(lo, hi, 1.0);
      }
      offset.push_back(node_tau.size());
    }
  }
};

// Shared implementation of the auto/cross g2 models. Parameters are
// (baseline, a, tau1, tau2[, xi]); dilution and the interference envelope
// are held fixed. Model values are bin averages via the quadrature above.
class G2HistModel : public LeastSquaresModel {
 public:
  G2HistModel(std::span<const double> tau, std::span<const double> widths, G2Model kind,
              const G2Fixed& fixed)
      : tau_(tau.begin(), tau.end()), quad_(tau, widths), kind_(kind), fixed_(fixed) {
    fit_xi_ = (kind_ == G2Model::kCross) && !fixed_.fixed_xi.has_value();
  }

  std::size_t n_points() const override { return tau_.size(); }
  std::size_t n_params() const override { return fit_xi_ ? 5 : 4; }

  void eval(std::span<const double> p, std::span<double> y) const override {
    const double B = p[0], a = p[1], t1 = p[2], t2 = p[3];
    const double xi = current_xi(p);
    const double Q = fixed_.dilution;
    const double half = (kind_ == G2Model::kAuto) ? 1.0 : 0.5;
    for (std::size_t i = 0; i < tau_.size(); ++i) {
      double u = 0.0;
      for (std::size_t n = quad_.offset[i]; n < quad_.offset[i + 1]; ++n) {
        const double at = quad_.node_tau[n];
        double un = half * ((1.0 + a) * std::exp(-at / t1) - a * std::exp(-at / t2));
        if (kind_ == G2Model::kCross) un += 0.5 * xi * beat(at);
        u += quad_.node_weight[n] * un;
      }
      y[i] = B * (1.0 - Q * u);
    }
  }

  void jacobian(std::span<const double> p, std::span<double> jac) const override {
    const double B = p[0], a = p[1], t1 = p[2], t2 = p[3];
    const double xi = current_xi(p);
    const double Q = fixed_.dilution;
    const double half = (kind_ == G2Model::kAuto) ? 1.0 : 0.5;
    const std::size_t k = n_params();
    for (std::size_t i = 0; i < tau_.size(); ++i) {
      double u = 0.0, de_a = 0.0, de_t1 = 0.0, de_t2 = 0.0, de_xi = 0.0;
      for (std::size_t n = quad_.offset[i]; n < quad_.offset[i + 1]; ++n) {
        const double at = quad_.node_tau[n];
        const double w = quad_.node_weight[n];
        const double e1 = std::exp(-at / t1);
        const double e2 = std::exp(-at / t2);
        double un = half * ((1.0 + a) * e1 - a * e2);
        if (kind_ == G2Model::kCross) {
          const double bt = beat(at);
          un += 0.5 * xi * bt;
          de_xi += w * bt;
        }
        u += w * un;
        de_a += w * half * (e1 - e2);
        de_t1 += w * half * (1.0 + a) * e1 * at / (t1 * t1);
        de_t2 += w * half * a * e2 * at / (t2 * t2);
      }
      jac[i * k + 0] = 1.0 - Q * u;
      jac[i * k + 1] = -B * Q * de_a;
      jac[i * k + 2] = -B * Q * de_t1;
      jac[i * k + 3] = B * Q * de_t2;
      if (fit_xi_) jac[i * k + 4] = -B * Q * 0.5 * de_xi;
    }
  }

  double lower_bound(std::size_t i) const override {
    switch (i) {
      case 0: return 1e-9;   // baseline
      case 1: return 0.0;    // a
      case 2: return 0.2e-9; // tau1
      case 3: return 1e-9;   // tau2
      case 4: return -1.0;   // xi may fit slightly negative under noise
      default: return -1e300;
    }
  }

  double upper_bound(std::size_t i) const override {
    const double tmax = std::abs(tau_.front());
    switch (i) {
      case 0: return 100.0;
      case 1: return 20.0;
      case 2: return tmax;        // tau1
      case 3: return 2.0 * tmax;  // beyond this tau2 degenerates with baseline
      case 4: return 1.5;
      default: return 1e300;
    }
  }

  double beat(double tau) const {
    const double at = std::abs(tau);
    return std::exp(-(fixed_.gamma_bar + std::numbers::pi * fixed_.env_fwhm_sum) * at) *
           std::cos(2.0 * std::numbers::pi * fixed_.delta_f0 * tau);
  }

 private:
  double current_xi(std::span<const double> p) const {
    if (kind_ != G2Model::kCross) return 0.0;
    return fit_xi_ ? p[4] : *fixed_.fixed_xi;
  }

  std::vector<double> tau_;
  BinQuadrature quad_;
  G2Model kind_;
  G2Fixed fixed_;
  bool fit_xi_ = true;
};

std::vector<double> bin_widths_of(const tcspc::CorrelationHistogram& hist) {
  std::vector<double> w(hist.size());
  for (std::size_t i = 0; i < hist.size(); ++i) w[i] = hist.exposure_at(i) * hist.bin_width;
  return w;
}

}  // namespace

namespace {

// Start values for the g2 fit: scan a coarse (tau1, tau2) grid and solve the
// weighted linear subproblem in the amplitudes exactly at every node (the
// model is linear in {baseline, baseline*a-like, xi-like} once the decay
// times are pinned). The best node seeds the constrained nonlinear fit; this
// sidesteps the near-degeneracy between the baseline and a slow bunching
// tail over a finite window.
struct G2Start {
  double baseline, a, tau1, tau2, xi;
};

G2Start g2_grid_init(const tcspc::CorrelationHistogram& hist, G2Model model,
                     const G2Fixed& fixed, const std::vector<double>& sig, bool with_xi) {
  const std::size_t n = hist.size();
  const double half = (model == G2Model::kAuto) ? 1.0 : 0.5;
  const double Q = fixed.dilution;

  const auto widths = bin_widths_of(hist);
  const BinQuadrature quad(hist.bin_centers, widths);
  const double beat_rate = fixed.gamma_bar + std::numbers::pi * fixed.env_fwhm_sum;

  const double tau1_grid[] = {2e-9, 3e-9, 4.5e-9, 6.5e-9, 9e-9, 13e-9, 18e-9};
  const double tau2_grid[] = {25e-9, 40e-9, 65e-9, 100e-9, 160e-9};

  G2Start best{1.0, 0.2, 6e-9, 60e-9, 0.5};
  double best_ssr = std::numeric_limits<double>::infinity();

  // y = B (1 - Q half e1) - (B a) Q half (e1 - e2) - (B xi) Q/2 beat:
  // linear in (B, B a, B xi) with the dip-depth tie to the baseline kept.
  std::vector<double> basis0(n), basis1(n), basis2(n);
  for (double t1 : tau1_grid) {
    for (double t2 : tau2_grid) {
      if (t2 <= 1.5 * t1) continue;
      const std::size_t nb = with_xi ? 3 : 2;
      for (std::size_t i = 0; i < n; ++i) {
        double e1 = 0.0, e2 = 0.0, eb = 0.0;
        for (std::size_t m = quad.offset[i]; m < quad.offset[i + 1]; ++m) {
          const double at = quad.node_tau[m];
          const double w = quad.node_weight[m];
          e1 += w * std::exp(-at / t1);
          e2 += w * std::exp(-at / t2);
          if (model == G2Model::kCross) {
            eb += w * std::exp(-beat_rate * at) *
                  std::cos(2.0 * std::numbers::pi * fixed.delta_f0 * at);
          }
        }
        basis0[i] = 1.0 - Q * half * e1 -
                    (fixed.fixed_xi ? Q * 0.5 * (*fixed.fixed_xi) * eb : 0.0);
        basis1[i] = -Q * half * (e1 - e2);
        basis2[i] = with_xi ? -Q * 0.5 * eb : 0.0;
      }
      double ata[9] = {0}, atb[3] = {0};
      for (std::size_t i = 0; i < n; ++i) {
        const double w = 1.0 / (sig[i] * sig[i]);
        const double bas[3] = {basis0[i], basis1[i], basis2[i]};
        for (std::size_t a = 0; a < nb; ++a) {
          atb[a] += w * bas[a] * hist.g2[i];
          for (std::size_t b = 0; b <= a; ++b) ata[a * 3 + b] += w * bas[a] * bas[b];
        }
      }
      std::vector<double> mat(nb * nb), rhs(nb), coef;
      for (std::size_t a = 0; a < nb; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
          mat[a * nb + b] = ata[std::max(a, b) * 3 + std::min(a, b)];
        }
        rhs[a] = atb[a];
      }
      if (!solve_damped(mat, rhs, nb, 1e-12, coef)) continue;
      double ssr = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double y = coef[0] * basis0[i] + coef[1] * basis1[i];
        if (with_xi) y += coef[2] * basis2[i];
        const double r = (y - hist.g2[i]) / sig[i];
        ssr += r * r;
      }
      if (ssr < best_ssr) {
        best_ssr = ssr;
        const double B = std::max(coef[0], 1e-6);
        best = {B, std::clamp(coef[1] / B, 0.0, 10.0), t1, t2,
                with_xi ? std::clamp(coef[2] / B, -0.5, 1.4) : 0.0};
      }
    }
  }
  return best;
}

}  // namespace

FitResult fit_g2(const tcspc::CorrelationHistogram& hist, G2Model model, const G2Fixed& fixed,
                 const FitOptions& opts) {
  require(hist.normalized, "fit_g2 needs a normalized histogram");
  require(hist.norm_denom > 0.0, "fit_g2: histogram has no counts");
  require(fixed.dilution > 0.0 && fixed.dilution <= 1.0, "dilution must be in (0,1]");
  const std::size_t n = hist.size();
  require(n >= 16, "fit_g2 needs more bins");

  std::vector<double> sig(n);
  for (std::size_t i = 0; i < n; ++i) {
    sig[i] = std::sqrt(std::max(static_cast<double>(hist.counts[i]), 1.0)) / hist.denom_at(i);
  }

  const bool with_xi = (model == G2Model::kCross) && !fixed.fixed_xi.has_value();
  const G2Start s = g2_grid_init(hist, model, fixed, sig, with_xi);

  std::vector<double> p0;
  std::vector<std::string> names;
  if (with_xi) {
    p0 = {s.baseline, s.a, s.tau1, s.tau2, s.xi};
    names = {"baseline", "a", "tau1", "tau2", "xi"};
  } else {
    p0 = {s.baseline, s.a, s.tau1, s.tau2};
    names = {"baseline", "a", "tau1", "tau2"};
  }

  G2HistModel m(hist.bin_centers, bin_widths_of(hist), model, fixed);
  return fit_least_squares(m, hist.g2, sig, p0, names, opts);
}

double g2_auto_fit_curve(const FitResult& fit, double dilution, double tau) {
  const double at = std::abs(tau);
  const double a = fit.param("a");
  const double u = (1.0 + a) * std::exp(-at / fit.param("tau1")) -
                   a * std::exp(-at / fit.param("tau2"));
  return fit.param("baseline") * (1.0 - dilution * u);
}

double g2_cross_fit_curve(const FitResult& fit, const G2Fixed& fixed, double tau) {
  const double at = std::abs(tau);
  const double a = fit.param("a");
  const double xi = fixed.fixed_xi ? *fixed.fixed_xi : fit.param("xi");
  const double beat =
      std::exp(-(fixed.gamma_bar + std::numbers::pi * fixed.env_fwhm_sum) * at) *
      std::cos(2.0 * std::numbers::pi * fixed.delta_f0 * tau);
  const double u = 0.5 * ((1.0 + a) * std::exp(-at / fit.param("tau1")) -
                          a * std::exp(-at / fit.param("tau2"))) +
                   0.5 * xi * beat;
  return fit.param("baseline") * (1.0 - fixed.dilution * u);
}

}  // namespace homsim::fitting
