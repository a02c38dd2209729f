#include "homsim/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace homsim::kinetics {

namespace {

// Three real roots of x^3 + c2 x^2 + c1 x + c0 via the trigonometric method,
// polished with Newton steps. Throws if the roots are not all real (a strong
// shelving cycle can in principle produce complex relaxation rates; no
// supported parameter regime does).
std::array<double, 3> real_cubic_roots(double c2, double c1, double c0) {
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  std::array<double, 3> x{};
  if (std::abs(p) < 1e-30) {
    const double r = std::cbrt(-q);
    x = {r, r, r};
  } else {
    if (p > 0.0) throw DomainError("emission chain has oscillatory relaxation (complex rates)");
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      x[k] = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
    }
  }
  for (auto& xi : x) {
    double r = xi - c2 / 3.0;
    for (int it = 0; it < 3; ++it) {
      const double f = ((r + c2) * r + c1) * r + c0;
      const double df = (3.0 * r + 2.0 * c2) * r + c1;
      if (df != 0.0) r -= f / df;
    }
    xi = r;
  }
  std::sort(x.begin(), x.end());
  return x;
}

}  // namespace

ChainAnalysis analyze(const EmissionDynamics& dyn) {
  dyn.validate();
  const double p = dyn.pump_rate;
  const double g = dyn.gamma;
  const double b = dyn.shelf_prob;
  const double d = 1.0 / dyn.shelf_lifetime;

  const double sum = p + g + d;                  // -(lambda1 + lambda2)
  const double prod = g * d + p * d + p * g * b; // lambda1 * lambda2
  const double disc = sum * sum - 4.0 * prod;
  if (disc < 0.0) throw DomainError("emission chain has oscillatory relaxation (complex rates)");
  const double root = std::sqrt(disc);

  ChainAnalysis out;
  out.lambda_fast = 0.5 * (sum + root);
  out.lambda_slow = 0.5 * (sum - root);
  out.p_excited_ss = p * d / prod;
  out.emission_rate = g * out.p_excited_ss;
  return out;
}

AutocorrParams dynamics_to_autocorr(const EmissionDynamics& dyn) {
  const ChainAnalysis ca = analyze(dyn);
  const double p = dyn.pump_rate;
  const double b = dyn.shelf_prob;

  // P_e(t)/P_e_ss = 1 - (1+a) exp(-lf t) + a exp(-ls t), started from the
  // post-emission mixture; a follows from the initial slope p(1-b).
  const double slope = p * (1.0 - b) / ca.p_excited_ss;
  const double a = (slope - ca.lambda_fast) / (ca.lambda_fast - ca.lambda_slow);

  AutocorrParams out;
  out.a = std::max(0.0, a);
  out.tau1 = 1.0 / ca.lambda_fast;
  out.tau2 = 1.0 / ca.lambda_slow;
  return out;
}

EmissionDynamics autocorr_to_dynamics(const AutocorrParams& target, double gamma) {
  target.validate();
  require(gamma > 0.0 && std::isfinite(gamma), "gamma must be > 0");
  require(target.tau1 < target.tau2, "tau1 must be shorter than tau2");
  const double lf = 1.0 / target.tau1;
  const double ls = 1.0 / target.tau2;
  require(lf > gamma, "antibunching rate 1/tau1 must exceed gamma");

  const double sum = lf + ls;
  const double prod = lf * ls;
  // From the amplitude relation: (1-b) prod / d = a (lf - ls) + lf =: rhs
  const double rhs = target.a * (lf - ls) + lf;

  if (target.a == 0.0) {
    // Two-level limit: the slow mode carries zero amplitude.
    EmissionDynamics dyn;
    dyn.pump_rate = lf - gamma;
    dyn.gamma = gamma;
    dyn.shelf_prob = 0.0;
    dyn.shelf_lifetime = target.tau2;
    return dyn;
  }

  // d^2 - d (sum - gamma) + prod (gamma (sum - gamma) - prod) / (gamma rhs - prod) = 0
  const double denom = gamma * rhs - prod;
  require(std::abs(denom) > 1e-300, "degenerate autocorrelation target");
  const double k = prod * (gamma * (sum - gamma) - prod) / denom;
  const double half = 0.5 * (sum - gamma);
  const double disc = half * half - k;
  require(disc >= 0.0, "autocorrelation target unreachable for this gamma");
  const double sq = std::sqrt(disc);

  for (const double d : {half - sq, half + sq}) {
    if (!(d > 0.0)) continue;
    const double p = sum - gamma - d;
    if (!(p > 0.0)) continue;
    const double b = 1.0 - rhs * d / prod;
    if (b < 0.0 || b >= 1.0) continue;
    EmissionDynamics dyn;
    dyn.pump_rate = p;
    dyn.gamma = gamma;
    dyn.shelf_prob = b;
    dyn.shelf_lifetime = 1.0 / d;
    // Round-trip guard against picking a spurious branch.
    const AutocorrParams back = dynamics_to_autocorr(dyn);
    if (std::abs(back.tau1 - target.tau1) < 1e-6 * target.tau1 &&
        std::abs(back.a - target.a) < 1e-6 * std::max(1.0, target.a)) {
      return dyn;
    }
  }
  throw DomainError("autocorrelation target unreachable for this gamma");
}

IntervalSampler::IntervalSampler(const EmissionDynamics& dyn, double efficiency) {
  dyn.validate();
  require(efficiency > 0.0 && efficiency <= 1.0, "efficiency must be in (0,1]");
  pump_ = dyn.pump_rate;
  gamma_ = dyn.gamma;
  shelf_prob_ = dyn.shelf_prob;
  shelf_rate_ = 1.0 / dyn.shelf_lifetime;
  efficiency_ = efficiency;
  renewal_ = make_mixture(false);
  start_ = make_mixture(true);
}

IntervalSampler::Mixture IntervalSampler::make_mixture(bool from_ground) const {
  const double p = pump_;
  const double g = gamma_;
  const double b = shelf_prob_;
  const double d = shelf_rate_;
  const double eps = efficiency_;

  // Laplace transform of the interval: eps * N(s) / C(s) with
  //   C(s) = (s+p)(s+g)(s+d) - (1-eps) N_renewal(s)
  //   N_renewal(s) = p g (d + (1-b) s)      (post-emission mixture start)
  //   N_start(s)   = p g (d + s)            (ground-state start)
  const double c2 = p + g + d;
  const double c1 = p * g + p * d + g * d - (1.0 - eps) * (1.0 - b) * p * g;
  const double c0 = eps * p * g * d;

  auto roots = real_cubic_roots(c2, c1, c0);
  Mixture m;
  for (int i = 0; i < 3; ++i) {
    double li = -roots[i];
    require(li > 0.0, "interval sampler: nonpositive relaxation rate");
    m.lambda[i] = li;
  }
  // Nearly equal rates would need resonant (t e^{-lt}) terms; nudge instead.
  for (int i = 0; i < 2; ++i) {
    if (std::abs(m.lambda[i] - m.lambda[i + 1]) < 1e-9 * m.lambda[2]) {
      m.lambda[i] *= 1.0 - 1e-7;
      m.lambda[i + 1] *= 1.0 + 1e-7;
    }
  }

  auto numer = [&](double s) {
    return from_ground ? p * g * (d + s) : p * g * (d + (1.0 - b) * s);
  };
  auto cderiv = [&](double s) {
    // C'(s) = 3 s^2 + 2 c2 s + c1
    return (3.0 * s + 2.0 * c2) * s + c1;
  };

  double mass = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double s = -m.lambda[i];
    m.weight[i] = eps * numer(s) / cderiv(s);
    mass += m.weight[i] / m.lambda[i];
  }
  require(std::abs(mass - 1.0) < 1e-6, "interval sampler: density does not normalize");

  m.mean = 0.0;
  for (int i = 0; i < 3; ++i) m.mean += m.weight[i] / (m.lambda[i] * m.lambda[i]);

  // Rejection envelope from the positive components.
  double pos_mass = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (m.weight[i] > 0.0) {
      m.comp_index[m.n_pos] = i;
      pos_mass += m.weight[i] / m.lambda[i];
      m.comp_cum[m.n_pos] = pos_mass;
      ++m.n_pos;
    }
  }
  require(m.n_pos > 0, "interval sampler: no positive mixture component");
  for (int i = 0; i < m.n_pos; ++i) m.comp_cum[i] /= pos_mass;

  // Beyond t_safe the negative components are below 1e-14 of the envelope and
  // every proposal is accepted without evaluating the density.
  double neg_total = 0.0;
  double lambda_neg_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (m.weight[i] < 0.0) {
      neg_total += -m.weight[i];
      lambda_neg_min = std::min(lambda_neg_min, m.lambda[i]);
    }
  }
  if (neg_total == 0.0) {
    m.t_safe = 0.0;
  } else {
    int slowest_pos = m.comp_index[0];
    for (int i = 0; i < m.n_pos; ++i) {
      if (m.lambda[m.comp_index[i]] < m.lambda[slowest_pos]) slowest_pos = m.comp_index[i];
    }
    const double dl = lambda_neg_min - m.lambda[slowest_pos];
    if (dl <= 0.0) {
      m.t_safe = std::numeric_limits<double>::infinity();
    } else {
      m.t_safe = std::log(neg_total / m.weight[slowest_pos] * 1e14 + 1.0) / dl;
    }
  }
  return m;
}

double IntervalSampler::sample(const Mixture& m, Rng& rng) const {
  for (;;) {
    const double u = rng.uniform();
    int c = 0;
    while (c + 1 < m.n_pos && u > m.comp_cum[c]) ++c;
    const int i = m.comp_index[c];
    const double t = rng.exponential(m.lambda[i]);
    if (t >= m.t_safe) return t;
    double f = 0.0, env = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double e = m.weight[k] * std::exp(-m.lambda[k] * t);
      f += e;
      if (m.weight[k] > 0.0) env += e;
    }
    if (f > 0.0 && rng.uniform() * env <= f) return t;
  }
}

double IntervalSampler::density(double t) const {
  if (t < 0.0) return 0.0;
  double f = 0.0;
  for (int k = 0; k < 3; ++k) f += renewal_.weight[k] * std::exp(-renewal_.lambda[k] * t);
  return std::max(0.0, f);
}

double IntervalSampler::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  double F = 0.0;
  for (int k = 0; k < 3; ++k) {
    F += renewal_.weight[k] / renewal_.lambda[k] * (1.0 - std::exp(-renewal_.lambda[k] * t));
  }
  return std::clamp(F, 0.0, 1.0);
}

}  // namespace homsim::kinetics
