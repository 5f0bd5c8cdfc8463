#pragma once

#include <cmath>
#include <vector>

#include "core.hpp"
#include "curve.hpp"
#include "phases.hpp"
#include "primes.hpp"
#include "quadrature.hpp"
#include "window.hpp"

namespace zetascope {

/// exp(-1/(1-x^2)) on (-1, 1), zero outside.
inline double bump_shape(double x) {
  double d = 1.0 - x * x;
  return d > 0 ? std::exp(-1.0 / d) : 0.0;
}

/// Normalizing constant c = 1 / integral of the bump shape over [-1, 1].
inline double bump_normalizer() {
  static const double c = [] {
    // the shape is flat at +-1, so split there and at the center
    auto r = quad::adaptive(bump_shape, std::vector<double>{-1.0, -0.9, -0.5, 0.0, 0.5, 0.9, 1.0}, 1e-14);
    return 1.0 / r.value;
  }();
  return c;
}

/// lambda(x) = c exp(-1/(1-x^2)) with unit integral and support [-1, 1].
inline double bump(double x) { return bump_normalizer() * bump_shape(x); }

struct MollifierSpec {
  double delta = 0;
  double Q = 2;
  int M = 100;
  double normalization = 0;  // set by validate()
  bool unit_profile = false; // debug: every factor replaced by 1

  /// delta = 0 selects 1/Q.
  static MollifierSpec make(double Q, int M, double delta = 0) {
    MollifierSpec s;
    s.Q = Q;
    s.M = M;
    if (delta == 0) {
      require(Q > 2, "the default delta = 1/Q needs Q > 2; pass delta explicitly");
      delta = 1.0 / Q;
    }
    s.delta = delta;
    s.validate();
    return s;
  }

  void validate() {
    require(delta > 0 && delta < 0.5, "delta must lie in (0, 1/2)");
    require(Q >= 2, "Q must be at least 2");
    require(M >= 1, "M must be positive");
    normalization = bump_normalizer();
    require(normalization * std::exp(-1.0) <= 1.0, "bump maximum exceeds 1");
  }
};

/// Periodized lambda_delta(u) = lambda(u/delta)/delta on the unit circle.
inline double lambda_delta(double u, double delta) {
  double r = u - std::round(u);
  return bump(r / delta) / delta;
}

struct FourierData {
  std::vector<double> alpha;  // alpha_n for n = 0..M; alpha_{-n} = alpha_n
  double max_quad_error = 0;
  double decay_constant = 0;      // max_{n >= 1} |alpha_n| n^2 delta^3
  double decay_constant_d2 = 0;   // max_{n >= 1} |alpha_n| n^2 delta^2
  double sum_abs = 0;             // sum_{|n| <= M} |alpha_n|
  double log_beta_norm = 0;       // pi(Q) log(sum_abs): bound for sum |beta_n|
};

/// alpha_n = integral over [-1/2, 1/2] of lambda_delta(theta) e^{-2 pi i n theta}
///         = integral over [-1, 1] of lambda(x) cos(2 pi n delta x).
inline double fourier_coefficient(long n, double delta, double* err = nullptr) {
  double w = two_pi * double(n) * delta;
  auto f = [&](double x) { return bump(x) * std::cos(w * x); };
  // one panel per half-oscillation, at least the fixed breaks near the flat ends
  int pieces = std::max(8, int(std::ceil(std::abs(w) / pi)) * 2);
  std::vector<double> br;
  for (int i = 0; i <= pieces; ++i) br.push_back(-1.0 + 2.0 * i / pieces);
  auto r = quad::adaptive(f, br, 1e-14);
  if (err) *err = r.error;
  return r.value;
}

inline FourierData fourier_coeffs(const MollifierSpec& spec) {
  FourierData fd;
  fd.alpha.resize(spec.M + 1);
  std::vector<double> errs(spec.M + 1);
  parallel_for(fd.alpha.size(), resolve_threads(), [&](std::size_t n) {
    fd.alpha[n] = fourier_coefficient(long(n), spec.delta, &errs[n]);
  });
  for (double e : errs) fd.max_quad_error = std::max(fd.max_quad_error, e);
  if (fd.max_quad_error > 1e-10 || std::abs(fd.alpha[0] - 1.0) > 1e-10)
    throw error(errc::quadrature_failure, "Fourier quadrature error " + std::to_string(fd.max_quad_error));
  fd.sum_abs = std::abs(fd.alpha[0]);
  for (int n = 1; n <= spec.M; ++n) {
    double a = std::abs(fd.alpha[n]);
    fd.sum_abs += 2 * a;
    double n2 = double(n) * n;
    fd.decay_constant = std::max(fd.decay_constant, a * n2 * std::pow(spec.delta, 3));
    fd.decay_constant_d2 = std::max(fd.decay_constant_d2, a * n2 * spec.delta * spec.delta);
  }
  fd.log_beta_norm = double(primes_up_to(std::uint64_t(spec.Q)).size()) * std::log(fd.sum_abs);
  return fd;
}

/// Truncated Fourier series sum_{|n| <= M} alpha_n e^{2 pi i n theta} (real by symmetry).
inline double fourier_partial_sum(const FourierData& fd, double theta) {
  double s = fd.alpha[0];
  for (std::size_t n = 1; n < fd.alpha.size(); ++n) s += 2 * fd.alpha[n] * std::cos(two_pi * double(n) * theta);
  return s;
}

/// L_Q(theta) = prod_{p <= Q} lambda_delta(theta_p).
inline double L_Q(const PhaseAssignment& theta, const MollifierSpec& spec, const PrimeTable& table) {
  require(double(table.limit) >= spec.Q, "prime table must reach Q");
  if (spec.unit_profile) return 1.0;
  double v = 1;
  for (std::size_t i = 0, n = table.count_upto(spec.Q); i < n; ++i) {
    v *= lambda_delta(theta(table.primes[i]), spec.delta);
    if (v == 0) break;
  }
  return v;
}

struct LogScale {
  double log_value = 0;
  double value = 0;
};

/// Q exp(3 pi(Q) log(1/delta)) / (M log Q), evaluated in logs.
inline LogScale truncation_remainder(const MollifierSpec& spec, const PrimeTable& table) {
  require(double(table.limit) >= spec.Q, "prime table must reach Q");
  double piQ = double(table.count_upto(spec.Q));
  LogScale r;
  r.log_value = std::log(spec.Q) + 3 * piQ * std::log(1 / spec.delta) - std::log(double(spec.M)) -
                std::log(std::log(spec.Q));
  r.value = std::exp(r.log_value);
  return r;
}

struct CurveMean {
  double mean = 0;
  double deviation = 0;  // |mean - 1|
  double quad_error = 0; // absolute error estimate on the mean
  std::size_t intervals = 0;
};

namespace detail {

using Interval = std::pair<double, double>;

/// {t in [a, b] : dist(t c - theta, Z) < delta}.
inline std::vector<Interval> support_intervals(double c, double theta, double delta, double a, double b) {
  std::vector<Interval> out;
  long k0 = long(std::floor(a * c - theta - delta)), k1 = long(std::ceil(b * c - theta + delta));
  for (long k = k0; k <= k1; ++k) {
    double lo = (double(k) + theta - delta) / c, hi = (double(k) + theta + delta) / c;
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    if (hi > lo) out.emplace_back(lo, hi);
  }
  return out;
}

inline std::vector<Interval> intersect(const std::vector<Interval>& x, const std::vector<Interval>& y) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    double lo = std::max(x[i].first, y[j].first), hi = std::min(x[i].second, y[j].second);
    if (hi > lo) out.emplace_back(lo, hi);
    (x[i].second < y[j].second) ? ++i : ++j;
  }
  return out;
}

}  // namespace detail

/// (1/H) integral_T^{T+H} L_Q(gamma(t) - theta) dt, integrating only where every
/// factor is nonzero.
inline CurveMean mean_over_curve(const MollifierSpec& spec, const ScanWindow& window, const PhaseAssignment& theta) {
  window.validate();
  auto table = primes_up_to(std::uint64_t(spec.Q));
  require(table.size() <= 6, "mean_over_curve supports at most 6 primes");
  const double a = window.T, b = window.T + window.H;
  std::vector<SplitConstant> cs;
  std::vector<double> th;
  for (prime_t p : table.primes) {
    cs.push_back(log_over_two_pi(p));
    th.push_back(theta(p));
  }
  std::vector<detail::Interval> support = {{a, b}};
  if (!spec.unit_profile)
    for (std::size_t i = 0; i < cs.size(); ++i)
      support = detail::intersect(support, detail::support_intervals(cs[i].hi + cs[i].lo, th[i], spec.delta, a, b));

  auto integrand = [&](double t) {
    if (spec.unit_profile) return 1.0;
    double v = 1;
    for (std::size_t i = 0; i < cs.size(); ++i) v *= lambda_delta(frac_product(t, cs[i]) - th[i], spec.delta);
    return v;
  };
  const double tol = 1e-7 * window.H;  // absolute error 1e-7 on the mean
  std::vector<double> vals(support.size()), errs(support.size());
  std::vector<char> ok(support.size(), 1);
  double per = tol / double(std::max<std::size_t>(1, support.size()));
  parallel_for(support.size(), resolve_threads(), [&](std::size_t k) {
    auto r = quad::adaptive(integrand, support[k].first, support[k].second, per);
    vals[k] = r.value;
    errs[k] = r.error;
    ok[k] = r.converged;
  });
  CurveMean m;
  m.intervals = support.size();
  double err = 0;
  for (std::size_t k = 0; k < errs.size(); ++k) {
    err += errs[k];
    if (!ok[k]) throw error(errc::quadrature_failure, "curve quadrature did not converge");
  }
  m.mean = pairwise_sum(vals) / window.H;
  m.quad_error = err / window.H;
  if (m.quad_error > 1e-6) throw error(errc::quadrature_failure, "curve quadrature error above 1e-6");
  m.deviation = std::abs(m.mean - 1.0);
  return m;
}

}  // namespace zetascope
