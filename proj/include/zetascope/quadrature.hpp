#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "core.hpp"

namespace zetascope::quad {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
struct gauss_legendre {
  std::vector<double> x, w;

  explicit gauss_legendre(int n) : x(n), w(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1, p1 = z;
        dp = n * (z * p1 - p0) / (z * z - 1);
        double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      // recompute derivative at the converged node
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = w[n - 1 - i] = 2.0 / ((1 - z * z) * dp * dp);
    }
  }
};

inline const gauss_legendre& gl20() {
  static const gauss_legendre rule(20);
  return rule;
}

template <class F>
auto panel(F&& f, double a, double b, const gauss_legendre& rule = gl20()) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  using R = decltype(f(c));
  R s{};
  for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(c + h * rule.x[i]);
  return s * h;
}

template <class R>
struct result {
  R value{};
  double error = 0;
  bool converged = true;
};

namespace detail {
template <class F, class R>
void adaptive_rec(F& f, double a, double b, R whole, double tol, int depth, result<R>& out) {
  double m = 0.5 * (a + b);
  R left = panel(f, a, m), right = panel(f, m, b);
  double err = std::abs(left + right - whole);
  if (err <= tol || depth <= 0 || b - a < 1e-14 * (1 + std::abs(a))) {
    out.value += left + right;
    out.error += err;
    if (err > tol) out.converged = false;
    return;
  }
  adaptive_rec(f, a, m, left, 0.5 * tol, depth - 1, out);
  adaptive_rec(f, m, b, right, 0.5 * tol, depth - 1, out);
}
}  // namespace detail

/// Adaptive 20-point Gauss-Legendre with panel bisection. The error estimate is
/// the difference between a panel and its two halves.
template <class F>
auto adaptive(F&& f, double a, double b, double tol, int max_depth = 40) {
  using R = decltype(f(a));
  result<R> out;
  if (a == b) return out;
  R whole = panel(f, a, b);
  detail::adaptive_rec(f, a, b, whole, tol, max_depth, out);
  return out;
}

/// Adaptive integration over consecutive break points.
template <class F>
auto adaptive(F&& f, const std::vector<double>& breaks, double tol) {
  using R = decltype(f(breaks.front()));
  result<R> out;
  std::size_t pieces = breaks.size() > 1 ? breaks.size() - 1 : 1;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto r = adaptive(f, breaks[i], breaks[i + 1], tol / pieces);
    out.value += r.value;
    out.error += r.error;
    out.converged = out.converged && r.converged;
  }
  return out;
}

/// Samples f(center + radius e^{2 pi i j / n}) for j in [0, n).
template <class F>
std::vector<cplx> circle_samples(F&& f, cplx center, double radius, std::size_t n) {
  std::vector<cplx> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(center + std::polar(radius, two_pi * j / n));
  return v;
}

/// Extends samples on n nodes to 2n nodes, evaluating only the new odd nodes.
template <class F>
std::vector<cplx> refine_circle_samples(F&& f, cplx center, double radius, const std::vector<cplx>& coarse) {
  std::size_t n = coarse.size();
  std::vector<cplx> v(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    v[2 * j] = coarse[j];
    v[2 * j + 1] = f(center + std::polar(radius, two_pi * (2 * j + 1) / (2 * n)));
  }
  return v;
}

/// Trapezoidal Cauchy formula: k-th derivative at the center from equispaced
/// samples on a circle of the given radius.
inline std::vector<cplx> cauchy_derivatives(const std::vector<cplx>& samples, double radius, int count) {
  std::size_t n = samples.size();
  std::vector<cplx> out(count);
  double fact = 1;
  for (int k = 0; k < count; ++k) {
    if (k > 0) fact *= k;
    std::vector<cplx> terms(n);
    for (std::size_t j = 0; j < n; ++j) terms[j] = samples[j] * std::polar(1.0, -two_pi * double(k * j % n) / n);
    out[k] = pairwise_sum(terms) * (fact / (n * std::pow(radius, k)));
  }
  return out;
}

}  // namespace zetascope::quad
