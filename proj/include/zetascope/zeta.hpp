#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "quadrature.hpp"

namespace zetascope {

struct ZetaEval {
  cplx value;
  double est_error = 0;
  int terms_used = 0;
  int bernoulli_order = 0;
};

/// terms = 0 and order = 0 select both automatically.
struct ZetaConfig {
  double tol = 1e-12;
  int terms = 0;
  int order = 0;
};

inline constexpr double euler_gamma = 0.57721566490153286061;

namespace detail {

inline constexpr int max_bernoulli_order = 150;

/// B_{2k}/(2k)! for k = 1..max_bernoulli_order, via 2 zeta(2k)/(2 pi)^{2k}.
inline const std::vector<double>& bernoulli_over_factorial() {
  static const std::vector<double> table = [] {
    std::vector<double> c(max_bernoulli_order + 1, 0.0);
    const double p2 = pi * pi;
    for (int k = 1; k <= max_bernoulli_order; ++k) {
      double z;
      if (k == 1)
        z = p2 / 6;
      else if (k == 2)
        z = p2 * p2 / 90;
      else if (k == 3)
        z = p2 * p2 * p2 / 945;
      else {
        z = 0;
        for (int n = 1000; n >= 2; --n) z += std::pow(double(n), -2.0 * k);
        z += 1.0;
      }
      double mag = 2.0 * z * std::exp(-2.0 * k * std::log(two_pi));
      c[k] = (k % 2 == 1) ? mag : -mag;
    }
    return c;
  }();
  return table;
}

inline ZetaEval zeta_em(cplx s, int N, int order_cap, double tol) {
  const auto& c = bernoulli_over_factorial();
  std::vector<cplx> terms;
  terms.reserve(N + 2);
  double abs_sum = 0;
  for (int n = 1; n < N; ++n) {
    cplx t = std::exp(-s * std::log(double(n)));
    abs_sum += std::abs(t);
    terms.push_back(t);
  }
  double lN = std::log(double(N));
  cplx Ns = std::exp(-s * lN);  // N^{-s}
  terms.push_back(Ns * double(N) / (s - 1.0));
  terms.push_back(0.5 * Ns);
  abs_sum += std::abs(terms[terms.size() - 2]) + std::abs(terms.back());

  // P_k = s(s+1)...(s+2k-2) N^{-s-2k+1}
  cplx P = s * Ns / double(N);
  double N2 = double(N) * N;
  double sigma = s.real();
  double best_bound = std::numeric_limits<double>::infinity();
  int used = 0;
  const int cap = std::min(order_cap, max_bernoulli_order - 1);
  for (int k = 1; k <= cap; ++k) {
    cplx T = c[k] * P;
    terms.push_back(T);
    abs_sum += std::abs(T);
    used = k;
    P *= (s + double(2 * k - 1)) * (s + double(2 * k)) / N2;
    double denom = sigma + 2 * k + 1;
    double bound = denom > 0 ? std::abs(c[k + 1] * P) * std::abs(s + double(2 * k + 1)) / denom
                             : std::numeric_limits<double>::infinity();
    best_bound = bound;
    if (order_cap < max_bernoulli_order) continue;  // fixed order
    if (bound <= 0.25 * tol || bound == 0.0) break;
    if (k > 4 && bound > 1e3 * tol && std::abs(c[k + 1] * P) > std::abs(T)) break;  // diverging
  }
  ZetaEval out;
  out.value = pairwise_sum(terms);
  out.est_error = best_bound + 4.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  out.terms_used = N;
  out.bernoulli_order = used;
  return out;
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Stirling series for log Gamma with Re z >= 15.
inline cplx lgamma_stirling(cplx z) {
  static constexpr std::array<double, 8> b = {1.0 / 12,   -1.0 / 360,        1.0 / 1260,  -1.0 / 1680,
                                              1.0 / 1188, -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0};
  cplx zi = 1.0 / z, zi2 = zi * zi, acc = 0, p = zi;
  for (double bk : b) {
    acc += bk * p;
    p *= zi2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(two_pi) + acc;
}

/// log sin(w) without overflow for large |Im w|; any branch.
inline cplx log_sin(cplx w) {
  if (std::abs(w.imag()) < 20) return std::log(std::sin(w));
  const cplx two_i(0, 2);
  if (w.imag() > 0) return -I * w - std::log(two_i) + std::log(std::exp(2.0 * I * w) - 1.0);
  return I * w - std::log(two_i) + std::log(1.0 - std::exp(-2.0 * I * w));
}

}  // namespace detail

/// log Gamma(z), continuous in the upper and lower half planes (principal on the positive axis).
inline cplx lgamma(cplx z) {
  require(!(z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real())), "lgamma pole at a nonpositive integer");
  if (z.real() >= 15) return detail::lgamma_stirling(z);
  int n = int(std::ceil(15 - z.real()));
  cplx shift = 0;
  for (int k = 0; k < n; ++k) shift += std::log(z + double(k));
  return detail::lgamma_stirling(z + double(n)) - shift;
}

/// log chi(s) for zeta(s) = chi(s) zeta(1-s), chi(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s).
inline cplx log_chi(cplx s) {
  return s * std::log(2.0) + (s - 1.0) * std::log(pi) + detail::log_sin(0.5 * pi * s) + lgamma(1.0 - s);
}

inline cplx chi(cplx s) { return std::exp(log_chi(s)); }

/// zeta(s) by Euler-Maclaurin; the reflection formula is used for Re s < -10.
inline ZetaEval zeta(cplx s, const ZetaConfig& cfg = {}) {
  if (s == cplx(1.0, 0.0)) throw error(errc::pole_at_1, "zeta has a pole at s = 1");
  require(std::isfinite(s.real()) && std::isfinite(s.imag()), "s must be finite");
  require(std::abs(s.imag()) <= 1e8, "|Im s| beyond the supported range 1e8");
  require(cfg.tol > 0, "tolerance must be positive");
  if (s.real() < 0) {
    if (s.imag() == 0 && std::fmod(-s.real(), 2.0) == 0) return {cplx(0, 0), 0, 0, 0};  // trivial zero
    cplx c = chi(s);
    auto r = zeta(1.0 - s, ZetaConfig{std::clamp(cfg.tol / std::max(1.0, std::abs(c)), 1e-14, 1e-3), cfg.terms, cfg.order});
    // log chi carries an absolute error of a few ulps of its largest term
    const double chi_rel = 16 * std::numeric_limits<double>::epsilon() * (std::abs(s) * std::log(2 + std::abs(s)) + 10);
    ZetaEval out{c * r.value, std::abs(c) * r.est_error + chi_rel * std::abs(c * r.value), r.terms_used,
                 r.bernoulli_order};
    if (out.est_error > cfg.tol)
      throw error(errc::tolerance_unreachable, "reflected evaluation error " + detail::sci(out.est_error) + " exceeds tol " + detail::sci(cfg.tol));
    return out;
  }
  int N = cfg.terms > 0 ? cfg.terms : 10 + int(std::ceil(std::abs(s.imag()) / pi + std::max(0.0, -s.real())));
  int cap = cfg.order > 0 ? cfg.order : detail::max_bernoulli_order;
  for (int attempt = 0; attempt < 5; ++attempt) {
    auto r = detail::zeta_em(s, N, cap, cfg.tol);
    if (r.est_error <= cfg.tol) return r;
    if (cfg.terms > 0) {
      throw error(errc::tolerance_unreachable, "estimated error " + detail::sci(r.est_error) + " exceeds tol " + detail::sci(cfg.tol) + " with " +
                                                   std::to_string(N) + " terms and order " +
                                                   std::to_string(r.bernoulli_order));
    }
    N *= 2;
  }
  throw error(errc::tolerance_unreachable, "tolerance " + detail::sci(cfg.tol) + " not reached at s = " + detail::sci(s.real()) + (s.imag() < 0 ? "" : "+") + detail::sci(s.imag()) + "i");
}

inline cplx zeta_value(cplx s, double tol = 1e-11) { return zeta(s, ZetaConfig{tol}).value; }

/// Riemann-Siegel theta: arg of pi^{-it/2} Gamma(1/4 + it/2).
inline double riemann_siegel_theta(double t) {
  return lgamma(cplx(0.25, 0.5 * t)).imag() - 0.5 * t * std::log(pi);
}

/// Hardy's function Z(t) = e^{i theta(t)} zeta(1/2 + it), real-valued.
inline double hardy_z(double t, double tol = 1e-11) {
  return (std::polar(1.0, riemann_siegel_theta(t)) * zeta_value(cplx(0.5, t), tol)).real();
}

struct TrackOptions {
  double tol = 1e-12;
  double max_step = 0.1;
  double min_modulus = 1e-12;
};

/// log zeta(sigma0 + it) continued along the horizontal segment from Re s = 2,
/// where the principal branch is the continuous one (|Im log zeta| <= log zeta(2) < pi),
/// so the result agrees with continuation from any abscissa further right.
inline cplx log_zeta_tracked(double sigma0, double t, const TrackOptions& opt = {}) {
  constexpr double start = 2.0;
  ZetaConfig zc{opt.tol};
  if (sigma0 >= start) return std::log(zeta(cplx(sigma0, t), zc).value);
  if (t == 0.0 && sigma0 <= 1.0)
    throw error(errc::pole_at_1, "the real-axis path to sigma0 <= 1 passes through the pole");
  double sigma = start;
  cplx w = zeta(cplx(sigma, t), zc).value;
  double im = std::arg(w);
  double h = std::min(0.05, opt.max_step);
  while (sigma > sigma0) {
    double hh = std::min(h, sigma - sigma0);
    double s_new = (hh == sigma - sigma0) ? sigma0 : sigma - hh;
    cplx wm = zeta(cplx(sigma - 0.5 * hh, t), zc).value;
    cplx wn = zeta(cplx(s_new, t), zc).value;
    if (std::abs(wm) < opt.min_modulus || std::abs(wn) < opt.min_modulus)
      throw error(errc::path_through_zero, "zeta vanishes near the tracking path at t = " + std::to_string(t));
    double a1 = std::arg(wm / w), a2 = std::arg(wn / wm);
    if (std::abs(a1) <= pi / 8 && std::abs(a2) <= pi / 8) {
      im += a1 + a2;
      sigma = s_new;
      w = wn;
      if (std::abs(a1 + a2) < pi / 32) h = std::min(2 * h, opt.max_step);
    } else {
      h *= 0.5;
      if (h < 1e-10)
        throw error(errc::path_through_zero, "argument jump on the tracking path at sigma = " + std::to_string(sigma) +
                                                 ", t = " + std::to_string(t));
    }
  }
  return {std::log(std::abs(w)), im};
}

struct DerivEstimate {
  std::vector<cplx> values;
  std::vector<double> est_error;
  int nodes = 0;
  double radius = 0;
};

struct CauchyOptions {
  double radius = 0;  // 0 selects a default
  int min_nodes = 64;
  int max_nodes = 4096;
  double rel_tol = 1e-12;
  double zeta_tol = 1e-12;
};

namespace detail {

inline DerivEstimate cauchy_converge(const std::function<std::vector<cplx>(const std::vector<cplx>&, int)>& extend,
                                     double radius, int count, const CauchyOptions& opt) {
  std::vector<cplx> samples = extend({}, opt.min_nodes);
  auto prev = quad::cauchy_derivatives(samples, radius, count);
  while (int(samples.size()) * 2 <= opt.max_nodes) {
    int n = int(samples.size()) * 2;
    samples = extend(samples, n);
    auto cur = quad::cauchy_derivatives(samples, radius, count);
    double scale = 0;
    for (auto v : samples) scale = std::max(scale, std::abs(v));
    bool ok = true;
    DerivEstimate d;
    double fact = 1;
    for (int k = 0; k < count; ++k) {
      if (k > 0) fact *= k;
      double tolk = opt.rel_tol * std::max(1.0, scale) * fact / std::pow(radius, k);
      double diff = std::abs(cur[k] - prev[k]);
      if (diff > tolk) ok = false;
      d.est_error.push_back(diff + 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale) * fact /
                                       std::pow(radius, k));
    }
    if (ok) {
      d.values = cur;
      d.nodes = int(samples.size());
      d.radius = radius;
      return d;
    }
    prev = cur;
  }
  throw error(errc::no_convergence, "circle quadrature did not converge with " + std::to_string(opt.max_nodes) + " nodes");
}

inline double default_radius(cplx s, double cap) {
  double r = cap;
  double d1 = std::abs(s - 1.0);
  if (d1 < 4 * r) r = d1 / 4;
  return r;
}

}  // namespace detail

/// zeta^{(k)}(s) for k < count by trapezoidal Cauchy quadrature on zeta.
inline DerivEstimate zeta_derivs(cplx s, int count, const CauchyOptions& opt = {}) {
  require(count >= 1, "need at least one derivative order");
  double r = opt.radius > 0 ? opt.radius : detail::default_radius(s, 0.25);
  require(std::abs(s - 1.0) > r, "the circle encloses the pole at 1");
  ZetaConfig zc{opt.zeta_tol};
  auto f = [&](cplx z) { return zeta(z, zc).value; };
  auto extend = [&](const std::vector<cplx>& prev, int n) {
    if (prev.empty()) return quad::circle_samples(f, s, r, n);
    return quad::refine_circle_samples(f, s, r, prev);
  };
  return detail::cauchy_converge(extend, r, count, opt);
}

/// d^k/ds^k log zeta(s) at s = sigma0 + it for k < count. log zeta on the circle
/// is continued around from the tracked value at s + r; a nonzero winding means a
/// zero lies inside the circle.
inline DerivEstimate log_zeta_derivs(double sigma0, double t, int count, const CauchyOptions& opt = {}) {
  require(count >= 1, "need at least one derivative order");
  cplx s(sigma0, t);
  double r = opt.radius > 0 ? opt.radius : std::min((sigma0 - 0.5) / 2, std::abs(s - 1.0) / 2);
  require(r > 0 && r < sigma0 - 0.5, "radius must lie in (0, sigma0 - 1/2)");
  require(std::abs(s - 1.0) > r, "the circle encloses the pole at 1");
  ZetaConfig zc{opt.zeta_tol};
  auto f = [&](cplx z) { return zeta(z, zc).value; };
  cplx seed = log_zeta_tracked(sigma0 + r, t, TrackOptions{opt.zeta_tol});

  std::vector<cplx> raw;
  auto extend = [&](const std::vector<cplx>&, int n) {
    while (true) {
      if (raw.empty())
        raw = quad::circle_samples(f, s, r, std::size_t(n));
      else if (int(raw.size()) < n)
        raw = quad::refine_circle_samples(f, s, r, raw);
      std::vector<cplx> L(raw.size());
      L[0] = {std::log(std::abs(raw[0])), seed.imag()};
      bool smooth = true;
      for (std::size_t j = 1; j <= raw.size(); ++j) {
        cplx prev = raw[j - 1], cur = raw[j % raw.size()];
        if (std::abs(cur) == 0.0) throw error(errc::path_through_zero, "zeta vanishes on the circle");
        double da = std::arg(cur / prev);
        if (std::abs(da) > pi / 3) smooth = false;
        double im = (j == 1 ? seed.imag() : L[j - 1].imag()) + da;
        if (j < raw.size())
          L[j] = {std::log(std::abs(cur)), im};
        else if (smooth && std::abs(im - seed.imag()) > pi)
          throw error(errc::path_through_zero, "log zeta winds around the circle; a zero lies inside");
      }
      if (smooth) return L;
      if (int(raw.size()) >= opt.max_nodes) throw error(errc::path_through_zero, "argument of zeta varies too fast on the circle");
      raw = quad::refine_circle_samples(f, s, r, raw);
      n = int(raw.size());
    }
  };
  return detail::cauchy_converge(extend, r, count, opt);
}

inline cplx log_zeta_deriv(int k, double sigma0, double t, double radius = 0) {
  require(k >= 0, "derivative order must be nonnegative");
  CauchyOptions o;
  o.radius = radius;
  return log_zeta_derivs(sigma0, t, k + 1, o).values[k];
}

/// Riemann-von Mangoldt count N(T) = theta(T)/pi + 1 + S(T), S from the tracked log on the critical line.
inline double zero_counting_function(double T) {
  require(T > 1, "T must exceed 1");
  double S = log_zeta_tracked(0.5, T).imag() / pi;
  return riemann_siegel_theta(T) / pi + 1.0 + S;
}

struct ZeroSearchOptions {
  double step = 0;   // 0 picks min(0.1, a quarter of the mean zero spacing)
  unsigned threads = 1;
  bool verify = true;  // compare with the Riemann-von Mangoldt count
};

struct ZeroList {
  double lo = 0, hi = 0;          // ordinate range that was searched
  std::vector<double> ordinates;  // ascending, in (lo, hi]
  bool verified = false;
};

namespace detail {

inline double zero_step(double t) {
  double spacing = t > 20 ? two_pi / std::log(t / two_pi) : 2.0;
  return std::min(0.1, 0.25 * spacing);
}

/// Brent root of Z on [a, b] with sign change.
inline double refine_z_root(double a, double b, double fa, double fb) {
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 200; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol = 2e-16 * std::abs(b) + 1e-13;
    double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2 * m * s;
        q = 1 - s;
      } else {
        double qq = fa / fc, r = fb / fc;
        p = s * (2 * m * qq * (qq - r) - (b - a) * (r - 1));
        q = (qq - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q; else p = -p;
      if (2 * p < std::min(3 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
    fb = hardy_z(b);
  }
  return b;
}

/// Sign-change scan of Z on (lo, hi] with local refinement where |Z| dips without changing sign.
inline std::vector<double> scan_z(double lo, double hi, double step) {
  std::vector<double> roots;
  std::vector<double> ts;
  for (double t = lo;; ) {
    ts.push_back(t);
    if (t >= hi) break;
    double h = step > 0 ? step : zero_step(std::max(t, 1.0));
    t = std::min(hi, t + h);
  }
  std::vector<double> zs(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) zs[i] = hardy_z(ts[i]);

  std::function<void(double, double, double, double, int)> interval = [&](double a, double b, double fa, double fb, int depth) {
    if ((fa > 0) != (fb > 0) && fa != 0 && fb != 0) {
      roots.push_back(refine_z_root(a, b, fa, fb));
      return;
    }
    if (depth <= 0) return;
    // same sign: look inside when the dip could hide a pair of zeros
    double m = 0.5 * (a + b), fm = hardy_z(m);
    bool dips = std::abs(fm) < std::min(std::abs(fa), std::abs(fb)) || (fm > 0) != (fa > 0);
    if (!dips) return;
    interval(a, m, fa, fm, depth - 1);
    interval(m, b, fm, fb, depth - 1);
  };
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (zs[i] == 0 && ts[i] > lo) roots.push_back(ts[i]);
    bool local_min = i > 0 && i + 2 < ts.size() && std::abs(zs[i]) <= std::abs(zs[i - 1]) &&
                     std::abs(zs[i + 1]) <= std::abs(zs[i + 2]) && (zs[i] > 0) == (zs[i + 1] > 0);
    interval(ts[i], ts[i + 1], zs[i], zs[i + 1], local_min ? 8 : 0);
  }
  if (!zs.empty() && zs.back() == 0 && ts.back() > lo) roots.push_back(ts.back());
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }),
              roots.end());
  return roots;
}

/// Nudges t off a zero ordinate so the counting function is defined there.
inline double safe_count(double t) {
  for (int i = 0; i < 8; ++i) {
    try {
      return zero_counting_function(t);
    } catch (const error& e) {
      if (e.code() != errc::path_through_zero) throw;
      t += 1e-3;
    }
  }
  throw error(errc::path_through_zero, "could not evaluate N(T) near " + std::to_string(t));
}

}  // namespace detail

/// Ordinates of the zeros of zeta on the critical line with lo < gamma <= hi.
inline ZeroList find_zeros(double lo, double hi, const ZeroSearchOptions& opt = {}) {
  require(lo >= 0 && hi > lo, "need 0 <= lo < hi");
  ZeroList zl;
  zl.lo = lo;
  zl.hi = hi;
  for (double step = opt.step; ; step = (step > 0 ? step : 0.1) / 4) {
    // chunk the range so the merge order is fixed
    std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(64, std::size_t((hi - lo) / 10) + 1));
    std::vector<std::vector<double>> parts(chunks);
    parallel_for(chunks, opt.threads, [&](std::size_t c) {
      double a = lo + (hi - lo) * c / chunks, b = c + 1 == chunks ? hi : lo + (hi - lo) * (c + 1) / chunks;
      parts[c] = detail::scan_z(a, b, step);
    });
    zl.ordinates.clear();
    for (auto& p : parts)
      for (double g : p)
        if (g > lo && g <= hi && (zl.ordinates.empty() || g - zl.ordinates.back() > 1e-9)) zl.ordinates.push_back(g);
    if (!opt.verify || hi < 14) {
      zl.verified = !opt.verify || zl.ordinates.empty();
      return zl;
    }
    double expected = std::round(detail::safe_count(hi)) - (lo < 14 ? 0.0 : std::round(detail::safe_count(lo)));
    if (double(zl.ordinates.size()) == expected) {
      zl.verified = true;
      return zl;
    }
    if (step > 0 && step < 1e-3) break;
  }
  throw error(errc::no_convergence, "critical-line scan disagrees with the zero counting function on [" +
                                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

struct ZeroCount {
  double alpha = 0, T = 0, H = 0;
  long count = 0;
  double winding_residual = 0;
};

namespace detail {

/// (s - 1) zeta(s), entire; Laurent form right at the pole.
inline cplx entire_zeta(cplx s) {
  if (std::abs(s - 1.0) < 1e-8) return 1.0 + euler_gamma * (s - 1.0);
  return (s - 1.0) * zeta_value(s, 1e-12);
}

inline double arg_change(cplx a, cplx b, cplx fa, cplx fb, int depth) {
  const double floor_mod = 1e-10;
  cplx m = 0.5 * (a + b);
  cplx fm = entire_zeta(m);
  if (std::abs(fm) < floor_mod) throw error(errc::boundary_zero, "zeta vanishes on the rectangle boundary");
  double d1 = std::arg(fm / fa), d2 = std::arg(fb / fm);
  if (std::abs(d1) < pi / 8 && std::abs(d2) < pi / 8) return d1 + d2;
  if (depth <= 0 || std::abs(b - a) < 1e-9)
    throw error(errc::boundary_zero, "argument not resolved on the rectangle boundary");
  return arg_change(a, m, fa, fm, depth - 1) + arg_change(m, b, fm, fb, depth - 1);
}

}  // namespace detail

/// Zeros of zeta in [alpha, 2] x [T, T+H] by the argument principle applied to (s-1) zeta(s).
inline ZeroCount count_zeros(double alpha, double T, double H) {
  require(alpha < 2, "alpha must be below 2");
  require(H >= 0, "H must be nonnegative");
  ZeroCount zc{alpha, T, H, 0, 0.0};
  if (H == 0) return zc;
  std::array<cplx, 4> corner = {cplx(alpha, T), cplx(2, T), cplx(2, T + H), cplx(alpha, T + H)};
  double total = 0;
  for (int e = 0; e < 4; ++e) {
    cplx a = corner[e], b = corner[(e + 1) % 4];
    int pieces = std::max(1, int(std::ceil(std::abs(b - a) / 0.25)));
    cplx prev = a, fprev = detail::entire_zeta(a);
    if (std::abs(fprev) < 1e-10) throw error(errc::boundary_zero, "zeta vanishes at a rectangle corner");
    for (int i = 1; i <= pieces; ++i) {
      cplx cur = a + (b - a) * (double(i) / pieces);
      cplx fcur = detail::entire_zeta(cur);
      if (std::abs(fcur) < 1e-10) throw error(errc::boundary_zero, "zeta vanishes on the rectangle boundary");
      total += detail::arg_change(prev, cur, fprev, fcur, 40);
      prev = cur;
      fprev = fcur;
    }
  }
  double w = total / two_pi;
  zc.count = std::lround(w);
  zc.winding_residual = std::abs(w - double(zc.count));
  if (zc.winding_residual >= 0.25)
    throw error(errc::no_convergence, "winding number not near an integer: " + std::to_string(w));
  return zc;
}

struct EnvelopeValue {
  double exponent = 0;   // 4(1-alpha)/(3-2alpha)
  double log_value = 0;  // exponent log H + 100 log log H
};

inline EnvelopeValue balasubramanian_envelope(double alpha, double H) {
  require(alpha > 0.5 && alpha < 1, "alpha must lie in (1/2, 1)");
  require(H > 1, "H must exceed 1");
  EnvelopeValue v;
  v.exponent = 4 * (1 - alpha) / (3 - 2 * alpha);
  v.log_value = v.exponent * std::log(H) + 100 * std::log(std::log(H));
  return v;
}

}  // namespace zetascope
