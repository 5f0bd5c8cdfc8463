#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "core.hpp"
#include "quadrature.hpp"
#include "scan.hpp"
#include "window.hpp"
#include "zeta.hpp"

namespace zetascope {

using Evaluator = std::function<cplx(cplx)>;

struct BoundaryMax {
  double value = 0;
  cplx argmax;
  double angular_spacing = 0;  // resolution of the initial sampling
};

/// max |g| on |s - s0| = r: equispaced samples, then golden-section refinement
/// in the angle around every sampled local maximum.
inline BoundaryMax boundary_max(const Evaluator& g, cplx s0, double r, int samples = 256) {
  require(samples >= 64, "need at least 64 boundary samples");
  require(r > 0, "radius must be positive");
  const double dphi = two_pi / samples;
  auto at = [&](double phi) { return s0 + std::polar(r, phi); };
  std::vector<double> v(samples);
  for (int j = 0; j < samples; ++j) v[j] = std::abs(g(at(j * dphi)));
  BoundaryMax bm;
  bm.angular_spacing = dphi;
  int jb = int(std::max_element(v.begin(), v.end()) - v.begin());
  bm.value = v[jb];
  bm.argmax = at(jb * dphi);
  const double gr = 0.5 * (std::sqrt(5.0) - 1);
  for (int j = 0; j < samples; ++j) {
    double l = v[(j + samples - 1) % samples], c = v[j], rr = v[(j + 1) % samples];
    if (c < l || c < rr) continue;
    double a = (j - 1) * dphi, b = (j + 1) * dphi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = std::abs(g(at(x1))), f2 = std::abs(g(at(x2)));
    for (int it = 0; it < 50; ++it) {
      if (f1 > f2) {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - gr * (b - a);
        f1 = std::abs(g(at(x1)));
      } else {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + gr * (b - a);
        f2 = std::abs(g(at(x2)));
      }
    }
    double phi = 0.5 * (a + b), f = std::abs(g(at(phi)));
    if (f > bm.value) {
      bm.value = f;
      bm.argmax = at(phi);
    }
  }
  return bm;
}

/// Smallest N >= 1 with M_g delta0^N / (1 - delta0) < eps/3.
inline int choose_N(double M_g, double delta0, double eps) {
  require(delta0 > 0 && delta0 < 1, "delta0 must lie in (0, 1)");
  require(eps > 0, "eps must be positive");
  require(M_g >= 0, "M_g must be nonnegative");
  if (M_g == 0) return 1;
  for (int N = 1; N < 100000; ++N)
    if (M_g * std::pow(delta0, N) / (1 - delta0) < eps / 3) return N;
  throw error(errc::no_convergence, "no truncation order below 100000 meets the budget");
}

struct TaylorData {
  std::vector<cplx> derivs;  // g^{(k)}(s0), k < N
  int nodes = 0;
};

/// g^{(k)}(s0) for k < N by trapezoidal Cauchy quadrature on |s - s0| = r_c,
/// doubling the node count until successive estimates agree.
inline TaylorData taylor_coeffs(const Evaluator& g, cplx s0, double r_c, int N) {
  require(N >= 1, "N must be at least 1");
  require(r_c > 0, "radius must be positive");
  auto samples = quad::circle_samples(g, s0, r_c, 32);
  auto prev = quad::cauchy_derivatives(samples, r_c, N);
  for (int n = 64; n <= 16384; n *= 2) {
    samples = quad::refine_circle_samples(g, s0, r_c, samples);
    auto cur = quad::cauchy_derivatives(samples, r_c, N);
    double scale = 0;
    for (auto v : samples) scale = std::max(scale, std::abs(v));
    bool ok = true;
    double fact = 1;
    for (int k = 0; k < N; ++k) {
      if (k > 0) fact *= k;
      double noise = 16 * std::numeric_limits<double>::epsilon() * scale * fact / std::pow(r_c, k);
      if (std::abs(cur[k] - prev[k]) > 1e-10 * std::max(1.0, std::abs(cur[k])) + noise) ok = false;
    }
    if (ok) return {cur, n};
    prev = cur;
  }
  throw error(errc::no_convergence, "Taylor coefficients did not converge");
}

struct DeltaChoice {
  double delta = 0;
  std::string diagnostic;
};

/// Largest delta in (0, delta0] with M delta^N / (1 - delta) < eps/3.
inline DeltaChoice choose_delta(double M_zeta, int N, double eps, double delta0) {
  require(M_zeta > 0, "M_zeta must be positive");
  require(N >= 1, "N must be at least 1");
  require(delta0 > 0 && delta0 < 1, "delta0 must lie in (0, 1)");
  auto lhs = [&](double d) { return M_zeta * std::pow(d, N) / (1 - d); };
  const double budget = eps / 3;
  if (lhs(delta0) < budget) return {delta0, ""};
  double lo = 0, hi = delta0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double m = 0.5 * (lo + hi);
    (lhs(m) < budget ? lo : hi) = m;
  }
  if (lo == 0) return {0.0, "no positive delta meets the zeta truncation budget"};
  return {lo, ""};
}

struct UniversalityCheck {
  double sup_diff = 0;     // max over the sampling grid
  double margin = 0;       // Lipschitz allowance for points between grid nodes
  double sup_with_margin = 0;
  bool verdict = false;    // sup_diff < eps
  bool verdict_with_margin = false;
};

struct UniversalityTarget {
  Evaluator g;
  cplx s0;
  double r = 0;
  double delta0 = 0.5;
  double eps = 0.1;

  UniversalityTarget(Evaluator g_, cplx s0_, double r_, double delta0_, double eps_)
      : g(std::move(g_)), s0(s0_), r(r_), delta0(delta0_), eps(eps_) {
    require(s0.real() > 0.5 && s0.real() < 1, "Re s0 must lie in (1/2, 1)");
    require(r > 0, "r must be positive");
    require(delta0 > 0 && delta0 < 1, "delta0 must lie in (0, 1)");
    cplx g0 = g(s0);
    require(eps > 0 && eps < std::min(1.0, std::abs(g0)), "eps must lie in (0, min(1, |g(s0)|))");
    // nonvanishing: no winding on the boundary and no small values on the sampled disk
    const int n = 256;
    double total = 0, minabs = std::abs(g0);
    cplx prev = g(s0 + r);
    for (int j = 1; j <= n; ++j) {
      cplx cur = g(s0 + std::polar(r, two_pi * j / n));
      minabs = std::min(minabs, std::abs(cur));
      if (std::abs(cur) == 0) throw error(errc::invalid_argument, "target vanishes on the boundary");
      total += std::arg(cur / prev);
      prev = cur;
    }
    for (int ring = 1; ring < 8; ++ring)
      for (int j = 0; j < 64; ++j) minabs = std::min(minabs, std::abs(g(s0 + std::polar(r * ring / 8, two_pi * j / 64))));
    if (std::abs(total) > pi) throw error(errc::invalid_argument, "target has a zero inside the disk");
    if (minabs < 1e-12) throw error(errc::invalid_argument, "target vanishes on the disk");
  }
};

/// max over |s - s0| <= delta r of |zeta(s + i tau) - g(s)| on rings x angles samples.
inline UniversalityCheck check_universality(double tau, const UniversalityTarget& target, double delta, int rings = 32,
                                            int angles = 128, unsigned threads = 1) {
  require(delta >= 0 && delta < 1, "delta must lie in [0, 1)");
  require(rings >= 1 && angles >= 1, "grid must be nonempty");
  require(tau > target.r, "tau must exceed r so the shifted disk avoids the pole");
  const double rho = delta * target.r;
  auto h = [&](cplx s) { return zeta_value(s + cplx(0, tau), 1e-12) - target.g(s); };
  UniversalityCheck uc;
  if (rho == 0) {
    uc.sup_diff = std::abs(h(target.s0));
  } else {
    std::vector<double> ring_max(rings + 1, 0.0);
    parallel_for(ring_max.size(), threads, [&](std::size_t i) {
      double rr = rho * double(i) / rings;
      int na = i == 0 ? 1 : angles;
      double m = 0;
      for (int j = 0; j < na; ++j) m = std::max(m, std::abs(h(target.s0 + std::polar(rr, two_pi * j / angles))));
      ring_max[i] = m;
    });
    uc.sup_diff = *std::max_element(ring_max.begin(), ring_max.end());
    // any disk point lies within d of a node; |h'| <= M_h(r) r / (r - rho)^2 by Cauchy
    double d = 0.5 * rho / rings + 0.5 * rho * two_pi / angles;
    if (rho < target.r) {
      double Mh = boundary_max(h, target.s0, target.r, 128).value;
      uc.margin = d * Mh * target.r / ((target.r - rho) * (target.r - rho));
    } else {
      uc.margin = std::numeric_limits<double>::infinity();
    }
  }
  uc.sup_with_margin = uc.sup_diff + uc.margin;
  uc.verdict = uc.sup_diff < target.eps;
  uc.verdict_with_margin = uc.sup_with_margin < target.eps;
  return uc;
}

struct BValue {
  double value = 0;      // +inf when it overflows
  double log_value = 0;  // natural log of B
};

/// B = |log g(s0)| + ((1 + |g(s0)|) e^{delta0 r} / eps) (||G|| / |g(s0)|)^{(N-1)^2}.
inline BValue b_expression(int N, cplx g_s0, double G_norm, double delta0, double r, double eps) {
  require(N >= 1 && eps > 0 && std::abs(g_s0) > 0 && G_norm > 0, "invalid B-expression inputs");
  double a = std::abs(std::log(g_s0));
  double lb = std::log1p(std::abs(g_s0)) + delta0 * r - std::log(eps) +
              double(N - 1) * double(N - 1) * std::log(G_norm / std::abs(g_s0));
  BValue v;
  if (a > 0 && std::log(a) > lb)
    v.log_value = std::log(a) + std::log1p(std::exp(lb - std::log(a)));
  else
    v.log_value = lb + std::log1p(a * std::exp(-lb));
  v.value = v.log_value > 709 ? std::numeric_limits<double>::infinity() : std::exp(v.log_value);
  return v;
}

struct Budgets {
  double e91 = 0, e92 = 0, e93 = 0;
};

struct UniversalityHit {
  double tau = 0;
  double M_zeta = 0;
  double delta = 0;
  UniversalityCheck check;
  Budgets budgets;
  bool budgets_certified = false;  // each budget < eps/3
  double e92_chain = 0;            // sum_k delta1 (delta0 r)^k / k!
  std::vector<double> coefficient_residuals;
};

struct UniversalityReport {
  int N = 0;
  double M_g = 0;
  double delta1 = 0;
  std::vector<cplx> coeffs;
  double G_norm = 0;
  BValue B;
  double tau_shift = 0;  // Im s0, subtracted from scan ordinates
  ScanReport scan;
  std::vector<UniversalityHit> hits;
};

struct PipelineOptions {
  unsigned threads = 1;
  int rings = 32;
  int angles = 128;
};

/// Taylor-truncate g, match its Taylor data with zeta shifts, then certify the
/// disk bound with the three triangle budgets.
inline UniversalityReport universality_pipeline(const UniversalityTarget& target, const ScanWindow& window,
                                                const PipelineOptions& opt = {}) {
  window.validate();
  UniversalityReport rep;
  rep.M_g = boundary_max(target.g, target.s0, target.r).value;
  rep.N = choose_N(rep.M_g, target.delta0, target.eps);
  if (rep.N > max_scan_order)
    throw error(errc::invalid_argument, "required Taylor order " + std::to_string(rep.N) + " exceeds the scan cap 8");
  rep.coeffs = taylor_coeffs(target.g, target.s0, target.r, rep.N).derivs;
  for (auto c : rep.coeffs) rep.G_norm += std::abs(c);
  rep.B = b_expression(rep.N, target.g(target.s0), rep.G_norm, target.delta0, target.r, target.eps);
  rep.delta1 = target.eps / 3 * std::exp(-target.delta0 * target.r);
  rep.tau_shift = target.s0.imag();

  // zeta^{(k)}(Re s0 + i t1) ~ g^{(k)}(s0) at t1 in [T, T+H]; the shift is tau = t1 - Im s0
  ScanWindow sw = window;
  sw.eps = rep.delta1;
  ScanOptions so;
  so.threads = opt.threads;
  rep.scan = scan_theorem3(rep.coeffs, target.s0.real(), sw, so);
  if (rep.scan.hits.empty()) throw error(errc::no_hits, "no Taylor-matching shift in the window");

  for (const auto& h : rep.scan.hits) {
    UniversalityHit uh;
    uh.tau = h.tau - rep.tau_shift;
    uh.coefficient_residuals = h.residuals;
    Evaluator zs = [tau = uh.tau](cplx s) { return zeta_value(s + cplx(0, tau), 1e-12); };
    uh.M_zeta = boundary_max(zs, target.s0, target.r).value;
    auto dc = choose_delta(uh.M_zeta, rep.N, target.eps, target.delta0);
    uh.delta = dc.delta;
    uh.check = check_universality(uh.tau, target, uh.delta, opt.rings, opt.angles, opt.threads);
    double x = target.delta0 * target.r, term = 1;
    uh.budgets.e91 = rep.M_g * std::pow(target.delta0, rep.N) / (1 - target.delta0);
    for (int k = 0; k < rep.N; ++k) {
      if (k > 0) term *= x / k;
      uh.budgets.e92 += h.residuals[k] * term;
      uh.e92_chain += rep.delta1 * term;
    }
    uh.budgets.e93 = uh.M_zeta * std::pow(uh.delta, rep.N) / (1 - uh.delta);
    const double third = target.eps / 3;
    uh.budgets_certified = uh.delta > 0 && uh.budgets.e91 < third && uh.budgets.e92 < third && uh.budgets.e93 < third;
    rep.hits.push_back(std::move(uh));
  }
  return rep;
}

}  // namespace zetascope
