#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "core.hpp"
#include "omega_solver.hpp"
#include "window.hpp"
#include "zeta.hpp"

namespace zetascope {

inline constexpr int max_scan_order = 8;

struct Hit {
  double tau = 0;
  std::vector<double> residuals;  // per-k, from the verification pass
  double max_residual = 0;
  double grid_residual = 0;       // objective at the starting grid point
  double refined_residual = 0;    // objective after refinement
  bool refined = false;
  double wall_time = 0;           // seconds spent refining and verifying
};

struct ScanOptions {
  unsigned threads = 1;
  double refine_radius = 0;  // 0 uses the grid step
  bool verify = true;
};

struct ScanReport {
  std::vector<Hit> hits;
  std::vector<double> gaps;  // grid ordinates skipped after an evaluation failure
  std::size_t grid_size = 0;
  std::size_t grid_below = 0;  // grid points whose objective is below eps
  std::size_t rejected = 0;    // refined candidates that failed verification
  double step = 0;
};

namespace detail {

inline double safe_eval(const std::function<double(double)>& f, double t) {
  try {
    double v = f(t);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  } catch (const error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace detail

/// Nested-grid refinement of a scalar objective around tau0 (21 points at spacing
/// radius/10, then radius/100, then radius/1000) followed by a golden-section
/// polish. Moves only on strict improvement and never leaves [tau0 - radius, tau0 + radius].
inline Hit refine_hit(double tau0, const std::function<double(double)>& objective, double radius) {
  require(radius > 0, "refinement radius must be positive");
  const double lo = tau0 - radius, hi = tau0 + radius;
  double best = tau0, fbest = detail::safe_eval(objective, tau0);
  Hit h;
  h.grid_residual = fbest;
  double h_step = radius / 10;
  for (int level = 0; level < 3; ++level, h_step /= 10) {
    double center = best;
    for (int i = -10; i <= 10; ++i) {
      if (i == 0) continue;
      double t = center + i * h_step;
      if (t < lo || t > hi) continue;
      double v = detail::safe_eval(objective, t);
      if (v < fbest) {
        fbest = v;
        best = t;
      }
    }
  }
  // golden section on the final bracket
  double a = std::max(lo, best - 10 * h_step), b = std::min(hi, best + 10 * h_step);
  const double g = 0.5 * (std::sqrt(5.0) - 1);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = detail::safe_eval(objective, c), fd = detail::safe_eval(objective, d);
  for (int it = 0; it < 60 && b - a > 1e-12 * std::max(1.0, std::abs(best)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = detail::safe_eval(objective, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = detail::safe_eval(objective, d);
    }
  }
  double m = 0.5 * (a + b), fm = detail::safe_eval(objective, m);
  if (fm < fbest) {
    fbest = fm;
    best = m;
  }
  h.tau = best;
  h.refined_residual = fbest;
  h.refined = best != tau0;
  return h;
}

/// Grid ordinates T + i step for i = 0..floor(H/step).
inline std::vector<double> scan_grid(const ScanWindow& w) {
  double step = w.grid_step();
  auto n = std::size_t(std::floor(w.H / step + 1e-9));
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = w.T + double(i) * step;
  return g;
}

/// Per-k residuals at tau; `precise` selects the higher-order verification pass.
using ResidualFn = std::function<std::vector<double>(double tau, bool precise)>;

inline double max_of(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, x);
  return m;
}

/// Generic scan protocol: grid evaluation, candidate selection, refinement, verification.
inline ScanReport run_scan(const ResidualFn& residuals, const ScanWindow& window, const ScanOptions& opt = {}) {
  window.validate();
  ScanReport rep;
  rep.step = window.grid_step();
  auto grid = scan_grid(window);
  rep.grid_size = grid.size();
  const double eps = window.eps;
  std::vector<double> v(grid.size());
  parallel_for(grid.size(), opt.threads, [&](std::size_t i) {
    try {
      v[i] = max_of(residuals(grid[i], false));
    } catch (const error&) {
      v[i] = std::numeric_limits<double>::infinity();
    }
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(v[i])) rep.gaps.push_back(grid[i]);
    if (v[i] < eps) ++rep.grid_below;
  }

  // local minima of the grid values that are below eps, or could dip below eps
  // between grid points judging by the neighbouring increments
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(v[i])) continue;
    bool left = i == 0 || v[i] <= v[i - 1], right = i + 1 == grid.size() || v[i] <= v[i + 1];
    if (!(left && right)) continue;
    double slope = 0;
    if (i > 0 && std::isfinite(v[i - 1])) slope = std::max(slope, std::abs(v[i - 1] - v[i]));
    if (i + 1 < grid.size() && std::isfinite(v[i + 1])) slope = std::max(slope, std::abs(v[i + 1] - v[i]));
    if (v[i] < eps || v[i] - slope < eps) cand.push_back(i);
  }

  const double radius = opt.refine_radius > 0 ? opt.refine_radius : rep.step;
  std::vector<Hit> found(cand.size());
  std::vector<char> keep(cand.size(), 0);
  parallel_for(cand.size(), opt.threads, [&](std::size_t c) {
    auto t0 = std::chrono::steady_clock::now();
    auto obj = [&](double t) { return max_of(residuals(t, false)); };
    Hit h = refine_hit(grid[cand[c]], obj, radius);
    try {
      h.residuals = residuals(h.tau, opt.verify);
      h.max_residual = max_of(h.residuals);
      keep[c] = h.max_residual < eps;
    } catch (const error&) {
      keep[c] = 0;
    }
    h.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    found[c] = std::move(h);
  });
  std::vector<Hit> hits;
  for (std::size_t c = 0; c < cand.size(); ++c) {
    if (!keep[c]) {
      ++rep.rejected;
      continue;
    }
    hits.push_back(std::move(found[c]));
  }
  std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.tau < b.tau; });
  // collapse refinements that converged to the same minimum
  for (auto& h : hits) {
    if (!rep.hits.empty() && h.tau - rep.hits.back().tau < 0.5 * rep.step) {
      if (h.max_residual < rep.hits.back().max_residual) rep.hits.back() = std::move(h);
      continue;
    }
    rep.hits.push_back(std::move(h));
  }
  return rep;
}

/// tau with |d^k/ds^k log zeta(sigma0 + i tau) - a_k| < eps for all k < N.
inline ScanReport scan_theorem1(const TargetSpec& spec, const ScanWindow& window, const ScanOptions& opt = {}) {
  require(spec.N >= 1 && spec.N <= max_scan_order, "scan supports 1 <= N <= 8");
  require(spec.sigma0 > 0.5 && spec.sigma0 < 1.0, "sigma0 must lie in (1/2, 1)");
  require(int(spec.a.size()) == spec.N, "expected N targets");
  ResidualFn f = [spec](double tau, bool precise) {
    CauchyOptions co;
    if (precise) {
      co.min_nodes = 128;
      co.rel_tol = 1e-13;
      co.zeta_tol = 1e-13;
    }
    auto d = log_zeta_derivs(spec.sigma0, tau, spec.N, co);
    std::vector<double> r(spec.N);
    for (int k = 0; k < spec.N; ++k) r[k] = std::abs(d.values[k] - spec.a[k]);
    return r;
  };
  return run_scan(f, window, opt);
}

/// tau with |zeta^{(k)}(sigma0 + i tau) - b_k| < eps for all k < N; requires b_0 != 0.
inline ScanReport scan_theorem3(const std::vector<cplx>& b, double sigma0, const ScanWindow& window,
                                const ScanOptions& opt = {}) {
  require(!b.empty() && int(b.size()) <= max_scan_order, "scan supports 1 <= N <= 8");
  require(sigma0 > 0.5 && sigma0 < 1.0, "sigma0 must lie in (1/2, 1)");
  if (b[0] == cplx(0, 0)) throw error(errc::reject_zero_b0, "b_0 must be nonzero");
  const int N = int(b.size());
  ResidualFn f = [b, sigma0, N](double tau, bool precise) {
    CauchyOptions co;
    if (precise) {
      co.min_nodes = 128;
      co.rel_tol = 1e-13;
      co.zeta_tol = 1e-13;
    }
    auto d = zeta_derivs(cplx(sigma0, tau), N, co);
    std::vector<double> r(N);
    for (int k = 0; k < N; ++k) r[k] = std::abs(d.values[k] - b[k]);
    return r;
  };
  return run_scan(f, window, opt);
}

/// Fraction of the window covered by grid points whose objective is below eps.
inline double density_estimate(const ScanReport& rep, const ScanWindow& window) {
  return std::min(1.0, double(rep.grid_below) * rep.step / window.H);
}

}  // namespace zetascope
