#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "linkage.hpp"
#include "phases.hpp"
#include "primes.hpp"

namespace zetascope {

/// Derivative targets a_0..a_{N-1} for d^k/ds^k log zeta at sigma0.
struct TargetSpec {
  int N = 1;
  double sigma0 = 0.75;
  std::vector<cplx> a;
  double eps = 0.1;

  double norm() const {
    double s = 0;
    for (auto v : a) s += std::abs(v);
    return s;
  }

  void validate() const {
    require(N >= 1, "N must be at least 1");
    require(sigma0 > 0.5 && sigma0 < 1.0, "sigma0 must lie in (1/2,1)");
    require(static_cast<int>(a.size()) == N, "expected " + std::to_string(N) + " targets, got " + std::to_string(a.size()));
    require(eps > 0 && eps < 1, "eps must lie in (0,1)");
    for (auto v : a) require(std::isfinite(v.real()) && std::isfinite(v.imag()), "targets must be finite");
  }
};

/// Existence-only constants of the effective bounds, exposed as configuration.
struct BoundConstants {
  double c1 = 1, c2 = 1, c3 = 1;
  double C1 = 1, C2 = 1, C3 = 1;

  void validate() const {
    for (double c : {c1, c2, c3, C1, C2, C3}) require(c > 0, "bound constants must be positive");
  }
};

struct TailConstants {
  std::vector<cplx> gamma;
  double Q = 0;
  std::vector<prime_t> excluded;
};

/// Exponent 8/(1-sigma0) + 8/(sigma0-1/2) shared by the Q and T thresholds.
inline double threshold_exponent(double sigma0) { return 8.0 / (1.0 - sigma0) + 8.0 / (sigma0 - 0.5); }

struct LogScaleValue {
  double log_value = 0;  // natural log of the bound
  double value = 0;      // exp(log_value), +inf when it overflows
  bool overflow = false;
};

inline LogScaleValue from_log(double lv) {
  LogScaleValue r;
  r.log_value = lv;
  if (lv > std::log(std::numeric_limits<double>::max())) {
    r.overflow = true;
    r.value = std::numeric_limits<double>::infinity();
  } else {
    r.value = std::exp(lv);
  }
  return r;
}

/// Q >= c1 (||a|| + 1/eps)^{8/(1-sigma0) + 8/(sigma0-1/2)}
inline LogScaleValue q_lower_bound(const TargetSpec& spec, const BoundConstants& c) {
  spec.validate();
  c.validate();
  return from_log(std::log(c.c1) + threshold_exponent(spec.sigma0) * std::log(spec.norm() + 1.0 / spec.eps));
}

/// log log T for T >= exp2(C1 (||a|| + 1/eps)^{8/(1-sigma0) + 8/(sigma0-1/2)}).
inline double t_lower_bound_theorem1(const TargetSpec& spec, const BoundConstants& c) {
  spec.validate();
  c.validate();
  return std::log(c.C1) + threshold_exponent(spec.sigma0) * std::log(spec.norm() + 1.0 / spec.eps);
}

/// log of the U0 threshold: the larger of the two block-size shapes
/// c2 (||a|| + 1/eps)^{8/(1-sigma0)} and c3 (1/eps)^{1/(sigma0-1/2)}, and at least 200^N.
inline double u0_lower_bound_log(const TargetSpec& spec, const BoundConstants& c) {
  double reach = std::log(c.c2) + 8.0 / (1.0 - spec.sigma0) * std::log(spec.norm() + 1.0 / spec.eps);
  double tail = std::log(c.c3) + 1.0 / (spec.sigma0 - 0.5) * std::log(1.0 / spec.eps);
  return std::max({reach, tail, spec.N * std::log(200.0)});
}

/// Exact finite sums over P = (primes <= Q) \ excluded with the alternating phases.
inline TailConstants tail_constants(const TargetSpec& spec, std::span<const prime_t> excluded, double Q,
                                    int ell_max = 0) {
  require(spec.N >= 1, "N must be at least 1");
  require(spec.sigma0 > 0.5, "sigma0 must exceed 1/2");
  TailConstants tc;
  tc.Q = Q;
  tc.excluded.assign(excluded.begin(), excluded.end());
  std::sort(tc.excluded.begin(), tc.excluded.end());
  if (!tc.excluded.empty()) require(Q > double(tc.excluded.back()), "Q must exceed every block prime");
  auto table = primes_up_to(Q < 2 ? 0 : static_cast<std::uint64_t>(std::floor(Q)));
  auto theta1 = theta_alternating(table);
  std::vector<prime_t> rest;
  rest.reserve(table.size());
  std::set_difference(table.primes.begin(), table.primes.end(), tc.excluded.begin(), tc.excluded.end(),
                      std::back_inserter(rest));
  auto vals = log_zeta_P_derivs(rest, spec.N, spec.sigma0, theta1, ell_max);
  for (auto& v : vals) tc.gamma.push_back(v.value);
  return tc;
}

inline TailConstants tail_constants(const TargetSpec& spec, const BlockSystem& blocks, double Q, int ell_max = 0) {
  auto m = blocks.members();
  return tail_constants(spec, m, Q, ell_max);
}

struct BlockReport {
  std::size_t size = 0;
  double radius = 0;       // sum_{p in M_j} p^{-sigma0}
  double z_abs = 0;
  double residual = 0;     // |phi_{M_j}(sigma0, theta) - z_j|
  double proxy_gap = 0;    // max_k |phi^{(k)}_{M_j} - (-log U_j)^k z_j|
  bool thin = false;
};

struct OmegaReport {
  double Q = 0;
  double q_theory_log = 0;
  double U0 = 0;
  double u0_theory_log = 0;
  double V = 0;
  bool calibrated = false;
  int attempts = 0;
  std::vector<BlockReport> blocks;
  std::vector<cplx> gamma;
  std::vector<cplx> z;
  std::vector<double> residuals;           // |d^k log zeta_Q(sigma0, theta0) - a_k|
  std::vector<double> block_tail_part;     // |terms of the alternating tail on the blocks|
  std::vector<double> beyond_q_estimate;   // |tail over primes in (Q, 2Q]|
  std::vector<int> thin_blocks;
  double max_residual() const {
    double m = 0;
    for (double r : residuals) m = std::max(m, r);
    return m;
  }
};

struct OmegaResult {
  PhaseAssignment theta0;
  OmegaReport report;
};

struct OmegaOptions {
  std::optional<double> u0;     // explicit U0: skips the threshold and calibration
  bool auto_calibrate = true;   // calibrate when the thresholds exceed q_cap
  double q_cap = 1 << 24;       // largest Q handled
  double u0_min = 2.0;
  double u0_factor = 1.189207115002721;  // 2^{1/4}
  int ell_max = 0;
  unsigned threads = 1;
};

/// Independent re-evaluation of d^k/ds^k log zeta_Q(s, theta) at sigma0 for k < count
/// with twice the default prime-power depth.
inline std::vector<cplx> evaluate_log_euler_derivs(double Q, int count, double sigma0, const PhaseAssignment& theta) {
  auto table = primes_up_to(static_cast<std::uint64_t>(std::floor(Q)));
  prime_t mp = table.primes.empty() ? 2 : table.primes.back();
  int ell = 2 * default_ell_max(table.size(), mp, count - 1, sigma0);
  auto vals = log_zeta_P_derivs(table.primes, count, sigma0, theta, ell, 1e-20);
  std::vector<cplx> out;
  for (auto& v : vals) out.push_back(v.value);
  return out;
}

namespace detail {

/// Prefix sums of the alternating-phase series over a prime table, so tails over
/// (primes <= Q) minus a block union cost O(|blocks|).
class TailCache {
 public:
  TailCache(double sigma0, int count, std::uint64_t limit) : sigma0_(sigma0), count_(count) {
    table_ = primes_up_to(limit);
    theta1_ = theta_alternating(table_);
    prefix_.assign(table_.size() + 1, std::vector<cplx>(count, 0.0));
    std::vector<cplx> comp(count, 0.0);
    std::vector<double> bounds(count, 0.0);
    std::vector<cplx> acc(count, 0.0);
    for (std::size_t i = 0; i < table_.size(); ++i) {
      std::vector<cplx> term(count, 0.0);
      detail::prime_power_series(table_.primes[i], (i % 2) ? 0.5 : 0.0, sigma0, count, 4000, 1e-18, term, bounds);
      for (int k = 0; k < count; ++k) {  // Kahan summation
        cplx y = term[k] - comp[k];
        cplx t = acc[k] + y;
        comp[k] = (t - acc[k]) - y;
        acc[k] = t;
      }
      prefix_[i + 1] = acc;
    }
  }

  std::uint64_t limit() const { return table_.limit; }
  const PrimeTable& table() const { return table_; }

  std::vector<cplx> term(prime_t p) const {
    std::vector<cplx> t(count_, 0.0);
    std::vector<double> b(count_, 0.0);
    detail::prime_power_series(p, theta1_(p), sigma0_, count_, 4000, 1e-18, t, b);
    return t;
  }

  std::vector<cplx> tail(double Q, std::span<const prime_t> excluded) const {
    std::size_t n = table_.count_upto(Q);
    auto g = prefix_[n];
    for (prime_t p : excluded) {
      auto t = term(p);
      for (int k = 0; k < count_; ++k) g[k] -= t[k];
    }
    return g;
  }

 private:
  double sigma0_;
  int count_;
  PrimeTable table_;
  PhaseAssignment theta1_;
  std::vector<std::vector<cplx>> prefix_;
};

inline double q_for_u0(double U0, int N) { return std::floor(U0 * std::ldexp(1.0, N)) + 1.0; }

/// One pass of the construction at a fixed U0. Throws on EmptyBlock,
/// Unreachable, InfeasiblePartition or ResidualExceeded.
inline OmegaResult attempt_theta0(const TargetSpec& spec, double U0, double Q, const TailCache* cache,
                                  const OmegaOptions& opt) {
  OmegaResult out;
  auto& rep = out.report;
  auto bs = build_blocks(U0, spec.N, spec.sigma0);
  rep.U0 = U0;
  rep.V = bs.V;
  rep.Q = Q;
  rep.thin_blocks = bs.thin;
  auto members = bs.members();
  if (cache && Q <= double(cache->limit()))
    rep.gamma = cache->tail(Q, members);
  else
    rep.gamma = tail_constants(spec, members, Q, opt.ell_max).gamma;

  std::vector<cplx> rhs(spec.N);
  for (int k = 0; k < spec.N; ++k) rhs[k] = spec.a[k] - rep.gamma[k];
  rep.z = solve_vandermonde(bs.nodes, rhs);

  PhaseAssignment theta0 = [&] {
    auto table = cache && Q <= double(cache->limit()) ? PrimeTable{} : primes_up_to(std::uint64_t(Q));
    const auto& t = (cache && Q <= double(cache->limit())) ? cache->table() : table;
    std::vector<std::pair<prime_t, double>> e;
    std::size_t n = t.count_upto(Q);
    e.reserve(n);
    for (std::size_t i = 0; i < n; ++i) e.emplace_back(t.primes[i], (i % 2) ? 0.5 : 0.0);
    return PhaseAssignment(std::move(e));
  }();

  std::vector<std::vector<double>> block_phases(spec.N);
  std::vector<std::exception_ptr> failures(spec.N);
  parallel_for(spec.N, opt.threads, [&](std::size_t j) {
    try {
      std::vector<double> radii;
      for (prime_t p : bs.blocks[j]) radii.push_back(std::pow(double(p), -spec.sigma0));
      block_phases[j] = solve_phases_for_target(radii, rep.z[j]);
    } catch (...) {
      failures[j] = std::current_exception();
    }
  });
  for (int j = 0; j < spec.N; ++j) {
    if (!failures[j]) continue;
    try {
      std::rethrow_exception(failures[j]);
    } catch (const error& e) {
      throw error(e.code(), "block " + std::to_string(j) + " (U0=" + std::to_string(U0) + ", size " +
                                std::to_string(bs.blocks[j].size()) + "): " + e.what());
    }
  }
  for (int j = 0; j < spec.N; ++j)
    for (std::size_t i = 0; i < bs.blocks[j].size(); ++i) theta0.set(bs.blocks[j][i], block_phases[j][i]);

  for (int j = 0; j < spec.N; ++j) {
    BlockReport br;
    br.size = bs.blocks[j].size();
    br.thin = br.size < 3;
    std::vector<double> radii;
    for (prime_t p : bs.blocks[j]) radii.push_back(std::pow(double(p), -spec.sigma0));
    for (double r : radii) br.radius += r;
    br.z_abs = std::abs(rep.z[j]);
    br.residual = std::abs(linkage_value(radii, block_phases[j]) - rep.z[j]);
    for (int k = 0; k < spec.N; ++k) {
      cplx d = phi_deriv(bs.blocks[j], k, spec.sigma0, theta0);
      br.proxy_gap = std::max(br.proxy_gap, std::abs(d - std::pow(bs.nodes[j], k) * rep.z[j]));
    }
    rep.blocks.push_back(br);
  }

  {
    auto table = primes_up_to(std::uint64_t(Q));
    auto theta1 = theta_alternating(table);
    auto mv = log_zeta_P_derivs(members, spec.N, spec.sigma0, theta1, opt.ell_max);
    auto far = primes_in_range(std::uint64_t(Q) + 1, std::uint64_t(2 * Q));
    // alternation continues from pi(Q)
    std::vector<std::pair<prime_t, double>> fe;
    for (std::size_t i = 0; i < far.size(); ++i) fe.emplace_back(far[i], ((table.size() + i) % 2) ? 0.5 : 0.0);
    auto fv = log_zeta_P_derivs(far, spec.N, spec.sigma0, PhaseAssignment(std::move(fe)), opt.ell_max);
    for (int k = 0; k < spec.N; ++k) {
      rep.block_tail_part.push_back(std::abs(mv[k].value));
      rep.beyond_q_estimate.push_back(std::abs(fv[k].value));
    }
  }

  auto check = evaluate_log_euler_derivs(Q, spec.N, spec.sigma0, theta0);
  for (int k = 0; k < spec.N; ++k) rep.residuals.push_back(std::abs(check[k] - spec.a[k]));
  out.theta0 = std::move(theta0);
  if (rep.max_residual() >= spec.eps)
    throw error(errc::residual_exceeded, "max residual " + std::to_string(rep.max_residual()) + " >= eps " +
                                             std::to_string(spec.eps) + " at U0=" + std::to_string(U0));
  return out;
}

}  // namespace detail

/// One failed calibration step.
struct CalibrationAttempt {
  double U0 = 0;
  errc code = errc::invalid_argument;
  std::string message;
};

struct CalibrationResult {
  std::optional<OmegaResult> result;
  std::vector<CalibrationAttempt> failures;
};

/// Smallest U0 on the grid u0_min * u0_factor^m (Q <= q_cap) for which every
/// block is reachable and the re-evaluated residuals stay below eps.
inline CalibrationResult calibrate_u0(const TargetSpec& spec, const BoundConstants& constants,
                                      const OmegaOptions& opt = {}) {
  spec.validate();
  constants.validate();
  require(opt.u0_min > 1 && opt.u0_factor > 1, "calibration grid needs u0_min > 1 and u0_factor > 1");
  CalibrationResult cr;
  double u0_max = opt.q_cap / std::ldexp(1.0, spec.N);
  detail::TailCache cache(spec.sigma0, spec.N, static_cast<std::uint64_t>(opt.q_cap));
  for (double U0 = opt.u0_min; U0 <= u0_max; U0 *= opt.u0_factor) {
    try {
      auto r = detail::attempt_theta0(spec, U0, detail::q_for_u0(U0, spec.N), &cache, opt);
      r.report.calibrated = true;
      r.report.attempts = int(cr.failures.size()) + 1;
      r.report.q_theory_log = q_lower_bound(spec, constants).log_value;
      r.report.u0_theory_log = u0_lower_bound_log(spec, constants);
      cr.result = std::move(r);
      return cr;
    } catch (const error& e) {
      cr.failures.push_back({U0, e.code(), e.what()});
    }
  }
  return cr;
}

/// Builds theta0 on the primes <= Q: alternating phases off the blocks, block
/// phases solved so that the block sums hit the Vandermonde solution z_j.
inline OmegaResult construct_theta0(const TargetSpec& spec, const BoundConstants& constants,
                                    const OmegaOptions& opt = {}) {
  spec.validate();
  constants.validate();
  double q_log = q_lower_bound(spec, constants).log_value;
  double u0_log = u0_lower_bound_log(spec, constants);

  auto finish = [&](OmegaResult r) {
    r.report.q_theory_log = q_log;
    r.report.u0_theory_log = u0_log;
    return r;
  };

  if (opt.u0) {
    double Q = detail::q_for_u0(*opt.u0, spec.N);
    require(Q <= opt.q_cap, "U0 too large for the configured q_cap");
    auto r = detail::attempt_theta0(spec, *opt.u0, Q, nullptr, opt);
    r.report.attempts = 1;
    return finish(std::move(r));
  }

  double q_needed_log = std::max(q_log, u0_log + spec.N * std::log(2.0));
  if (q_needed_log <= std::log(opt.q_cap)) {
    double U0 = std::exp(u0_log);
    double Q = std::max(std::exp(q_log), detail::q_for_u0(U0, spec.N));
    auto r = detail::attempt_theta0(spec, U0, Q, nullptr, opt);
    r.report.attempts = 1;
    return finish(std::move(r));
  }
  if (!opt.auto_calibrate)
    throw error(errc::desk_scale_exceeded, "threshold Q = exp(" + std::to_string(q_needed_log) +
                                               ") exceeds q_cap; enable calibration or pass U0");
  auto cr = calibrate_u0(spec, constants, opt);
  if (!cr.result) {
    const auto& last = cr.failures.empty() ? CalibrationAttempt{} : cr.failures.back();
    std::map<errc, int> tally;
    for (auto& f : cr.failures) tally[f.code]++;
    std::string summary;
    for (auto& [c, n] : tally) summary += std::string(summary.empty() ? "" : ", ") + to_string(c) + " x" + std::to_string(n);
    throw error(last.code, "no calibrated U0 up to q_cap succeeded (" + summary + "); last: " + last.message);
  }
  return finish(std::move(*cr.result));
}

}  // namespace zetascope
