#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "core.hpp"
#include "primes.hpp"

namespace zetascope {

/// Phases theta_p in turns (the twist is e^{-2 pi i theta_p}); primes not
/// present default to 0. Stored as a flat map sorted by prime.
class PhaseAssignment {
 public:
  PhaseAssignment() = default;

  /// Entries need not be sorted; phases are reduced mod 1.
  explicit PhaseAssignment(std::vector<std::pair<prime_t, double>> entries) : entries_(std::move(entries)) {
    for (auto& e : entries_) e.second = frac01(e.second);
    std::sort(entries_.begin(), entries_.end());
  }

  double operator()(prime_t p) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                               [](const auto& e, prime_t q) { return e.first < q; });
    return (it != entries_.end() && it->first == p) ? it->second : 0.0;
  }

  void set(prime_t p, double theta) {
    theta = frac01(theta);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                               [](const auto& e, prime_t q) { return e.first < q; });
    if (it != entries_.end() && it->first == p)
      it->second = theta;
    else
      entries_.insert(it, {p, theta});
  }

  const std::vector<std::pair<prime_t, double>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Pointwise shift theta_p -> theta_p + shift(p), reduced mod 1.
  template <class F>
  PhaseAssignment shifted(F&& shift) const {
    auto copy = entries_;
    for (auto& e : copy) e.second += shift(e.first);
    return PhaseAssignment(std::move(copy));
  }

 private:
  std::vector<std::pair<prime_t, double>> entries_;
};

/// e^{-2 pi i theta}, exact at the quarter turns.
inline cplx twist(double theta) {
  double t = frac01(theta);
  if (t == 0.0) return {1, 0};
  if (t == 0.5) return {-1, 0};
  if (t == 0.25) return {0, -1};
  if (t == 0.75) return {0, 1};
  return std::polar(1.0, -two_pi * t);
}

/// The alternating assignment (0, 1/2, 0, 1/2, ...) along the primes of the table.
inline PhaseAssignment theta_alternating(const PrimeTable& table) {
  std::vector<std::pair<prime_t, double>> e;
  e.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) e.emplace_back(table.primes[i], (i % 2 == 0) ? 0.0 : 0.5);
  return PhaseAssignment(std::move(e));
}

/// phi_P(s, theta) = sum_{p in P} e^{-2 pi i theta_p} p^{-s}
inline cplx phi(std::span<const prime_t> P, cplx s, const PhaseAssignment& theta) {
  require(s.real() > 0, "phi requires Re s > 0");
  std::vector<cplx> terms;
  terms.reserve(P.size());
  for (prime_t p : P) terms.push_back(twist(theta(p)) * std::exp(-s * std::log(double(p))));
  return pairwise_sum(terms);
}

/// d^k/ds^k phi_P(s, theta) at s = sigma0.
inline cplx phi_deriv(std::span<const prime_t> P, int k, double sigma0, const PhaseAssignment& theta) {
  require(sigma0 > 0, "phi_deriv requires sigma0 > 0");
  require(k >= 0, "derivative order must be nonnegative");
  std::vector<cplx> terms;
  terms.reserve(P.size());
  for (prime_t p : P) {
    double lp = std::log(double(p));
    terms.push_back(twist(theta(p)) * (std::pow(-lp, k) * std::pow(double(p), -sigma0)));
  }
  return pairwise_sum(terms);
}

struct LogDerivSpec {
  int k = 0;
  double sigma0 = 0.75;
  int ell_max = 0;  // 0 selects default_ell_max
};

/// Smallest ell with 2^{-ell sigma0} |P| (ell log maxP)^k / (1 - 2^{-sigma0}) < 1e-14.
inline int default_ell_max(std::size_t count, prime_t max_p, int k, double sigma0) {
  if (count == 0) return 1;
  double lmax = std::log(double(std::max<prime_t>(max_p, 2)));
  double denom = 1.0 - std::pow(2.0, -sigma0);
  for (int ell = 1; ell < 100000; ++ell) {
    double b = std::pow(2.0, -ell * sigma0) * double(count) * std::pow(ell * lmax, k) / denom;
    if (b < 1e-14) return ell;
  }
  return 100000;
}

struct SeriesValue {
  cplx value;
  double tail_bound = 0;  // rigorous bound on the discarded prime-power terms
};

namespace detail {

/// Per-prime sums over ell of e^{-2 pi i ell theta} (-ell log p)^k / (ell p^{ell sigma0})
/// for all k < count, truncated once the rigorous tail bound for every k drops
/// below `cutoff` or ell reaches ell_max. Adds the tail bounds into `bounds`.
inline void prime_power_series(prime_t p, double theta, double sigma0, int count, int ell_max, double cutoff,
                               std::vector<cplx>& sums, std::vector<double>& bounds) {
  double lp = std::log(double(p));
  double w = std::exp(-sigma0 * lp);
  cplx tw = twist(theta);
  cplx rot = 1.0;
  double wl = 1.0;
  int L = 0;
  for (int ell = 1; ell <= ell_max; ++ell) {
    rot *= tw;
    wl *= w;
    double base = wl / ell;
    double pw = 1.0;
    for (int k = 0; k < count; ++k) {
      sums[k] += rot * (base * pw);
      pw *= -ell * lp;
    }
    L = ell;
    // tail bound for ell > L: t_ell = ell^{k-1} lp^k w^ell, ratio <= (1+1/(L+1))^{k-1} w
    bool done = true;
    for (int k = 0; k < count && done; ++k) {
      double rho = std::pow(1.0 + 1.0 / (L + 1), k - 1) * w;
      if (rho >= 1.0) {
        done = false;
        break;
      }
      double next = std::pow(double(L + 1), k - 1) * std::pow(lp, k) * wl * w;
      if (next / (1.0 - rho) > cutoff) done = false;
    }
    if (done) break;
  }
  for (int k = 0; k < count; ++k) {
    double rho = std::pow(1.0 + 1.0 / (L + 1), k - 1) * w;
    double next = std::pow(double(L + 1), k - 1) * std::pow(lp, k) * std::pow(w, L + 1);
    bounds[k] += rho < 1.0 ? next / (1.0 - rho) : INFINITY;
  }
}

}  // namespace detail

/// d^k/ds^k log zeta_P(s, theta) at s = sigma0 for all k < count, with the
/// log of each Euler factor expanded as its prime-power series.
inline std::vector<SeriesValue> log_zeta_P_derivs(std::span<const prime_t> P, int count, double sigma0,
                                                  const PhaseAssignment& theta, int ell_max = 0,
                                                  double cutoff = 1e-18) {
  require(sigma0 > 0.5, "log_zeta_P_deriv requires sigma0 > 1/2");
  require(count >= 1, "need at least one derivative order");
  if (ell_max <= 0) {
    prime_t mp = P.empty() ? 2 : *std::max_element(P.begin(), P.end());
    ell_max = default_ell_max(P.size(), mp, count - 1, sigma0);
  }
  std::vector<std::vector<cplx>> per(P.size(), std::vector<cplx>(count));
  std::vector<double> bounds(count, 0.0);
  for (std::size_t i = 0; i < P.size(); ++i)
    detail::prime_power_series(P[i], theta(P[i]), sigma0, count, ell_max, cutoff, per[i], bounds);
  std::vector<SeriesValue> out(count);
  std::vector<cplx> col(P.size());
  for (int k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < P.size(); ++i) col[i] = per[i][k];
    out[k].value = pairwise_sum(col);
    out[k].tail_bound = bounds[k];
  }
  return out;
}

inline SeriesValue log_zeta_P_deriv(std::span<const prime_t> P, const LogDerivSpec& spec,
                                    const PhaseAssignment& theta) {
  require(spec.k >= 0, "derivative order must be nonnegative");
  int ell_max = spec.ell_max;
  if (ell_max <= 0) {
    prime_t mp = P.empty() ? 2 : *std::max_element(P.begin(), P.end());
    ell_max = default_ell_max(P.size(), mp, spec.k, spec.sigma0);
  }
  return log_zeta_P_derivs(P, spec.k + 1, spec.sigma0, theta, ell_max)[spec.k];
}

/// Upper bound for |d^k log zeta_P - d^k phi_P| at sigma0: the ell >= 2 part of
/// the series, sum_p sum_{ell>=2} ell^{k-1} (log p)^k p^{-ell sigma0}.
inline double log_phi_gap_bound(std::span<const prime_t> P, int k, double sigma0) {
  std::vector<double> terms;
  terms.reserve(P.size());
  for (prime_t p : P) {
    double lp = std::log(double(p)), w = std::pow(double(p), -sigma0);
    double s = 0, wl = w;
    for (int ell = 2; ell < 400; ++ell) {
      wl *= w;
      double t = std::pow(double(ell), k - 1) * std::pow(lp, k) * wl;
      s += t;
      if (t < 1e-20 * s) break;
    }
    terms.push_back(s);
  }
  return pairwise_sum(terms);
}

}  // namespace zetascope
