#pragma once

#include <cmath>
#include <vector>

#include "core.hpp"
#include "quadrature.hpp"
#include "zeta.hpp"

namespace zetascope {

/// Lambda(n) for n <= limit from a smallest-prime-factor sieve.
inline std::vector<double> mangoldt_table(std::size_t limit) {
  std::vector<std::uint32_t> spf(limit + 1, 0);
  std::vector<double> lam(limit + 1, 0.0);
  for (std::size_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0)
      for (std::size_t j = i; j <= limit; j += i)
        if (spf[j] == 0) spf[j] = std::uint32_t(i);
    std::size_t p = spf[i], m = i;
    while (m % p == 0) m /= p;
    if (m == 1) lam[i] = std::log(double(p));
  }
  return lam;
}

inline double von_mangoldt(std::uint64_t n) {
  if (n < 2) return 0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    return n == 1 ? std::log(double(p)) : 0.0;
  }
  return std::log(double(n));
}

/// Selberg's damped weight: Lambda(n) below x, linearly damped in log n up to x^2.
inline double lambda_x(std::uint64_t n, double x) {
  require(n >= 1, "n must be positive");
  require(x > 1, "x must exceed 1");
  double L = von_mangoldt(n);
  if (L == 0) return 0;
  double dn = double(n);
  if (dn < x) return L;
  if (dn > x * x) return 0;
  return L * std::log(x * x / dn) / std::log(x);
}

struct SelbergSpec {
  double x = 10;
  std::vector<double> zeros;  // positive ordinates, ascending
  int q_max = 0;              // 0 selects the cutoff automatically
  double covered_lo = 0;      // zeros are complete on (covered_lo, covered_hi]
  double covered_hi = 0;

  void validate() const {
    require(x > 2, "x must exceed 2");
    require(std::is_sorted(zeros.begin(), zeros.end()), "zeros must be ascending");
    for (double g : zeros) require(g > 0, "zero ordinates must be positive");
  }
};

inline SelbergSpec selberg_spec(double x, const ZeroList& zl) {
  SelbergSpec s;
  s.x = x;
  s.zeros = zl.ordinates;
  s.covered_lo = zl.lo;
  s.covered_hi = zl.hi;
  return s;
}

/// Smallest q with x^{-2q - Re s} < 1e-16.
inline int trivial_zero_cutoff(double x, double sigma) {
  double q = (16 * std::log(10.0) / std::log(x) - sigma) / 2;
  return std::max(1, int(std::floor(q)) + 1);
}

namespace detail {

inline constexpr double selberg_window = 50;

inline void check_coverage(const SelbergSpec& spec, cplx s) {
  double t = std::abs(s.imag());
  double need_lo = std::max(0.0, t - selberg_window), need_hi = t + selberg_window;
  // no zeros lie below ordinate 14
  bool lo_ok = spec.covered_lo <= need_lo || spec.covered_lo < 14;
  if (!lo_ok || spec.covered_hi < need_hi)
    throw error(errc::insufficient_zeros, "zeros cover (" + std::to_string(spec.covered_lo) + ", " +
                                              std::to_string(spec.covered_hi) + "] but [" + std::to_string(need_lo) +
                                              ", " + std::to_string(need_hi) + "] is needed");
}

inline std::vector<cplx> zero_set(const SelbergSpec& spec) {
  std::vector<cplx> rho;
  for (double g : spec.zeros) {
    rho.emplace_back(0.5, g);
    rho.emplace_back(0.5, -g);
  }
  return rho;
}

}  // namespace detail

/// The trivial-zero series (1/log x) sum_q (x^{-2q-s} - x^{-2(2q+s)})/(2q+s)^2.
inline cplx selberg_q_series(cplx s, double x, int q_max = 0) {
  if (q_max <= 0) q_max = trivial_zero_cutoff(x, s.real());
  double lx = std::log(x);
  std::vector<cplx> t;
  for (int q = 1; q <= q_max; ++q) {
    cplx z = 2.0 * q + s;
    t.push_back((std::exp(-z * lx) - std::exp(-2.0 * z * lx)) / (z * z));
  }
  return pairwise_sum(t) / lx;
}

struct SelbergValue {
  cplx value;
  double residual = 0;  // |value - reference|
  cplx reference;
};

/// zeta'/zeta(s) through Selberg's explicit formula with the supplied zeros;
/// the reference is zeta'/zeta from Cauchy quadrature on zeta.
inline SelbergValue selberg_zeta_prime_over_zeta(cplx s, const SelbergSpec& spec) {
  spec.validate();
  detail::check_coverage(spec, s);
  require(std::abs(s - 1.0) > 1e-9, "s must avoid the pole");
  const double x = spec.x, lx = std::log(x);
  auto nmax = std::size_t(std::floor(x * x));
  auto lam = mangoldt_table(nmax);
  std::vector<cplx> terms;
  for (std::size_t n = 2; n <= nmax; ++n) {
    if (lam[n] == 0) continue;
    double dn = double(n);
    double w = dn < x ? lam[n] : lam[n] * std::log(x * x / dn) / lx;
    terms.push_back(-w * std::exp(-s * std::log(dn)));
  }
  cplx main = pairwise_sum(terms);
  cplx one_s = 1.0 - s;
  cplx pole = (std::exp(2.0 * one_s * lx) - std::exp(one_s * lx)) / (one_s * one_s * lx);
  cplx qs = selberg_q_series(s, x, spec.q_max);
  std::vector<cplx> zt;
  for (cplx rho : detail::zero_set(spec)) {
    cplx d = rho - s;
    if (std::abs(d) < 1e-9) throw error(errc::path_through_zero, "s coincides with a supplied zero");
    zt.push_back((std::exp(d * lx) - std::exp(2.0 * d * lx)) / (d * d));
  }
  SelbergValue v;
  v.value = main + pole + qs + pairwise_sum(zt) / lx;
  auto d = zeta_derivs(s, 2);
  v.reference = d.values[1] / d.values[0];
  v.residual = std::abs(v.value - v.reference);
  return v;
}

/// F(s, z) = integral from s+10 to s of (x^{z-w} - x^{2(z-w)})/(w-z)^2 dw along the straight segment.
inline cplx selberg_F(cplx s, cplx z, double x, double tol = 1e-14) {
  double lx = std::log(x);
  if (std::abs(s.imag() - z.imag()) < 1e-12 && z.real() >= s.real() && z.real() <= s.real() + 10)
    throw error(errc::path_through_zero, "the integration segment passes through a singular point");
  auto f = [&](double u) {
    cplx d = z - (s + u);
    return (std::exp(d * lx) - std::exp(2.0 * d * lx)) / (d * d);
  };
  // breaks where the integrand varies fastest: near Re z and at the start
  std::vector<double> br = {0.0};
  double rz = z.real() - s.real();
  for (double b : {rz - 1.0, rz, rz + 1.0, 1.0, 3.0})
    if (b > br.back() + 1e-9 && b < 10.0) br.push_back(b);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  br.push_back(10.0);
  auto r = quad::adaptive(f, br, tol);
  if (!r.converged) throw error(errc::quadrature_failure, "F(s,z) quadrature did not converge");
  return -r.value;
}

/// log zeta(s) through the integrated explicit formula; reference is the tracked log.
inline SelbergValue selberg_log_zeta(cplx s, const SelbergSpec& spec) {
  spec.validate();
  detail::check_coverage(spec, s);
  const double x = spec.x, lx = std::log(x), sigma = s.real();
  require(sigma + 9 > 0.5, "Re s too small for the shifted Dirichlet tail");
  // tail of the shifted sum: sum_{n > M} n^{-(sigma+10)} < M^{-(sigma+9)}/(sigma+9) < 1e-13
  double M = std::exp(std::log(1e13 / (sigma + 9)) / (sigma + 9));
  auto nmax = std::size_t(std::ceil(std::max(x * x, M)));
  auto lam = mangoldt_table(nmax);
  std::vector<cplx> a, b;
  for (std::size_t n = 2; n <= nmax; ++n) {
    if (lam[n] == 0) continue;
    double dn = double(n), ln = std::log(dn);
    double w = dn < x ? lam[n] : (dn <= x * x ? lam[n] * std::log(x * x / dn) / lx : 0.0);
    if (w != 0) a.push_back(w * std::exp(-s * ln) / ln);
    if (dn > x) b.push_back((lam[n] - w) * std::exp(-(s + 10.0) * ln) / ln);
  }
  std::vector<cplx> corr;
  corr.push_back(-selberg_F(s, 1.0, x));
  for (cplx rho : detail::zero_set(spec)) corr.push_back(selberg_F(s, rho, x));
  int q_max = spec.q_max > 0 ? spec.q_max : trivial_zero_cutoff(x, sigma);
  for (int q = 1; q <= q_max; ++q) corr.push_back(selberg_F(s, cplx(-2.0 * q, 0), x));
  SelbergValue v;
  v.value = pairwise_sum(a) + pairwise_sum(b) + pairwise_sum(corr) / lx;
  v.reference = log_zeta_tracked(s.real(), s.imag());
  v.residual = std::abs(v.value - v.reference);
  return v;
}

}  // namespace zetascope
