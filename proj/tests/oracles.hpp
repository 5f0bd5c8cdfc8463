#pragma once

// Independent reference computations used by the tests. Deliberately naive.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = lo; n <= hi; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

/// Lambda(n) by trial factorization.
inline double mangoldt(std::uint64_t n) {
  if (n < 2) return 0;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      return n == 1 ? std::log(double(p)) : 0.0;
    }
  return std::log(double(n));
}

/// -sum_{n <= limit} Lambda(n) n^{-s}
inline cplx dirichlet_log_deriv(cplx s, std::uint64_t limit) {
  cplx sum = 0;
  for (std::uint64_t n = limit; n >= 2; --n) {
    double l = mangoldt(n);
    if (l != 0) sum -= l * std::exp(-s * std::log(double(n)));
  }
  return sum;
}

/// zeta by plain Euler-Maclaurin in long double with a fixed, generous parameter set (Re s > -5).
inline cplx zeta_em(cplx s_in, int N = 60, int terms = 20) {
  using lc = std::complex<long double>;
  const lc s(s_in.real(), s_in.imag());
  lc sum = 0;
  for (int n = N - 1; n >= 1; --n) sum += std::exp(-s * std::log((long double)n));
  const long double lN = std::log((long double)N);
  const lc Ns = std::exp(-s * lN);
  sum += Ns * (long double)N / (s - 1.0L) + 0.5L * Ns;
  static const std::vector<long double> coef = [] {
    // B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}, zeta(2k) summed directly
    const long double two_pi = 2 * 3.14159265358979323846264338327950288L;
    std::vector<long double> c(41, 0.0L);
    for (int k = 1; k <= 40; ++k) {
      long double z2k = 0;
      const int M = 20000;
      for (int n = M; n >= 1; --n) z2k += std::pow((long double)n, -2.0L * k);
      z2k += std::pow((long double)M, 1.0L - 2 * k) / (2 * k - 1) - 0.5L * std::pow((long double)M, -2.0L * k);
      c[k] = (k % 2 ? 2 : -2) * z2k / std::pow(two_pi, 2.0L * k);
    }
    return c;
  }();
  if (terms > 40) terms = 40;
  lc rising = s;  // s (s+1) ... (s+2k-2)
  lc Npow = Ns / (long double)N;
  for (int k = 1; k <= terms; ++k) {
    sum += coef[k] * rising * Npow;
    rising *= (s + (long double)(2 * k - 1)) * (s + (long double)(2 * k));
    Npow /= (long double)N * (long double)N;
  }
  return {double(sum.real()), double(sum.imag())};
}

}  // namespace oracle
