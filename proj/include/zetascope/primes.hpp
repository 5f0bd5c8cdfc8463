#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"

namespace zetascope {

struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<prime_t> primes;

  std::size_t size() const { return primes.size(); }
  /// Number of primes <= x (x may exceed limit only up to limit).
  std::size_t count_upto(double x) const {
    return std::upper_bound(primes.begin(), primes.end(), x,
                            [](double v, prime_t p) { return v < static_cast<double>(p); }) -
           primes.begin();
  }
};

namespace detail {
inline std::vector<prime_t> small_sieve(std::uint64_t limit) {
  std::vector<prime_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i * i <= limit; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  for (std::uint64_t i = 2; i <= limit; ++i)
    if (!composite[i]) out.push_back(i);
  return out;
}
}  // namespace detail

/// Primes in the closed range [lo, hi] by a segmented sieve of Eratosthenes.
/// Only the base primes up to sqrt(hi) are materialized.
inline std::vector<prime_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<prime_t> out;
  if (hi < 2 || lo > hi) return out;
  lo = std::max<std::uint64_t>(lo, 2);
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi)));
  while (root * root > hi) --root;
  while ((root + 1) * (root + 1) <= hi) ++root;
  const auto base = detail::small_sieve(root);
  constexpr std::uint64_t segment = 1 << 18;
  std::vector<char> mark;
  for (std::uint64_t a = lo; a <= hi; a += segment) {
    std::uint64_t b = std::min(hi, a + segment - 1);
    mark.assign(b - a + 1, 1);
    for (prime_t p : base) {
      if (p * p > b) break;
      std::uint64_t start = std::max(p * p, (a + p - 1) / p * p);
      for (std::uint64_t m = start; m <= b; m += p) mark[m - a] = 0;
    }
    for (std::uint64_t i = 0; i < mark.size(); ++i)
      if (mark[i]) out.push_back(a + i);
    if (b == hi) break;
  }
  return out;
}

inline PrimeTable primes_up_to(std::uint64_t limit) {
  return PrimeTable{limit, primes_in_range(2, limit)};
}

struct ShortIntervalCount {
  std::size_t count = 0;
  double prediction = 0;
};

/// Primes in (x, x+h] against the short-interval prediction h / log x.
inline ShortIntervalCount short_interval_count(double x, double h) {
  require(x > 1, "x must exceed 1");
  require(h >= 0, "h must be nonnegative");
  ShortIntervalCount r;
  r.prediction = h / std::log(x);
  auto lo = static_cast<std::uint64_t>(std::floor(x)) + 1;  // first integer > x
  auto hi = static_cast<std::uint64_t>(std::floor(x + h));
  if (hi >= lo) r.count = primes_in_range(lo, hi).size();
  return r;
}

/// Dyadic prime blocks M_j = {p : U_j <= p < U_j + V}, U_j = U0 2^j.
struct BlockSystem {
  double U0 = 0;
  int N = 0;
  double V = 0;
  double sigma0 = 0;
  std::vector<std::vector<prime_t>> blocks;
  std::vector<double> nodes;       // -log U_j
  std::vector<int> thin;           // indices of blocks with fewer than three primes

  double U(int j) const { return U0 * std::ldexp(1.0, j); }
  /// Union of all blocks, ascending.
  std::vector<prime_t> members() const {
    std::vector<prime_t> all;
    for (const auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    return all;
  }
  prime_t max_member() const {
    prime_t m = 0;
    for (const auto& b : blocks)
      if (!b.empty()) m = std::max(m, b.back());
    return m;
  }
};

inline double block_width(double U0, double sigma0) { return std::pow(U0, (1.0 + 3.0 * sigma0) / 4.0); }

inline BlockSystem build_blocks(double U0, int N, double sigma0) {
  require(U0 > 1, "U0 must exceed 1");
  require(N >= 1, "N must be at least 1");
  require(sigma0 > 0.5 && sigma0 < 1.0, "sigma0 must lie in (1/2,1)");
  BlockSystem bs;
  bs.U0 = U0;
  bs.N = N;
  bs.sigma0 = sigma0;
  bs.V = block_width(U0, sigma0);
  for (int j = 0; j < N; ++j) {
    double Uj = bs.U(j);
    auto lo = static_cast<std::uint64_t>(std::ceil(Uj));
    // p < Uj + V  <=>  p <= ceil(Uj + V) - 1
    auto hi = static_cast<std::uint64_t>(std::ceil(Uj + bs.V)) - 1;
    auto block = primes_in_range(lo, hi);
    if (block.empty())
      throw error(errc::empty_block, "block " + std::to_string(j) + " = [" + std::to_string(Uj) + ", " +
                                         std::to_string(Uj + bs.V) + ") contains no prime; enlarge U0");
    if (block.size() < 3) bs.thin.push_back(j);
    bs.blocks.push_back(std::move(block));
    bs.nodes.push_back(-std::log(Uj));
  }
  return bs;
}

}  // namespace zetascope
