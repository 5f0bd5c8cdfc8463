#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "core.hpp"

namespace zetascope {

/// Solves sum_j nodes_j^k z_j = rhs_k (k < N) by the Bjorck-Pereyra recurrence,
/// carried out in extended precision.
inline std::vector<cplx> solve_vandermonde(std::span<const double> nodes, std::span<const cplx> rhs) {
  const std::size_t n = nodes.size();
  require(n >= 1 && rhs.size() == n, "solve_vandermonde needs N nodes and N right-hand sides");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double scale = std::max({1.0, std::abs(nodes[i]), std::abs(nodes[j])});
      if (std::abs(nodes[i] - nodes[j]) <= 1e-12 * scale)
        throw error(errc::degenerate_nodes, "nodes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    }
  using ld = long double;
  using lc = std::complex<long double>;
  std::vector<lc> b(rhs.begin(), rhs.end());
  std::vector<ld> x(nodes.begin(), nodes.end());
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (std::size_t i = n - 1; i > k; --i) b[i] -= x[k] * b[i - 1];
  for (std::size_t kk = n - 1; kk-- > 0;) {
    for (std::size_t i = kk + 1; i < n; ++i) b[i] /= (x[i] - x[i - kk - 1]);
    for (std::size_t i = kk; i + 1 < n; ++i) b[i] -= b[i + 1];
  }
  std::vector<cplx> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = cplx(double(b[i].real()), double(b[i].imag()));
  return z;
}

/// rhs_k = sum_j nodes_j^k z_j
inline std::vector<cplx> vandermonde_apply(std::span<const double> nodes, std::span<const cplx> z) {
  std::vector<cplx> out(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::complex<long double> s = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      s += std::pow((long double)nodes[j], (int)k) * std::complex<long double>(z[j].real(), z[j].imag());
    out[k] = cplx(double(s.real()), double(s.imag()));
  }
  return out;
}

namespace detail {

inline double phase_of(cplx direction) { return frac01(-std::arg(direction) / two_pi); }

inline double clamp_cos(double c) { return std::max(-1.0, std::min(1.0, c)); }

/// Unit vector u with |A u| = A and |z - A u| = B (two-arm law of cosines).
inline cplx first_arm(cplx z, double A, double B) {
  double d = std::abs(z);
  if (d == 0.0) return {1.0, 0.0};
  double c = clamp_cos((A * A + d * d - B * B) / (2.0 * A * d));
  return (z / d) * std::polar(1.0, std::acos(c));
}

/// Longest-processing-time split into `groups` bins; returns bin index per radius.
inline std::vector<int> lpt_split(std::span<const double> radii, int groups, std::vector<double>& sums) {
  std::vector<std::size_t> order(radii.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });
  sums.assign(groups, 0.0);
  std::vector<int> bin(radii.size());
  for (std::size_t i : order) {
    int g = int(std::min_element(sums.begin(), sums.end()) - sums.begin());
    bin[i] = g;
    sums[g] += radii[i];
  }
  return bin;
}

}  // namespace detail

/// Phases theta_j (turns) with sum_j r_j e^{-2 pi i theta_j} = z. Radii are split
/// into two groups that each share one phase and are placed by the law of
/// cosines. When no two-group split reaches |z| (|S1 - S2| > |z|) a third group
/// is swung first so the remaining two arms can close the triangle.
inline std::vector<double> solve_phases_for_target(std::span<const double> radii, cplx z) {
  require(!radii.empty(), "need at least one radius");
  for (double r : radii) require(r > 0, "radii must be positive");
  double total = 0;
  for (double r : radii) total += r;
  double d = std::abs(z);
  // the summed radii carry rounding of order m ulps
  const double slack = 4.0 * double(radii.size()) * std::numeric_limits<double>::epsilon() * total;
  if (d > total + slack)
    throw error(errc::unreachable, "|z| = " + std::to_string(d) + " exceeds the disk radius " + std::to_string(total));

  std::vector<double> phases(radii.size());
  if (d >= total - slack) {  // boundary of the disk: every link aligned with z
    std::fill(phases.begin(), phases.end(), detail::phase_of(z));
    return phases;
  }
  if (radii.size() == 1) {
    if (std::abs(d - radii[0]) > 1e-12 * radii[0])
      throw error(errc::infeasible_partition, "a single term only reaches |z| = " + std::to_string(radii[0]));
    phases[0] = detail::phase_of(d > 0 ? z : cplx(1.0, 0.0));
    return phases;
  }

  std::vector<double> sums;
  auto bin = detail::lpt_split(radii, 2, sums);
  if (std::abs(sums[0] - sums[1]) <= d) {
    cplx u0 = detail::first_arm(z, sums[0], sums[1]);
    cplx rest = z - sums[0] * u0;
    cplx u1 = std::abs(rest) > 0 ? rest / std::abs(rest) : -u0;
    double ph[2] = {detail::phase_of(u0), detail::phase_of(u1)};
    for (std::size_t i = 0; i < radii.size(); ++i) phases[i] = ph[bin[i]];
    return phases;
  }
  if (radii.size() == 2)
    throw error(errc::infeasible_partition, "two terms cannot reach inside radius " + std::to_string(std::abs(sums[0] - sums[1])));

  bin = detail::lpt_split(radii, 3, sums);
  // largest bin first
  int order[3] = {0, 1, 2};
  std::sort(order, order + 3, [&](int a, int b) { return sums[a] > sums[b]; });
  double A = sums[order[0]], B = sums[order[1]], C = sums[order[2]];
  double inner = std::max(0.0, A - B - C);
  if (d < inner)
    throw error(errc::infeasible_partition, "one term dominates; reachable values start at radius " + std::to_string(inner));
  // choose |z - C u| = D inside both [|A-B|, A+B] and [|d-C|, d+C]
  double lo = std::max(std::abs(A - B), std::abs(d - C)), hi = std::min(A + B, d + C);
  double D = 0.5 * (lo + hi);
  cplx uc;
  if (d == 0.0) {
    uc = {1.0, 0.0};
  } else {
    double c = detail::clamp_cos((d * d + C * C - D * D) / (2.0 * d * C));
    uc = (z / d) * std::polar(1.0, std::acos(c));
  }
  cplx w = z - C * uc;
  cplx ua = detail::first_arm(w, A, B);
  cplx rest = w - A * ua;
  cplx ub = std::abs(rest) > 0 ? rest / std::abs(rest) : -ua;
  double ph[3];
  ph[order[0]] = detail::phase_of(ua);
  ph[order[1]] = detail::phase_of(ub);
  ph[order[2]] = detail::phase_of(uc);
  for (std::size_t i = 0; i < radii.size(); ++i) phases[i] = ph[bin[i]];
  return phases;
}

/// sum_j r_j e^{-2 pi i theta_j}
inline cplx linkage_value(std::span<const double> radii, std::span<const double> phases) {
  std::vector<cplx> t(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) t[i] = radii[i] * std::polar(1.0, -two_pi * phases[i]);
  return pairwise_sum(t);
}

}  // namespace zetascope
