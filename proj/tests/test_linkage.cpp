#include <gtest/gtest.h>

#include <random>

#include "zetascope/linkage.hpp"

using namespace zetascope;

namespace {

// rhs_k = sum_j x_j^k z_j by plain double loops
std::vector<cplx> apply_oracle(const std::vector<double>& x, const std::vector<cplx>& z) {
  std::vector<cplx> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t j = 0; j < x.size(); ++j) out[k] += std::pow(x[j], double(k)) * z[j];
  return out;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(Vandermonde, ClosedForms) {
  std::vector<double> x1 = {-2.0};
  std::vector<cplx> w1 = {cplx(0.3, -1)};
  EXPECT_EQ(solve_vandermonde(x1, w1)[0], w1[0]);
  std::vector<double> x = {-1.5, -3.25};
  std::vector<cplx> w = {cplx(1, 2), cplx(-0.5, 0.25)};
  auto z = solve_vandermonde(x, w);
  cplx z1 = (w[1] - x[0] * w[0]) / (x[1] - x[0]);
  EXPECT_NEAR(std::abs(z[1] - z1), 0, 1e-15);
  EXPECT_NEAR(std::abs(z[0] - (w[0] - z1)), 0, 1e-15);
}

TEST(Vandermonde, RandomThreeByThree) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x = {u(rng), u(rng), u(rng)};
    if (std::abs(x[0] - x[1]) < 0.1 || std::abs(x[1] - x[2]) < 0.1 || std::abs(x[0] - x[2]) < 0.1) continue;
    std::vector<cplx> w = {{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    EXPECT_LT(max_diff(apply_oracle(x, solve_vandermonde(x, w)), w), 1e-10);
  }
}

TEST(Vandermonde, RoundTripLogNodes) {
  // evaluate then solve: z -> V z -> z
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double U0 : {10.0, 100.0, 1000.0})
    for (int N = 1; N <= 6; ++N) {
      std::vector<double> x;
      std::vector<cplx> z;
      for (int j = 0; j < N; ++j) {
        x.push_back(-std::log(U0 * std::ldexp(1.0, j)));
        z.emplace_back(u(rng), u(rng));
      }
      auto back = solve_vandermonde(x, vandermonde_apply(x, z));
      EXPECT_LT(max_diff(back, z), 1e-10) << U0 << ' ' << N;
      // backward error of the solve, relative to the size of the terms
      auto w = apply_oracle(x, z);
      auto zz = solve_vandermonde(x, w);
      double scale = 0;
      for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j) scale = std::max(scale, std::pow(std::abs(x[j]), double(k)) * std::abs(zz[j]));
      EXPECT_LT(max_diff(apply_oracle(x, zz), w) / scale, 1e-13);
    }
}

TEST(Vandermonde, DegenerateNodes) {
  std::vector<double> x = {-1, -1};
  std::vector<cplx> w = {1, 1};
  try {
    solve_vandermonde(x, w);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_nodes);
  }
}

TEST(Linkage, Examples) {
  std::vector<double> r2 = {1, 1};
  auto ph = solve_phases_for_target(r2, 1.0);
  EXPECT_NEAR(std::abs(linkage_value(r2, ph) - cplx(1)), 0, 1e-14);
  double a = frac01(ph[0] + 0.5) - 0.5, b = frac01(ph[1] + 0.5) - 0.5;
  EXPECT_NEAR(std::min(a, b), -1.0 / 6, 1e-12);
  EXPECT_NEAR(std::max(a, b), 1.0 / 6, 1e-12);

  std::vector<double> r3 = {0.3, 0.3, 0.3};
  auto p3 = solve_phases_for_target(r3, 0.9);
  for (double p : p3) EXPECT_NEAR(std::min(p, 1 - p), 0, 1e-7);
  EXPECT_NEAR(std::abs(linkage_value(r3, p3) - cplx(0.9)), 0, 1e-12);

  std::vector<double> r1 = {1};
  try {
    solve_phases_for_target(r1, 0.5);
    FAIL();
  } catch (const error& e) {
    EXPECT_TRUE(e.code() == errc::infeasible_partition || e.code() == errc::unreachable);
  }
  auto p1 = solve_phases_for_target(r1, cplx(0, 1));
  EXPECT_NEAR(std::abs(linkage_value(r1, p1) - cplx(0, 1)), 0, 1e-15);
}

TEST(Linkage, RandomFeasibleInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  int solved = 0;
  for (int t = 0; t < 1000; ++t) {
    int m = 2 + int(rng() % 49);
    std::vector<double> r(m);
    for (auto& x : r) x = 0.05 + u(rng);
    // target drawn from the set of realizable sums
    std::vector<double> th(m);
    for (auto& x : th) x = u(rng);
    cplx z = linkage_value(r, th);
    auto ph = solve_phases_for_target(r, z);
    double res = std::abs(linkage_value(r, ph) - z);
    EXPECT_LT(res, 1e-12) << "m = " << m;
    solved += res < 1e-12;
  }
  EXPECT_EQ(solved, 1000);
}

TEST(Linkage, UnreachableExactlyOutsideDisk) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 500; ++t) {
    int m = 3 + int(rng() % 20);
    std::vector<double> r(m);
    double total = 0;
    for (auto& x : r) total += (x = 0.1 + u(rng));
    double d = total * (0.5 + u(rng));
    cplx z = std::polar(d, 2 * std::numbers::pi * u(rng));
    bool threw_unreachable = false;
    try {
      auto ph = solve_phases_for_target(r, z);
      EXPECT_LT(std::abs(linkage_value(r, ph) - z), 1e-12);
    } catch (const error& e) {
      threw_unreachable = e.code() == errc::unreachable;
    }
    EXPECT_EQ(threw_unreachable, d > total) << d << " vs " << total;
  }
}

TEST(Linkage, TwoLinkBruteForceGrid) {
  // for m = 2, scan both phases on a fine grid and compare reachability
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  const int G = 720;
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    std::vector<double> r = {0.2 + u(rng), 0.2 + u(rng)};
    double d = 2.5 * u(rng);
    double lo = std::abs(r[0] - r[1]), hi = r[0] + r[1];
    if (std::abs(d - lo) < 0.05 || std::abs(d - hi) < 0.05) continue;
    cplx z = std::polar(d, 2 * std::numbers::pi * u(rng));
    double best = 1e9;
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j) {
        cplx v = r[0] * std::polar(1.0, -2 * std::numbers::pi * i / G) + r[1] * std::polar(1.0, -2 * std::numbers::pi * j / G);
        best = std::min(best, std::abs(v - z));
      }
    bool oracle_reachable = best < 2 * std::numbers::pi * hi / G;
    bool solved = true;
    errc code = errc::invalid_argument;
    try {
      auto ph = solve_phases_for_target(r, z);
      EXPECT_LT(std::abs(linkage_value(r, ph) - z), 1e-12);
    } catch (const error& e) {
      solved = false;
      code = e.code();
    }
    EXPECT_EQ(solved, oracle_reachable) << d;
    if (!solved) {
      EXPECT_EQ(code, d > hi ? errc::unreachable : errc::infeasible_partition);
    }
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

TEST(Linkage, ZeroTargetAntipodal) {
  std::vector<double> r = {0.5, 0.3, 0.2};
  auto ph = solve_phases_for_target(r, 0.0);
  EXPECT_LT(std::abs(linkage_value(r, ph)), 1e-14);
}
