#include <gtest/gtest.h>

#include "zetascope/omega_solver.hpp"

using namespace zetascope;

namespace {

// sum_p sum_l (1/l) e^{-2 pi i l theta_p} (-l log p)^k p^{-l sigma}, term by term
cplx log_euler_oracle(const std::vector<prime_t>& P, const PhaseAssignment& th, double sigma, int k) {
  cplx total = 0;
  for (auto it = P.rbegin(); it != P.rend(); ++it) {
    double p = double(*it), lp = std::log(p);
    cplx s = 0;
    for (int l = 1; l < 400; ++l) {
      double mag = std::pow(p, -l * sigma);
      if (mag < 1e-22) break;
      s += std::polar(1.0, -2 * std::numbers::pi * l * th(*it)) * std::pow(-l * lp, k) * mag / double(l);
    }
    total += s;
  }
  return total;
}

std::vector<prime_t> primes_to(double Q) { return primes_up_to(std::uint64_t(Q)).primes; }

}  // namespace

TEST(Tail, SmallClosedForm) {
  TargetSpec spec{1, 0.75, {cplx(0)}, 0.1};
  auto tc = tail_constants(spec, std::span<const prime_t>{}, 3);
  double ref = -std::log(1 - std::pow(2.0, -0.75)) - std::log(1 + std::pow(3.0, -0.75));
  EXPECT_NEAR(tc.gamma[0].real(), ref, 1e-14);
  EXPECT_NEAR(tc.gamma[0].real(), 0.5391559, 1e-7);
  auto empty = tail_constants(spec, std::span<const prime_t>{}, 1);
  EXPECT_EQ(empty.gamma[0], cplx(0));
}

TEST(Tail, DoubleSumOracle) {
  TargetSpec spec{2, 0.6, {cplx(0), cplx(0)}, 0.1};
  auto tc = tail_constants(spec, std::span<const prime_t>{}, 100);
  auto P = primes_to(100);
  auto th = theta_alternating(primes_up_to(100));
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(std::abs(tc.gamma[k] - log_euler_oracle(P, th, 0.6, k)), 0, 1e-12) << k;
}

TEST(Bounds, QLowerBound) {
  BoundConstants c;
  EXPECT_DOUBLE_EQ(q_lower_bound({1, 0.75, {cplx(0)}, 0.5}, c).log_value, 64 * std::log(2.0));
  c.c1 = 3.5;
  EXPECT_NEAR(q_lower_bound({1, 0.75, {cplx(0)}, 1 - 1e-15}, c).value, 3.5, 1e-9);
  c.c1 = 1;
  EXPECT_NEAR(threshold_exponent(0.9), 100, 1e-12);
  auto v = q_lower_bound({1, 0.9, {cplx(3)}, 0.1}, c);
  EXPECT_NEAR(v.log_value, 100 * std::log(13.0), 1e-10);
  EXPECT_FALSE(v.overflow);
  auto big = q_lower_bound({1, 0.99, {cplx(3)}, 0.01}, c);
  EXPECT_TRUE(big.overflow);
}

TEST(Bounds, TLowerBound) {
  BoundConstants c;
  double e = std::exp(1.0);
  EXPECT_NEAR(t_lower_bound_theorem1({1, 0.75, {cplx(e - 2)}, 0.5}, c), 64, 1e-12);
  c.C1 = 2;
  EXPECT_NEAR(t_lower_bound_theorem1({1, 0.6, {cplx(1)}, 0.5}, c), std::log(2.0) + 100 * std::log(3.0), 1e-10);
  c.C1 = 1;
  // ||a|| + 1/eps -> 1 gives log log T -> 0
  EXPECT_NEAR(t_lower_bound_theorem1({1, 0.75, {cplx(0)}, 1 - 1e-12}, c), 0, 1e-9);
}

TEST(Spec, Validation) {
  EXPECT_THROW(TargetSpec({1, 0.4, {cplx(1)}, 0.1}).validate(), error);
  EXPECT_THROW(TargetSpec({1, 0.75, {cplx(1)}, 1.5}).validate(), error);
  EXPECT_THROW(TargetSpec({2, 0.75, {cplx(1)}, 0.1}).validate(), error);
  try {
    TargetSpec{1, 0.4, {cplx(1)}, 0.1}.validate();
  } catch (const error& ex) {
    EXPECT_NE(std::string(ex.what()).find("sigma0 must lie in (1/2,1)"), std::string::npos);
  }
}

TEST(Construct, TargetsEqualTailGiveZeroBlockTargets) {
  const double U0 = 100;
  const int N = 2;
  const double sigma0 = 0.75;
  double Q = detail::q_for_u0(U0, N);
  auto bs = build_blocks(U0, N, sigma0);
  TargetSpec probe{N, sigma0, {cplx(0), cplx(0)}, 0.1};
  auto tc = tail_constants(probe, bs, Q);
  TargetSpec spec{N, sigma0, tc.gamma, 0.1};
  OmegaOptions opt;
  opt.u0 = U0;
  auto res = construct_theta0(spec, BoundConstants{}, opt);
  for (auto z : res.report.z) EXPECT_LT(std::abs(z), 1e-12);
  EXPECT_LT(res.report.max_residual(), 0.1);
}

TEST(Construct, SingleTargetVerifiedIndependently) {
  TargetSpec spec{1, 0.75, {cplx(1.0)}, 0.1};
  auto res = construct_theta0(spec, BoundConstants{});
  const auto& rep = res.report;
  auto P = primes_to(rep.Q);
  cplx v = log_euler_oracle(P, res.theta0, spec.sigma0, 0);
  EXPECT_LT(std::abs(v - spec.a[0]), spec.eps);
  EXPECT_NEAR(std::abs(v - spec.a[0]), rep.residuals[0], 1e-9);
}

TEST(Construct, ThreeTargetsAtSigmaPointSix) {
  // the construction's reach at desk-scale U0 is far below ||a|| here; expected to fail
  TargetSpec spec{3, 0.6, {cplx(0), cplx(1), cplx(-1)}, 0.25};
  auto res = construct_theta0(spec, BoundConstants{});
  auto P = primes_to(res.report.Q);
  for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(log_euler_oracle(P, res.theta0, 0.6, k) - spec.a[k]), 0.25);
}

TEST(Construct, DeskScaleWithoutCalibration) {
  TargetSpec spec{1, 0.75, {cplx(1.0)}, 0.1};
  OmegaOptions opt;
  opt.auto_calibrate = false;
  try {
    construct_theta0(spec, BoundConstants{}, opt);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::desk_scale_exceeded);
  }
}

TEST(Construct, BlockRadiusLowerBound) {
  TargetSpec spec{2, 0.75, {cplx(0.5), cplx(0)}, 0.25};
  OmegaOptions opt;
  opt.u0 = 1000;
  try {
    auto res = construct_theta0(spec, BoundConstants{}, opt);
    auto bs = build_blocks(1000, 2, 0.75);
    for (int j = 0; j < 2; ++j)
      EXPECT_GE(res.report.blocks[j].radius, double(bs.blocks[j].size()) * std::pow(bs.U(j) + bs.V, -0.75));
  } catch (const error& e) {
    // the radius property is still checkable on the blocks themselves
    auto bs = build_blocks(1000, 2, 0.75);
    for (int j = 0; j < 2; ++j) {
      double r = 0;
      for (prime_t p : bs.blocks[j]) r += std::pow(double(p), -0.75);
      EXPECT_GE(r, double(bs.blocks[j].size()) * std::pow(bs.U(j) + bs.V, -0.75));
    }
  }
}

TEST(Calibrate, ReportsAttempts) {
  TargetSpec spec{1, 0.75, {cplx(1.0)}, 0.1};
  auto cr = calibrate_u0(spec, BoundConstants{});
  ASSERT_TRUE(cr.result.has_value());
  EXPECT_TRUE(cr.result->report.calibrated);
  EXPECT_EQ(cr.result->report.attempts, int(cr.failures.size()) + 1);
  for (auto& f : cr.failures) EXPECT_LT(f.U0, cr.result->report.U0);
}
