#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <random>

#include "zetascope/mollifier.hpp"

using namespace zetascope;

namespace {

double shape_integral() {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([](double x) { double d = 1 - x * x; return d > 0 ? std::exp(-1 / d) : 0.0; }, -1.0, 1.0);
}

double alpha_oracle(long n, double delta) {
  boost::math::quadrature::tanh_sinh<double> ts;
  double c = 1 / shape_integral();
  double w = 2 * std::numbers::pi * double(n) * delta;
  // split into pieces so tanh-sinh sees at most a few oscillations each
  int pieces = std::max(4, int(std::abs(w)));
  double s = 0;
  for (int i = 0; i < pieces; ++i) {
    double a = -1 + 2.0 * i / pieces, b = -1 + 2.0 * (i + 1) / pieces;
    s += ts.integrate([&](double x) { double d = 1 - x * x; return d > 0 ? c * std::exp(-1 / d) * std::cos(w * x) : 0.0; }, a, b);
  }
  return s;
}

}  // namespace

TEST(Bump, NormalizationAndSupport) {
  EXPECT_EQ(bump(1), 0.0);
  EXPECT_EQ(bump(-1), 0.0);
  EXPECT_EQ(bump(1.5), 0.0);
  EXPECT_NEAR(bump_normalizer(), 1 / shape_integral(), 1e-13);
  EXPECT_NEAR(bump_normalizer(), 2.2522836210435804, 1e-13);
  EXPECT_NEAR(bump(0), 0.8285688398691049, 1e-13);
  EXPECT_LE(bump(0), 1.0);
}

TEST(Fourier, CoefficientsAgainstIndependentQuadrature) {
  for (double delta : {0.25, 0.1, 1.0 / 16}) {
    auto fd = fourier_coeffs(MollifierSpec::make(3, 60, delta));
    EXPECT_NEAR(fd.alpha[0], 1.0, 1e-10);
    for (long n : {1, 2, 5, 17, 40}) EXPECT_NEAR(fd.alpha[n], alpha_oracle(n, delta), 1e-11) << delta << ' ' << n;
  }
}

TEST(Fourier, DecayConstantStable) {
  std::vector<double> c;
  for (double delta : {0.25, 0.125, 0.0625}) c.push_back(fourier_coeffs(MollifierSpec::make(3, 100, delta)).decay_constant);
  double lo = *std::min_element(c.begin(), c.end()), hi = *std::max_element(c.begin(), c.end());
  EXPECT_LE(hi / lo, 2.0) << c[0] << ' ' << c[1] << ' ' << c[2];
}

TEST(Fourier, ReconstructionWithinTail) {
  const double delta = 0.2;
  auto spec = MollifierSpec::make(3, 40, delta);
  auto fd = fourier_coeffs(spec);
  double tail = 0;
  for (long n = 41; n <= 400; ++n) tail += 2 * std::abs(fourier_coefficient(n, delta));
  for (double th = -0.5; th <= 0.5; th += 0.01)
    EXPECT_LE(std::abs(fourier_partial_sum(fd, th) - lambda_delta(th, delta)), tail + 1e-12) << th;
}

TEST(MollifierSpec, Validation) {
  EXPECT_THROW(MollifierSpec::make(3, 10, 0.5), error);
  EXPECT_THROW(MollifierSpec::make(2, 10), error);
  EXPECT_NO_THROW(MollifierSpec::make(2, 10, 0.25));
  EXPECT_DOUBLE_EQ(MollifierSpec::make(4, 10).delta, 0.25);
}

TEST(LQ, Examples) {
  auto table = primes_up_to(7);
  auto spec = MollifierSpec::make(7, 10, 0.2);
  PhaseAssignment zero;
  EXPECT_NEAR(L_Q(zero, spec, table), std::pow(bump(0) / 0.2, 4), 1e-12);
  PhaseAssignment half({{5, 0.5}});
  EXPECT_EQ(L_Q(half, spec, table), 0.0);
}

TEST(LQ, SupportProperty) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  auto table = primes_up_to(13);
  auto spec = MollifierSpec::make(13, 10, 0.3);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::pair<prime_t, double>> e;
    for (prime_t p : table.primes) e.emplace_back(p, u(rng));
    PhaseAssignment th(e);
    double v = L_Q(th, spec, table);
    EXPECT_GE(v, 0.0);
    if (v > 0) {
      for (prime_t p : table.primes) EXPECT_LT(std::abs(th(p) - std::round(th(p))), 0.3);
    }
  }
}

TEST(Truncation, Remainder) {
  auto table = primes_up_to(3);
  auto r = truncation_remainder(MollifierSpec::make(3, 100, 1.0 / 3), table);
  EXPECT_NEAR(r.value, 3 * 729 / (100 * std::log(3.0)), 1e-9);
  EXPECT_NEAR(r.value, 19.91, 0.01);
  auto big_m = truncation_remainder(MollifierSpec::make(3, 2000000000, 1.0 / 3), table);
  EXPECT_LT(big_m.value, 1e-6);
}

TEST(CurveMean, SinglePrimeEquidistributes) {
  double H = 1e5 * 2 * std::numbers::pi / std::log(2.0);
  auto spec = MollifierSpec::make(2, 10, 0.25);
  auto m = mean_over_curve(spec, ScanWindow(1e6, H), PhaseAssignment());
  EXPECT_LT(m.deviation, 1e-2);
}

TEST(CurveMean, UnitProfile) {
  auto spec = MollifierSpec::make(5, 10, 0.2);
  spec.unit_profile = true;
  EXPECT_NEAR(mean_over_curve(spec, ScanWindow(1e5, 1e3), PhaseAssignment()).mean, 1.0, 1e-12);
}

TEST(CurveMean, AgainstTrapezoidOracle) {
  auto spec = MollifierSpec::make(3, 10, 1.0 / 3);
  const double T = 1e5, H = 1e3;
  auto m = mean_over_curve(spec, ScanWindow(T, H), PhaseAssignment());
  // trapezoid on a fine grid with an independent phase computation
  const int K = 2000000;
  double s = 0;
  for (int k = 0; k <= K; ++k) {
    double t = T + H * k / K, v = 1;
    for (double p : {2.0, 3.0}) {
      double ph = std::fmod(t * std::log(p) / (2 * std::numbers::pi), 1.0);
      ph -= std::round(ph);
      double x = ph * 3;
      v *= (std::abs(x) < 1 ? bump(x) * 3 : 0.0);
    }
    s += (k == 0 || k == K) ? 0.5 * v : v;
  }
  EXPECT_NEAR(m.mean, s / K, 1e-6);
}

TEST(CurveMean, DeviationDecreasesWithH) {
  auto spec = MollifierSpec::make(3, 10, 1.0 / 3);
  double prev = 1e9;
  for (double H : {1e3, 1e4, 1e5}) {
    auto m = mean_over_curve(spec, ScanWindow(1e5, H), PhaseAssignment());
    EXPECT_LT(m.deviation, prev) << H;
    prev = m.deviation;
  }
}
