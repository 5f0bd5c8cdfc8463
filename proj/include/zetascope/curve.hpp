#pragma once

#include <quadmath.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "core.hpp"
#include "primes.hpp"
#include "window.hpp"

namespace zetascope {

/// log p / (2 pi) as an unevaluated sum hi + lo of doubles.
struct SplitConstant {
  double hi = 0, lo = 0;
};

inline SplitConstant log_over_two_pi(prime_t p) {
  __float128 q = logq((__float128)p) / (8 * atanq((__float128)1));
  double hi = double(q);
  double lo = double(q - (__float128)hi);
  return {hi, lo};
}

/// frac(t c) with c = hi + lo, using an exact two-product for t hi.
inline double frac_product(double t, SplitConstant c) {
  double p = t * c.hi;
  double e = std::fma(t, c.hi, -p);
  double ip = std::floor(p);
  double f = (p - ip) + (e + t * c.lo);
  return frac01(f);
}

struct TorusPoint {
  std::vector<std::pair<prime_t, double>> coords;  // ascending primes, values in [0, 1)

  double operator()(prime_t p) const {
    for (auto& [q, v] : coords)
      if (q == p) return v;
    throw error(errc::invalid_argument, "prime not on this torus point");
  }
};

/// The curve t -> (t log p / 2 pi mod 1)_p over the primes of the table.
inline TorusPoint gamma(double t, const PrimeTable& table) {
  TorusPoint pt;
  pt.coords.reserve(table.size());
  for (prime_t p : table.primes) pt.coords.emplace_back(p, frac_product(t, log_over_two_pi(p)));
  return pt;
}

/// Finitely supported integer vector n_p with omega = sum n_p log p.
class FrequencyVector {
 public:
  FrequencyVector() = default;
  explicit FrequencyVector(std::map<prime_t, long> n) {
    for (auto& [p, v] : n)
      if (v != 0) n_.emplace_back(p, v);
    __float128 w = 0;
    for (auto& [p, v] : n_) w += (__float128)v * logq((__float128)p);
    omega_ = double(w);
  }

  const std::vector<std::pair<prime_t, long>>& entries() const { return n_; }
  bool is_zero() const { return n_.empty(); }
  double omega() const { return omega_; }

 private:
  std::vector<std::pair<prime_t, long>> n_;
  double omega_ = 0;
};

/// True iff prod p^{n_p} != 1, decided on the exact numerator and denominator.
inline bool frequency_nonzero(const FrequencyVector& n) {
  using boost::multiprecision::cpp_int;
  cpp_int num = 1, den = 1;
  for (auto& [p, v] : n.entries()) {
    cpp_int pw = boost::multiprecision::pow(cpp_int(p), unsigned(v > 0 ? v : -v));
    (v > 0 ? num : den) *= pw;
  }
  return num != den;
}

struct WeylValue {
  cplx value;
  double magnitude = 0;  // closed-form |value|
  double bound = 0;      // 2/|omega|, or H for the zero frequency
};

/// integral_T^{T+H} e^{i t omega} dt = e^{i omega (T + H/2)} 2 sin(omega H / 2) / omega.
inline WeylValue weyl_integral(const FrequencyVector& n, const ScanWindow& w) {
  WeylValue r;
  if (!frequency_nonzero(n)) {
    r.value = w.H;
    r.magnitude = w.H;
    r.bound = w.H;
    return r;
  }
  double om = n.omega();
  double s = 2.0 * std::sin(0.5 * om * w.H) / om;
  r.value = std::polar(1.0, om * (w.T + 0.5 * w.H)) * s;
  r.magnitude = std::abs(s);
  r.bound = 2.0 / std::abs(om);
  return r;
}

}  // namespace zetascope
