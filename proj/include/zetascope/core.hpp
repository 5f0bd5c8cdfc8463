#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace zetascope {

using cplx = std::complex<double>;
using prime_t = std::uint64_t;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Failure categories shared across the library. Each maps to one CLI exit code.
enum class errc {
  invalid_argument,
  empty_block,
  unreachable,
  infeasible_partition,
  degenerate_nodes,
  residual_exceeded,
  desk_scale_exceeded,
  overflow,
  quadrature_failure,
  pole_at_1,
  tolerance_unreachable,
  path_through_zero,
  boundary_zero,
  insufficient_zeros,
  reject_zero_b0,
  no_convergence,
  no_hits,
};

inline const char* to_string(errc e) {
  switch (e) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::empty_block: return "EmptyBlock";
    case errc::unreachable: return "Unreachable";
    case errc::infeasible_partition: return "InfeasiblePartition";
    case errc::degenerate_nodes: return "DegenerateNodes";
    case errc::residual_exceeded: return "ResidualExceeded";
    case errc::desk_scale_exceeded: return "DeskScaleExceeded";
    case errc::overflow: return "Overflow";
    case errc::quadrature_failure: return "QuadratureFailure";
    case errc::pole_at_1: return "PoleAt1";
    case errc::tolerance_unreachable: return "ToleranceUnreachable";
    case errc::path_through_zero: return "PathThroughZero";
    case errc::boundary_zero: return "BoundaryZero";
    case errc::insufficient_zeros: return "InsufficientZeros";
    case errc::reject_zero_b0: return "RejectZeroB0";
    case errc::no_convergence: return "NoConvergence";
    case errc::no_hits: return "NoHits";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw error(errc::invalid_argument, what);
}

/// Worker count: explicit value if positive, else ZETASCOPE_THREADS, else hardware.
inline unsigned resolve_threads(int requested = 0) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("ZETASCOPE_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) over contiguous chunks. Results must be written
/// to per-index slots so the outcome does not depend on the worker count.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Pairwise (tree) summation; order is fixed by the input order.
template <class T>
T pairwise_sum(const T* x, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T s = x[0];
    for (std::size_t i = 1; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

/// Reduces x into [0, 1).
inline double frac01(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

}  // namespace zetascope
