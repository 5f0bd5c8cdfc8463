#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "core.hpp"

namespace zetascope {

inline constexpr double default_nu = 27.0 / 82.0;

/// Search window [T, T+H] with the short-interval constraint T^nu <= H <= T.
struct ScanWindow {
  double T = 0;
  double H = 0;
  double nu = default_nu;
  double step = 0;  // 0 selects 2 pi / (20 log T)
  double eps = 0.1;

  ScanWindow() = default;
  ScanWindow(double T_, double H_, double nu_ = default_nu, double step_ = 0, double eps_ = 0.1)
      : T(T_), H(H_), nu(nu_), step(step_), eps(eps_) {
    validate();
  }

  /// Smallest admissible H for this T and nu.
  double min_H() const { return std::pow(T, nu); }

  double grid_step() const { return step > 0 ? step : two_pi / (20.0 * std::log(T)); }

  void validate() const {
    require(T > 1 && std::isfinite(T), "T must exceed 1");
    require(H > 0 && std::isfinite(H), "H must be positive");
    require(nu > 0 && nu <= 1, "nu must lie in (0, 1]");
    require(step >= 0, "step must be positive (or 0 for the default)");
    require(eps > 0 && eps < 1, "eps must lie in (0, 1)");
    char buf[256];
    if (H < min_H()) {
      std::snprintf(buf, sizeof buf, "window rejected: H = %.6g is below T^nu = %.6g (T = %.6g, nu = %.6g); minimum H is %.1f",
                    H, min_H(), T, nu, min_H());
      throw error(errc::invalid_argument, buf);
    }
    if (H > T) {
      std::snprintf(buf, sizeof buf, "window rejected: H = %.6g exceeds T = %.6g", H, T);
      throw error(errc::invalid_argument, buf);
    }
  }
};

}  // namespace zetascope
