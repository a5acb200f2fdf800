#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "portmanteau/error.hpp"
#include "portmanteau/scalar.hpp"

namespace portmanteau {

enum class Status { Holds, Fails, Indeterminate };

constexpr const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::Holds: return "HOLDS";
    case Status::Fails: return "FAILS";
    case Status::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

enum class Trend { Constant, Decreasing, Increasing, Oscillating };

constexpr const char* to_string(Trend t) noexcept {
  switch (t) {
    case Trend::Constant: return "constant";
    case Trend::Decreasing: return "decreasing";
    case Trend::Increasing: return "increasing";
    case Trend::Oscillating: return "oscillating";
  }
  return "?";
}

/// {1, 2, 4, ..., 2^k <= n_max}, with n_max appended when it is not a power of two.
inline std::vector<std::size_t> geometric_grid(std::size_t n_max) {
  if (n_max == 0) throw Error(ErrorCode::InvalidArgument, "n_max must be positive");
  std::vector<std::size_t> grid;
  for (std::size_t n = 1; n <= n_max; n *= 2) {
    grid.push_back(n);
    if (n > n_max / 2) break;
  }
  if (grid.back() != n_max) grid.push_back(n_max);
  return grid;
}

template <class Real>
struct LimitEstimate {
  Real last;
  Real limsup_estimate;  // max over the trailing window
  Real liminf_estimate;  // min over the trailing window
  Trend trend;
};

template <class Real>
Trend classify_trend(const std::vector<Real>& window) {
  bool up = false, down = false;
  for (std::size_t i = 1; i < window.size(); ++i) {
    if (window[i] < window[i - 1]) down = true;
    if (window[i - 1] < window[i]) up = true;
  }
  if (up && down) return Trend::Oscillating;
  if (down) return Trend::Decreasing;
  if (up) return Trend::Increasing;
  return Trend::Constant;
}

template <class Real>
LimitEstimate<Real> limit_estimators(const std::vector<Real>& series, std::size_t window) {
  if (window == 0 || window > series.size())
    throw Error(ErrorCode::WindowTooLarge, "window " + std::to_string(window) + " exceeds grid of " +
                                               std::to_string(series.size()) + " points");
  std::vector<Real> tail(series.end() - static_cast<std::ptrdiff_t>(window), series.end());
  return {series.back(), *std::max_element(tail.begin(), tail.end()), *std::min_element(tail.begin(), tail.end()),
          classify_trend(tail)};
}

/// Thresholds that turn a residual series on the n-grid into a status.
template <class Real>
struct VerdictRules {
  Real tol = from_double<Real>(1e-9);             // converged residual
  Real fail_threshold = from_double<Real>(1e-3);  // clearly nonzero residual
  std::size_t window = 5;                         // trailing grid points examined
  Real decay_ratio = from_double<Real>(0.75);     // per-doubling contraction that counts as convergent
  Real stall_ratio = from_double<Real>(0.5);      // last/max above this counts as non-shrinking
};

/// HOLDS: the residual at n_max is within tol and the window is
/// non-increasing, or the residual is below fail_threshold and contracts by
/// at least decay_ratio at every step of the window.
/// FAILS: the residual at n_max exceeds fail_threshold and is not shrinking
/// (last >= stall_ratio * window max).
/// Anything else is INDETERMINATE.
template <class Real>
Status classify_residuals(const std::vector<Real>& residuals, const VerdictRules<Real>& rules) {
  auto est = limit_estimators(residuals, rules.window);
  std::vector<Real> tail(residuals.end() - static_cast<std::ptrdiff_t>(rules.window), residuals.end());
  const Real& last = est.last;
  bool non_increasing = true, contracting = true;
  for (std::size_t i = 1; i < tail.size(); ++i) {
    if (tail[i - 1] + rules.tol < tail[i]) non_increasing = false;
    if (rules.decay_ratio * tail[i - 1] + rules.tol < tail[i]) contracting = false;
  }
  if (!(rules.tol < last) && non_increasing) return Status::Holds;
  if (!(rules.fail_threshold < last) && contracting) return Status::Holds;
  if (rules.fail_threshold < last && !(last < rules.stall_ratio * est.limsup_estimate)) return Status::Fails;
  return Status::Indeterminate;
}

}  // namespace portmanteau
