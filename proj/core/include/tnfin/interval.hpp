#pragma once

#include <algorithm>

namespace tnfin {

/// Closed real interval [lo, hi]. Degenerate (lo == hi) intervals are legal.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  double mid() const noexcept { return 0.5 * (lo + hi); }
  double clamp(double x) const noexcept { return std::min(std::max(x, lo), hi); }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }

  /// Smallest interval covering both.
  Interval merged(double x) const noexcept {
    return {std::min(lo, x), std::max(hi, x)};
  }

  /// This interval, or a fallback-width window about its midpoint when
  /// degenerate.
  Interval effective(double fallback_width = 1.0) const noexcept {
    if (width() > 0.0) return *this;
    return {mid() - 0.5 * fallback_width, mid() + 0.5 * fallback_width};
  }
};

}  // namespace tnfin
