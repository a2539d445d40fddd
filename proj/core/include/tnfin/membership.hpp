#pragma once

#include <cmath>

#include "tnfin/errors.hpp"

namespace tnfin {

/// Normalized firing strengths below this are treated as degenerate; values
/// entering the Tsukamoto reciprocal are clamped to [kFiringEpsilon, 1].
inline constexpr double kFiringEpsilon = 1e-12;

/// Bell-shaped antecedent membership function
///   mu(x) = 1 / (1 + ((x - center) / width)^2)
/// Peaks at 1 on the center, symmetric, range (0, 1].
class MembershipFunction {
 public:
  MembershipFunction(double center, double width)
      : center_(center), width_(width) {
    if (!(width > 0.0)) {
      throw ConfigError("membership function width must be positive");
    }
  }

  double evaluate(double x) const noexcept {
    const double t = (x - center_) / width_;
    return 1.0 / (1.0 + t * t);
  }

  double center() const noexcept { return center_; }
  double width() const noexcept { return width_; }

 private:
  double center_;
  double width_;
};

/// Direction of a rule's monotone consequent membership function. Fixed at
/// construction from the rule index parity (1-based odd rules decrease).
enum class Orientation { kDecreasing, kIncreasing };

/// Monotone consequent inverted at the rule's normalized firing strength
/// (Tsukamoto reasoning):
///   y = center -/+ spread * sqrt(1/w - 1)
class TsukamotoConsequent {
 public:
  TsukamotoConsequent(double center, double spread, Orientation orientation)
      : center_(center), spread_(spread), orientation_(orientation) {
    if (!(spread > 0.0)) {
      throw ConfigError("consequent spread must be positive");
    }
  }

  struct RuleOutput {
    double crisp;     // y_k
    double weighted;  // w * y_k, the layer-4 value
  };

  /// Inverts the consequent at normalized firing strength w. Strengths
  /// below kFiringEpsilon are clamped before the reciprocal.
  RuleOutput defuzzify(double normalized_firing) const noexcept {
    double w = normalized_firing;
    if (w < kFiringEpsilon) w = kFiringEpsilon;
    if (w > 1.0) w = 1.0;
    const double offset = spread_ * std::sqrt(1.0 / w - 1.0);
    const double y =
        orientation_ == Orientation::kDecreasing ? center_ - offset
                                                 : center_ + offset;
    return {y, w * y};
  }

  double center() const noexcept { return center_; }
  double spread() const noexcept { return spread_; }
  Orientation orientation() const noexcept { return orientation_; }

 private:
  double center_;
  double spread_;
  Orientation orientation_;
};

/// Orientation assigned to a 0-based rule index. The convention counts
/// rules from 1 with odd rules decreasing, so 0-based even indices decrease.
inline Orientation orientation_for_rule(std::size_t rule_index) noexcept {
  return rule_index % 2 == 0 ? Orientation::kDecreasing
                             : Orientation::kIncreasing;
}

}  // namespace tnfin
