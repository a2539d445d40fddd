#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tnfin/interval.hpp"
#include "tnfin/membership.hpp"
#include "tnfin/rng.hpp"

namespace tnfin {

/// All five layer values produced by one forward evaluation.
struct ForwardTrace {
  std::vector<std::vector<double>> memberships;  // [input][mf]
  std::vector<double> firing;                    // per rule, layer 2
  std::vector<double> normalized;                // per rule, layer 3
  std::vector<double> rule_outputs;              // per rule, layer 4
  double output = 0.0;                           // layer 5
};

/// (feature vector, target) pairs used by the trainers and the loss.
struct TrainingSet {
  std::vector<std::vector<double>> x;
  std::vector<double> target;

  std::size_t size() const noexcept { return x.size(); }
  bool empty() const noexcept { return x.empty(); }
};

/// Five-layer Tsukamoto neuro-fuzzy network over a full rule grid: every
/// combination of one membership function per input forms one rule, indexed
/// in mixed radix with input 0 as the most significant digit. Immutable
/// after construction; trainers return new networks.
class TnfinNetwork {
 public:
  TnfinNetwork(std::size_t inputs, std::size_t mfs_per_input,
               std::vector<MembershipFunction> mf_bank,
               std::vector<TsukamotoConsequent> consequents);

  /// Builds a network covering the given feature ranges: membership centers
  /// evenly spaced over each range, widths range/(2*(m-1)), consequent
  /// centers drawn uniformly over the target range, spreads target-range/4.
  static TnfinNetwork initialized(std::size_t inputs, std::size_t mfs_per_input,
                                  std::span<const Interval> feature_ranges,
                                  Interval target_range, Rng& rng);

  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t mfs_per_input() const noexcept { return mfs_per_input_; }
  std::size_t rule_count() const noexcept { return consequents_.size(); }
  std::size_t parameter_count() const noexcept {
    return 2 * inputs_ * mfs_per_input_ + 2 * rule_count();
  }

  /// Membership-function index selected by `rule` for `input`.
  std::size_t rule_digit(std::size_t rule, std::size_t input) const noexcept;

  const MembershipFunction& mf(std::size_t input, std::size_t j) const {
    return mf_bank_[input * mfs_per_input_ + j];
  }
  const TsukamotoConsequent& consequent(std::size_t rule) const {
    return consequents_[rule];
  }

  /// Layer-2 rule firing strengths (products of memberships).
  std::vector<double> firing_strengths(std::span<const double> x) const;

  /// Full five-layer evaluation. Throws NumericError when the total firing
  /// strength is below kFiringEpsilon.
  ForwardTrace forward(std::span<const double> x) const;

  /// Output only; same semantics as forward().
  double evaluate(std::span<const double> x) const;

 private:
  void check_input_dimension(std::size_t n) const;

  std::size_t inputs_;
  std::size_t mfs_per_input_;
  std::vector<MembershipFunction> mf_bank_;        // input-major
  std::vector<TsukamotoConsequent> consequents_;   // rule-indexed
};

/// Divides each entry by the total. Throws NumericError when the total is
/// below kFiringEpsilon (degenerate input: no rule fires).
std::vector<double> normalize_firing(std::span<const double> firing);

/// Half sum of squared residuals over the set. Throws DataError on empty
/// data.
double loss(const TnfinNetwork& net, const TrainingSet& data);

/// loss(net, data) / n: the dataset-size-invariant curve metric.
double per_sample_mse(const TnfinNetwork& net, const TrainingSet& data);

}  // namespace tnfin
