#include "tnfin/train_cso.hpp"

#include <cmath>
#include <limits>

#include "tnfin/errors.hpp"

namespace tnfin {

TrainPlan make_train_plan(std::size_t inputs, std::size_t mfs_per_input,
                          std::span<const Interval> feature_ranges,
                          Interval target_range) {
  if (feature_ranges.size() != inputs) {
    throw ConfigError("make_train_plan: need one feature range per input");
  }
  TrainPlan plan;
  plan.codec = CodecSpec::from_ranges(inputs, mfs_per_input, feature_ranges,
                                      target_range);
  plan.init_intervals.reserve(plan.codec.parameter_count());

  for (std::size_t i = 0; i < inputs; ++i) {
    const Interval r = feature_ranges[i].effective();
    for (std::size_t j = 0; j < mfs_per_input; ++j) {
      plan.init_intervals.push_back(r);
    }
  }
  for (std::size_t i = 0; i < inputs; ++i) {
    const Interval r = feature_ranges[i].effective();
    const double width = mfs_per_input > 1
                             ? r.width() / (2.0 * static_cast<double>(
                                                      mfs_per_input - 1))
                             : r.width() / 2.0;
    for (std::size_t j = 0; j < mfs_per_input; ++j) {
      plan.init_intervals.push_back({width, width});
    }
  }
  const Interval t = target_range.effective();
  const std::size_t rules = plan.codec.rule_count();
  for (std::size_t k = 0; k < rules; ++k) plan.init_intervals.push_back(t);
  const double spread = t.width() / 4.0;
  for (std::size_t k = 0; k < rules; ++k) {
    plan.init_intervals.push_back({spread, spread});
  }
  return plan;
}

std::vector<Interval> cso_parameter_bounds(
    std::span<const Interval> init_intervals) {
  std::vector<Interval> bounds;
  bounds.reserve(init_intervals.size());
  for (const Interval& r : init_intervals) {
    if (r.width() > 0.0) {
      const double pad = 0.5 * r.width();
      bounds.push_back({r.lo - pad, r.hi + pad});
    } else {
      double pad = 0.5 * std::fabs(r.lo);
      if (pad == 0.0) pad = 0.5;
      bounds.push_back({r.lo - pad, r.lo + pad});
    }
  }
  return bounds;
}

std::vector<Interval> feature_ranges_of(const TrainingSet& data) {
  if (data.empty()) throw DataError("feature_ranges_of: empty dataset");
  const std::size_t dims = data.x.front().size();
  std::vector<Interval> ranges(dims);
  for (std::size_t i = 0; i < dims; ++i) {
    ranges[i] = {data.x[0][i], data.x[0][i]};
  }
  for (const auto& row : data.x) {
    if (row.size() != dims) {
      throw DataError("feature_ranges_of: ragged feature rows");
    }
    for (std::size_t i = 0; i < dims; ++i) ranges[i] = ranges[i].merged(row[i]);
  }
  return ranges;
}

TnfinCsoResult train_tnfin_cso(const TnfinNetwork& net, const TrainingSet& data,
                               const cso::CsoConfig& config,
                               std::optional<Interval> target_range,
                               const TrainObserver& observer) {
  if (data.empty()) throw DataError("train_tnfin_cso: empty dataset");
  const std::vector<Interval> feature_ranges = feature_ranges_of(data);
  if (feature_ranges.size() != net.inputs()) {
    throw DataError("train_tnfin_cso: data dimension does not match network");
  }

  Interval targets;
  if (target_range) {
    targets = *target_range;
  } else {
    targets = {data.target[0], data.target[0]};
    for (const double t : data.target) targets = targets.merged(t);
  }

  const TrainPlan plan =
      make_train_plan(net.inputs(), net.mfs_per_input(), feature_ranges, targets);
  std::vector<Interval> bounds = cso_parameter_bounds(plan.init_intervals);

  // The swarm is seeded with the starting network; the box must contain it
  // so the seed survives unclamped.
  const std::vector<double> guess = encode_params(net);
  for (std::size_t d = 0; d < bounds.size(); ++d) {
    bounds[d] = bounds[d].merged(guess[d]);
  }

  const cso::FitnessFn fitness = [&](std::span<const double> position) {
    try {
      return loss(decode_params(position, plan.codec), data);
    } catch (const NumericError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  cso::IterationObserver iteration_observer;
  if (observer) {
    iteration_observer = [&](std::size_t iteration,
                             std::span<const double> best, double best_fitness) {
      observer(iteration, decode_params(best, plan.codec), best_fitness);
    };
  }

  cso::CsoReport report =
      cso::minimize(fitness, plan.codec.parameter_count(), bounds, config,
                    guess, iteration_observer);
  TnfinNetwork trained = decode_params(report.best_position, plan.codec);
  return {std::move(trained), std::move(report)};
}

}  // namespace tnfin
