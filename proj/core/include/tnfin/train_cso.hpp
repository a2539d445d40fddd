#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tnfin/codec.hpp"
#include "tnfin/cso.hpp"
#include "tnfin/network.hpp"

namespace tnfin {

/// Per-parameter initialization intervals (in codec layout order) plus the
/// matching codec. Point intervals mark parameters the initializer sets to a
/// single value (MF widths, consequent spreads).
struct TrainPlan {
  std::vector<Interval> init_intervals;
  CodecSpec codec;
};

TrainPlan make_train_plan(std::size_t inputs, std::size_t mfs_per_input,
                          std::span<const Interval> feature_ranges,
                          Interval target_range);

/// Search box: each initialization interval widened by 50% of its width on
/// each side; point values v widen to [v - |v|/2, v + |v|/2].
std::vector<Interval> cso_parameter_bounds(
    std::span<const Interval> init_intervals);

/// Per-feature min/max columns of a training set.
std::vector<Interval> feature_ranges_of(const TrainingSet& data);

struct TnfinCsoResult {
  TnfinNetwork network;
  cso::CsoReport report;
};

/// Called once per CSO iteration with the decoded best network so far and
/// its training fitness (half-SSE).
using TrainObserver = std::function<void(
    std::size_t iteration, const TnfinNetwork& best, double fitness)>;

/// Trains all network parameters with cat swarm optimization. Fitness of a
/// position is the half-SSE loss of the decoded network on `data`
/// (non-finite/degenerate evaluations count as +inf); the swarm starts
/// uniformly within cso_parameter_bounds with one cat seeded at the given
/// network. The target range defaults to the span of the data targets.
TnfinCsoResult train_tnfin_cso(const TnfinNetwork& net, const TrainingSet& data,
                               const cso::CsoConfig& config,
                               std::optional<Interval> target_range = {},
                               const TrainObserver& observer = {});

}  // namespace tnfin
