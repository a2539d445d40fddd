#pragma once

#include <functional>
#include <vector>

#include "tnfin/codec.hpp"
#include "tnfin/network.hpp"

namespace tnfin {

struct GdOptions {
  double learning_rate = 0.05;
  std::size_t epochs = 100;
};

struct GdResult {
  TnfinNetwork network;
  std::vector<double> curve;  // per-epoch per-sample MSE
};

/// Called after each epoch with the epoch index and the updated network.
using EpochObserver =
    std::function<void(std::size_t epoch, const TnfinNetwork& net)>;

/// Central-difference gradient of the half-SSE training loss with respect to
/// the flat parameter vector, using per-parameter steps
/// h_i = step_scale * 1e-6 * max(1, |p_i|).
std::vector<double> loss_gradient_fd(std::span<const double> params,
                                     const TrainingSet& data,
                                     const CodecSpec& spec,
                                     double step_scale = 1.0);

/// Full-batch gradient descent over every network parameter with
/// finite-difference gradients: p <- p - lr * dE/dp. Throws NumericError
/// naming the epoch if the loss turns non-finite.
GdResult train_gd(const TnfinNetwork& net, const TrainingSet& data,
                  const GdOptions& options,
                  const EpochObserver& observer = {});

}  // namespace tnfin
