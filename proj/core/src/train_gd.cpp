#include "tnfin/train_gd.hpp"

#include <cmath>
#include <string>

#include "tnfin/errors.hpp"

namespace tnfin {

namespace {

CodecSpec spec_for_data(const TnfinNetwork& net, const TrainingSet& data) {
  std::vector<Interval> feature_ranges(net.inputs());
  for (std::size_t i = 0; i < net.inputs(); ++i) {
    Interval r{data.x[0][i], data.x[0][i]};
    for (const auto& row : data.x) r = r.merged(row[i]);
    feature_ranges[i] = r;
  }
  Interval target{data.target[0], data.target[0]};
  for (const double t : data.target) target = target.merged(t);
  return CodecSpec::from_ranges(net.inputs(), net.mfs_per_input(),
                                feature_ranges, target);
}

double loss_at(std::vector<double>& params, std::size_t index, double value,
               const TrainingSet& data, const CodecSpec& spec) {
  const double saved = params[index];
  params[index] = value;
  const double result = loss(decode_params(params, spec), data);
  params[index] = saved;
  return result;
}

}  // namespace

std::vector<double> loss_gradient_fd(std::span<const double> params,
                                     const TrainingSet& data,
                                     const CodecSpec& spec,
                                     double step_scale) {
  std::vector<double> point(params.begin(), params.end());
  std::vector<double> gradient(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double p = point[i];
    const double h = step_scale * 1e-6 * std::max(1.0, std::fabs(p));
    const double above = loss_at(point, i, p + h, data, spec);
    const double below = loss_at(point, i, p - h, data, spec);
    gradient[i] = (above - below) / (2.0 * h);
  }
  return gradient;
}

GdResult train_gd(const TnfinNetwork& net, const TrainingSet& data,
                  const GdOptions& options, const EpochObserver& observer) {
  if (data.empty()) {
    throw DataError("train_gd: empty dataset");
  }
  if (!(options.learning_rate >= 0.0)) {
    throw ConfigError("train_gd: learning rate must be nonnegative");
  }

  const CodecSpec spec = spec_for_data(net, data);
  std::vector<double> params = encode_params(net);
  const double n = static_cast<double>(data.size());

  GdResult result{net, {}};
  result.curve.reserve(options.epochs);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    double epoch_loss;
    try {
      const std::vector<double> gradient =
          loss_gradient_fd(params, data, spec);
      for (std::size_t i = 0; i < params.size(); ++i) {
        params[i] -= options.learning_rate * gradient[i];
      }
      result.network = decode_params(params, spec);
      epoch_loss = loss(result.network, data);
    } catch (const NumericError& e) {
      throw NumericError("train_gd diverged at epoch " + std::to_string(epoch) +
                         ": " + e.what());
    }
    if (!std::isfinite(epoch_loss)) {
      throw NumericError("train_gd diverged at epoch " +
                         std::to_string(epoch) + ": loss is not finite");
    }
    result.curve.push_back(epoch_loss / n);
    if (observer) observer(epoch, result.network);
  }
  return result;
}

}  // namespace tnfin
