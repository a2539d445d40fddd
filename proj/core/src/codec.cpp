#include "tnfin/codec.hpp"

#include <algorithm>
#include <string>

#include "tnfin/errors.hpp"

namespace tnfin {

CodecSpec CodecSpec::plain(std::size_t inputs, std::size_t mfs_per_input,
                           double floor) {
  CodecSpec spec;
  spec.inputs = inputs;
  spec.mfs_per_input = mfs_per_input;
  spec.width_floor.assign(inputs, floor);
  spec.spread_floor = floor;
  return spec;
}

CodecSpec CodecSpec::from_ranges(std::size_t inputs, std::size_t mfs_per_input,
                                 std::span<const Interval> feature_ranges,
                                 Interval target_range) {
  CodecSpec spec = plain(inputs, mfs_per_input);
  for (std::size_t i = 0; i < inputs && i < feature_ranges.size(); ++i) {
    const double span =
        feature_ranges[i].width() > 0.0 ? feature_ranges[i].width() : 1.0;
    spec.width_floor[i] = 1e-6 * span;
  }
  const double tspan = target_range.width() > 0.0 ? target_range.width() : 1.0;
  spec.spread_floor = 1e-6 * tspan;
  return spec;
}

std::size_t CodecSpec::rule_count() const noexcept {
  std::size_t count = 1;
  for (std::size_t i = 0; i < inputs; ++i) count *= mfs_per_input;
  return count;
}

std::size_t CodecSpec::parameter_count() const noexcept {
  return 2 * inputs * mfs_per_input + 2 * rule_count();
}

std::vector<double> encode_params(const TnfinNetwork& net) {
  std::vector<double> params;
  params.reserve(net.parameter_count());
  for (std::size_t i = 0; i < net.inputs(); ++i) {
    for (std::size_t j = 0; j < net.mfs_per_input(); ++j) {
      params.push_back(net.mf(i, j).center());
    }
  }
  for (std::size_t i = 0; i < net.inputs(); ++i) {
    for (std::size_t j = 0; j < net.mfs_per_input(); ++j) {
      params.push_back(net.mf(i, j).width());
    }
  }
  for (std::size_t k = 0; k < net.rule_count(); ++k) {
    params.push_back(net.consequent(k).center());
  }
  for (std::size_t k = 0; k < net.rule_count(); ++k) {
    params.push_back(net.consequent(k).spread());
  }
  return params;
}

TnfinNetwork decode_params(std::span<const double> params,
                           const CodecSpec& spec) {
  if (params.size() != spec.parameter_count()) {
    throw DataError("decode_params: expected " +
                    std::to_string(spec.parameter_count()) +
                    " parameters, got " + std::to_string(params.size()));
  }
  if (spec.width_floor.size() != spec.inputs) {
    throw ConfigError("decode_params: need one width floor per input");
  }
  const std::size_t nm = spec.inputs * spec.mfs_per_input;
  const std::size_t rules = spec.rule_count();
  const double* centers = params.data();
  const double* widths = centers + nm;
  const double* ccenters = widths + nm;
  const double* cspreads = ccenters + rules;

  std::vector<MembershipFunction> bank;
  bank.reserve(nm);
  for (std::size_t i = 0; i < spec.inputs; ++i) {
    for (std::size_t j = 0; j < spec.mfs_per_input; ++j) {
      const std::size_t idx = i * spec.mfs_per_input + j;
      bank.emplace_back(centers[idx],
                        std::max(widths[idx], spec.width_floor[i]));
    }
  }
  std::vector<TsukamotoConsequent> consequents;
  consequents.reserve(rules);
  for (std::size_t k = 0; k < rules; ++k) {
    consequents.emplace_back(ccenters[k],
                             std::max(cspreads[k], spec.spread_floor),
                             orientation_for_rule(k));
  }
  return TnfinNetwork(spec.inputs, spec.mfs_per_input, std::move(bank),
                      std::move(consequents));
}

}  // namespace tnfin
