#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tnfin/network.hpp"

namespace tnfin {

/// Fixed flat-vector layout for external optimizers:
///   [mf centers | mf widths | consequent centers | consequent spreads]
/// with membership functions in input-major order and consequents in rule
/// order. Decoding clamps widths and spreads up to per-network floors so
/// unconstrained optimizer proposals always produce a valid network.
struct CodecSpec {
  std::size_t inputs = 0;
  std::size_t mfs_per_input = 0;
  std::vector<double> width_floor;  // one per input
  double spread_floor = 1e-6;

  static CodecSpec plain(std::size_t inputs, std::size_t mfs_per_input,
                         double floor = 1e-6);

  /// Floors of 1e-6 times each feature range and the target range.
  static CodecSpec from_ranges(std::size_t inputs, std::size_t mfs_per_input,
                               std::span<const Interval> feature_ranges,
                               Interval target_range);

  std::size_t rule_count() const noexcept;
  std::size_t parameter_count() const noexcept;
};

std::vector<double> encode_params(const TnfinNetwork& net);

/// Throws DataError when the vector length does not match the spec.
TnfinNetwork decode_params(std::span<const double> params,
                           const CodecSpec& spec);

}  // namespace tnfin
