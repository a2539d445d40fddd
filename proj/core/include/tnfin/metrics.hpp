#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tnfin::eval {

/// One-vs-rest tallies for a single positive class.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

struct MetricSet {
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double f1 = 0.0;
  // Degenerate 0/0 denominators produce value 0 plus a note here rather than
  // aborting a multi-cycle experiment.
  std::vector<std::string> warnings;
};

/// Tallies predicted against actual labels treating `positive_class` as
/// positive and every other label as negative. Throws DataError on empty or
/// mismatched inputs.
ConfusionCounts confusion(std::span<const int> predicted,
                          std::span<const int> actual, int positive_class);

/// accuracy = (TP+TN)/total, sensitivity = TP/(TP+FN),
/// specificity = TN/(TN+FP), f1 = 2TP/(2TP+FP+FN).
MetricSet metrics(const ConfusionCounts& counts);

/// Argmax decoding over per-class network outputs; ties break to the lowest
/// index. Throws NumericError on non-finite outputs.
std::size_t decide_class(std::span<const double> per_class_outputs);

}  // namespace tnfin::eval
