#include "tnfin/metrics.hpp"

#include <cmath>

#include "tnfin/errors.hpp"

namespace tnfin::eval {

ConfusionCounts confusion(std::span<const int> predicted,
                          std::span<const int> actual, int positive_class) {
  if (predicted.empty() || predicted.size() != actual.size()) {
    throw DataError("confusion: label lists must be nonempty and equal-length");
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool predicted_positive = predicted[i] == positive_class;
    const bool actually_positive = actual[i] == positive_class;
    if (actually_positive) {
      (predicted_positive ? counts.tp : counts.fn) += 1;
    } else {
      (predicted_positive ? counts.fp : counts.tn) += 1;
    }
  }
  return counts;
}

namespace {

// Integer-count ratio; 0/0 yields 0 and records the metric name.
double ratio(std::size_t numerator, std::size_t denominator, const char* name,
             std::vector<std::string>& warnings) {
  if (denominator == 0) {
    warnings.push_back(std::string(name) + ": 0/0 denominator, reported as 0");
    return 0.0;
  }
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace

MetricSet metrics(const ConfusionCounts& c) {
  if (c.total() == 0) {
    throw DataError("metrics: empty confusion counts");
  }
  MetricSet m;
  m.accuracy = ratio(c.tp + c.tn, c.total(), "accuracy", m.warnings);
  m.sensitivity = ratio(c.tp, c.tp + c.fn, "sensitivity", m.warnings);
  m.specificity = ratio(c.tn, c.tn + c.fp, "specificity", m.warnings);
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, "f1", m.warnings);
  return m;
}

std::size_t decide_class(std::span<const double> per_class_outputs) {
  if (per_class_outputs.empty()) {
    throw DataError("decide_class: no outputs");
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < per_class_outputs.size(); ++i) {
    if (!std::isfinite(per_class_outputs[i])) {
      throw NumericError("decide_class: non-finite network output");
    }
    if (per_class_outputs[i] > per_class_outputs[best]) best = i;
  }
  return best;
}

}  // namespace tnfin::eval
