#include "tnfin/network.hpp"

#include <cmath>
#include <string>

#include "tnfin/errors.hpp"

namespace tnfin {

namespace {

std::size_t checked_rule_count(std::size_t inputs, std::size_t mfs_per_input) {
  if (inputs == 0 || mfs_per_input == 0) {
    throw ConfigError("network needs at least one input and one MF per input");
  }
  std::size_t count = 1;
  for (std::size_t i = 0; i < inputs; ++i) {
    if (count > 100'000'000 / mfs_per_input) {
      throw ConfigError("rule grid too large: " + std::to_string(mfs_per_input) +
                        "^" + std::to_string(inputs));
    }
    count *= mfs_per_input;
  }
  return count;
}

}  // namespace

TnfinNetwork::TnfinNetwork(std::size_t inputs, std::size_t mfs_per_input,
                           std::vector<MembershipFunction> mf_bank,
                           std::vector<TsukamotoConsequent> consequents)
    : inputs_(inputs),
      mfs_per_input_(mfs_per_input),
      mf_bank_(std::move(mf_bank)),
      consequents_(std::move(consequents)) {
  const std::size_t rules = checked_rule_count(inputs, mfs_per_input);
  if (mf_bank_.size() != inputs * mfs_per_input) {
    throw ConfigError("MF bank size mismatch: expected " +
                      std::to_string(inputs * mfs_per_input) + ", got " +
                      std::to_string(mf_bank_.size()));
  }
  if (consequents_.size() != rules) {
    throw ConfigError("consequent count mismatch: expected " +
                      std::to_string(rules) + ", got " +
                      std::to_string(consequents_.size()));
  }
}

TnfinNetwork TnfinNetwork::initialized(std::size_t inputs,
                                       std::size_t mfs_per_input,
                                       std::span<const Interval> feature_ranges,
                                       Interval target_range, Rng& rng) {
  if (feature_ranges.size() != inputs) {
    throw ConfigError("initialized(): need one feature range per input");
  }
  const std::size_t rules = checked_rule_count(inputs, mfs_per_input);

  std::vector<MembershipFunction> bank;
  bank.reserve(inputs * mfs_per_input);
  for (std::size_t i = 0; i < inputs; ++i) {
    const Interval r = feature_ranges[i].effective();
    if (mfs_per_input == 1) {
      bank.emplace_back(r.mid(), r.width() / 2.0);
      continue;
    }
    const double width =
        r.width() / (2.0 * static_cast<double>(mfs_per_input - 1));
    for (std::size_t j = 0; j < mfs_per_input; ++j) {
      const double center =
          r.lo + r.width() * static_cast<double>(j) /
                     static_cast<double>(mfs_per_input - 1);
      bank.emplace_back(center, width);
    }
  }

  const Interval t = target_range.effective();
  std::vector<TsukamotoConsequent> consequents;
  consequents.reserve(rules);
  for (std::size_t k = 0; k < rules; ++k) {
    consequents.emplace_back(rng.uniform(t.lo, t.hi), t.width() / 4.0,
                             orientation_for_rule(k));
  }
  return TnfinNetwork(inputs, mfs_per_input, std::move(bank),
                      std::move(consequents));
}

std::size_t TnfinNetwork::rule_digit(std::size_t rule,
                                     std::size_t input) const noexcept {
  // Input 0 is the most significant digit.
  std::size_t place = 1;
  for (std::size_t i = input + 1; i < inputs_; ++i) place *= mfs_per_input_;
  return (rule / place) % mfs_per_input_;
}

void TnfinNetwork::check_input_dimension(std::size_t n) const {
  if (n != inputs_) {
    throw DataError("input dimension mismatch: network has " +
                    std::to_string(inputs_) + " inputs, got " +
                    std::to_string(n));
  }
}

std::vector<double> TnfinNetwork::firing_strengths(
    std::span<const double> x) const {
  check_input_dimension(x.size());

  // Memberships once per (input, mf).
  std::vector<double> mu(inputs_ * mfs_per_input_);
  for (std::size_t i = 0; i < inputs_; ++i) {
    for (std::size_t j = 0; j < mfs_per_input_; ++j) {
      mu[i * mfs_per_input_ + j] = mf(i, j).evaluate(x[i]);
    }
  }

  // Walk the rule grid with an odometer over the per-input digits.
  const std::size_t rules = rule_count();
  std::vector<double> firing(rules);
  std::vector<std::size_t> digit(inputs_, 0);
  for (std::size_t k = 0; k < rules; ++k) {
    double w = 1.0;
    for (std::size_t i = 0; i < inputs_; ++i) {
      w *= mu[i * mfs_per_input_ + digit[i]];
    }
    firing[k] = w;
    for (std::size_t i = inputs_; i-- > 0;) {
      if (++digit[i] < mfs_per_input_) break;
      digit[i] = 0;
    }
  }
  return firing;
}

std::vector<double> normalize_firing(std::span<const double> firing) {
  double total = 0.0;
  for (const double w : firing) total += w;
  if (!(total >= kFiringEpsilon)) {
    throw NumericError("degenerate input: total firing strength " +
                       std::to_string(total) + " below threshold");
  }
  std::vector<double> normalized(firing.size());
  for (std::size_t k = 0; k < firing.size(); ++k) {
    normalized[k] = firing[k] / total;
  }
  return normalized;
}

ForwardTrace TnfinNetwork::forward(std::span<const double> x) const {
  check_input_dimension(x.size());

  ForwardTrace trace;
  trace.memberships.resize(inputs_);
  for (std::size_t i = 0; i < inputs_; ++i) {
    trace.memberships[i].resize(mfs_per_input_);
    for (std::size_t j = 0; j < mfs_per_input_; ++j) {
      trace.memberships[i][j] = mf(i, j).evaluate(x[i]);
    }
  }

  trace.firing = firing_strengths(x);
  trace.normalized = normalize_firing(trace.firing);

  trace.rule_outputs.resize(rule_count());
  double output = 0.0;
  for (std::size_t k = 0; k < rule_count(); ++k) {
    const auto out = consequents_[k].defuzzify(trace.normalized[k]);
    trace.rule_outputs[k] = out.weighted;
    output += out.weighted;
  }
  trace.output = output;
  return trace;
}

double TnfinNetwork::evaluate(std::span<const double> x) const {
  const std::vector<double> firing = firing_strengths(x);
  double total = 0.0;
  for (const double w : firing) total += w;
  if (!(total >= kFiringEpsilon)) {
    throw NumericError("degenerate input: total firing strength " +
                       std::to_string(total) + " below threshold");
  }
  double output = 0.0;
  for (std::size_t k = 0; k < rule_count(); ++k) {
    output += consequents_[k].defuzzify(firing[k] / total).weighted;
  }
  return output;
}

double loss(const TnfinNetwork& net, const TrainingSet& data) {
  if (data.empty()) {
    throw DataError("loss: empty dataset");
  }
  double total = 0.0;
  for (std::size_t p = 0; p < data.size(); ++p) {
    const double r = data.target[p] - net.evaluate(data.x[p]);
    total += r * r;
  }
  return 0.5 * total;
}

double per_sample_mse(const TnfinNetwork& net, const TrainingSet& data) {
  return loss(net, data) / static_cast<double>(data.size());
}

}  // namespace tnfin
