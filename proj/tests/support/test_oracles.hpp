#pragma once

// Independent reference implementations used to check the library. These
// deliberately share no code with core/: digit math is div/mod instead of
// the odometer, sums are literal loops.

#include <cmath>
#include <cstddef>
#include <vector>

#include "tnfin/membership.hpp"
#include "tnfin/network.hpp"
#include "tnfin/rng.hpp"

namespace oracle {

// Five-layer evaluation written straight from the layer definitions.
inline double naive_forward(const tnfin::TnfinNetwork& net,
                            const std::vector<double>& x) {
  const std::size_t n = net.inputs();
  const std::size_t m = net.mfs_per_input();
  std::size_t rules = 1;
  for (std::size_t i = 0; i < n; ++i) rules *= m;

  std::vector<double> firing(rules);
  for (std::size_t k = 0; k < rules; ++k) {
    double w = 1.0;
    std::size_t rest = k;
    // Least significant digit belongs to the last input.
    std::vector<std::size_t> digits(n);
    for (std::size_t i = n; i-- > 0;) {
      digits[i] = rest % m;
      rest /= m;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& mf = net.mf(i, digits[i]);
      const double t = (x[i] - mf.center()) / mf.width();
      w *= 1.0 / (1.0 + t * t);
    }
    firing[k] = w;
  }

  double total = 0.0;
  for (std::size_t k = 0; k < rules; ++k) total += firing[k];

  double output = 0.0;
  for (std::size_t k = 0; k < rules; ++k) {
    double wbar = firing[k] / total;
    if (wbar < tnfin::kFiringEpsilon) wbar = tnfin::kFiringEpsilon;
    if (wbar > 1.0) wbar = 1.0;
    const auto& cons = net.consequent(k);
    const double offset = cons.spread() * std::sqrt(1.0 / wbar - 1.0);
    const double y = (k + 1) % 2 == 1 ? cons.center() - offset   // 1-based odd
                                      : cons.center() + offset;  // 1-based even
    output += wbar * y;
  }
  return output;
}

// Random network with parameters in tame ranges.
inline tnfin::TnfinNetwork random_network(std::size_t inputs,
                                          std::size_t mfs_per_input,
                                          tnfin::Rng& rng) {
  std::vector<tnfin::MembershipFunction> bank;
  for (std::size_t i = 0; i < inputs * mfs_per_input; ++i) {
    bank.emplace_back(rng.uniform(-2.0, 2.0), rng.uniform(0.2, 2.0));
  }
  std::size_t rules = 1;
  for (std::size_t i = 0; i < inputs; ++i) rules *= mfs_per_input;
  std::vector<tnfin::TsukamotoConsequent> consequents;
  for (std::size_t k = 0; k < rules; ++k) {
    consequents.emplace_back(rng.uniform(-3.0, 3.0), rng.uniform(0.1, 1.5),
                             tnfin::orientation_for_rule(k));
  }
  return tnfin::TnfinNetwork(inputs, mfs_per_input, std::move(bank),
                             std::move(consequents));
}

inline std::vector<double> random_input(std::size_t inputs, tnfin::Rng& rng) {
  std::vector<double> x(inputs);
  for (auto& v : x) v = rng.uniform(-3.0, 3.0);
  return x;
}

}  // namespace oracle
