#include <doctest.h>

#include <cmath>
#include <vector>

#include "tnfin/errors.hpp"
#include "tnfin/metrics.hpp"
#include "tnfin/rank_tests.hpp"
#include "tnfin/rng.hpp"

using namespace tnfin;
using namespace tnfin::eval;

TEST_CASE("all-correct positive predictions give tp = n") {
  const std::vector<int> labels(7, 1);
  const auto c = confusion(labels, labels, 1);
  CHECK(c.tp == 7);
  CHECK(c.fp == 0);
  CHECK(c.tn == 0);
  CHECK(c.fn == 0);
}

TEST_CASE("all-negative predictions against positives give fn = n") {
  const std::vector<int> predicted(5, 0);
  const std::vector<int> actual(5, 1);
  const auto c = confusion(predicted, actual, 1);
  CHECK(c.fn == 5);
  CHECK(c.total() == 5);
}

TEST_CASE("three-class hand tally") {
  const std::vector<int> actual{0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2};
  const std::vector<int> predicted{0, 0, 1, 2, 1, 1, 0, 2, 2, 2, 2, 0};
  const auto c = confusion(predicted, actual, 2);
  // Hand tally for class 2: actual positives at rows 8-11, predicted 2 at
  // rows 3, 7, 8, 9, 10.
  CHECK(c.tp == 3);
  CHECK(c.fn == 1);
  CHECK(c.fp == 2);
  CHECK(c.tn == 6);
}

TEST_CASE("confusion rejects mismatched or empty inputs") {
  const std::vector<int> a{1, 2};
  const std::vector<int> b{1};
  CHECK_THROWS_AS(confusion(a, b, 1), DataError);
  CHECK_THROWS_AS(confusion(std::vector<int>{}, std::vector<int>{}, 1),
                  DataError);
}

TEST_CASE("perfect classifier scores 1 on all four metrics") {
  const auto m = metrics({50, 0, 50, 0});
  CHECK(m.accuracy == 1.0);
  CHECK(m.sensitivity == 1.0);
  CHECK(m.specificity == 1.0);
  CHECK(m.f1 == 1.0);
  CHECK(m.warnings.empty());
}

TEST_CASE("metric formulas by direct substitution") {
  // tp=9, fp=2, tn=8, fn=1.
  const auto m = metrics({9, 2, 8, 1});
  CHECK(m.accuracy == doctest::Approx(0.85).epsilon(1e-15));
  CHECK(m.sensitivity == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(m.specificity == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(m.f1 == doctest::Approx(18.0 / 21.0).epsilon(1e-15));
}

TEST_CASE("0/0 denominators yield 0 with a warning") {
  const auto m = metrics({0, 3, 5, 0});  // no actual positives
  CHECK(m.sensitivity == 0.0);
  REQUIRE(m.warnings.size() == 1);
  CHECK(m.warnings[0].find("sensitivity") != std::string::npos);
}

TEST_CASE("accuracy identity holds in integer arithmetic") {
  Rng rng(173);
  for (int trial = 0; trial < 100; ++trial) {
    ConfusionCounts c{rng.uniform_index(20), rng.uniform_index(20),
                      rng.uniform_index(20), rng.uniform_index(20)};
    if (c.total() == 0) continue;
    const auto m = metrics(c);
    CHECK(m.accuracy * static_cast<double>(c.total()) ==
          doctest::Approx(static_cast<double>(c.tp + c.tn)).epsilon(1e-12));
  }
}

TEST_CASE("swapping the positive class swaps sensitivity and specificity") {
  Rng rng(179);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> actual(24), predicted(24);
    for (int i = 0; i < 24; ++i) {
      actual[i] = static_cast<int>(rng.uniform_index(2));
      predicted[i] = static_cast<int>(rng.uniform_index(2));
    }
    const auto pos = metrics(confusion(predicted, actual, 1));
    const auto neg = metrics(confusion(predicted, actual, 0));
    CHECK(pos.sensitivity == neg.specificity);
    CHECK(pos.specificity == neg.sensitivity);
    CHECK(pos.accuracy == neg.accuracy);
  }
}

TEST_CASE("Kruskal-Wallis on the canonical three groups gives H = 7.2") {
  const std::vector<std::vector<double>> groups{
      {1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  const auto result = kruskal_wallis(groups);
  CHECK(std::fabs(result.statistic - 7.2) <= 1e-9);
  // Two degrees of freedom: the survival function is exp(-H/2).
  CHECK(result.p_value == doctest::Approx(std::exp(-3.6)).epsilon(1e-9));
}

TEST_CASE("identical groups give H = 0, p = 1") {
  const std::vector<std::vector<double>> groups{
      {2, 2, 2}, {2, 2, 2}, {2, 2, 2}};
  const auto result = kruskal_wallis(groups);
  CHECK(result.statistic == 0.0);
  CHECK(result.p_value == 1.0);
}

TEST_CASE("H is nonnegative and invariant under monotone transforms") {
  Rng rng(181);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> groups(3);
    for (auto& g : groups) {
      const std::size_t n = 3 + rng.uniform_index(6);
      for (std::size_t i = 0; i < n; ++i) {
        g.push_back(rng.uniform(0.0, 1.0));
      }
    }
    const auto base = kruskal_wallis(groups);
    CHECK(base.statistic >= 0.0);

    auto transformed = groups;
    for (auto& g : transformed) {
      for (auto& v : g) v = std::exp(3.0 * v) + 1.0;  // strictly monotone
    }
    const auto after = kruskal_wallis(transformed);
    CHECK(after.statistic == doctest::Approx(base.statistic).epsilon(1e-12));
  }
}

TEST_CASE("two-group Kruskal-Wallis agrees with Mann-Whitney within 0.02") {
  Rng rng(191);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a, b;
    // Sizes large enough that the continuity correction (absent from the
    // chi-squared route) stays well under the agreement tolerance.
    const std::size_t na = 15 + rng.uniform_index(11);
    const std::size_t nb = 15 + rng.uniform_index(11);
    const double shift = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < na; ++i) a.push_back(rng.uniform(0.0, 2.0));
    for (std::size_t i = 0; i < nb; ++i) {
      b.push_back(shift + rng.uniform(0.0, 2.0));
    }
    const std::vector<std::vector<double>> groups{a, b};
    const auto kw = kruskal_wallis(groups);
    const auto mwu = mann_whitney_u(a, b);
    CHECK(std::fabs(kw.p_value - mwu.p_value) <= 0.02);
  }
}

TEST_CASE("complete separation gives U = 0") {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, 5, 6};
  CHECK(mann_whitney_u(a, b).statistic == 0.0);
}

TEST_CASE("identical samples give p close to 1") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  CHECK(mann_whitney_u(a, a).p_value >= 0.95);
}

TEST_CASE("interleaved samples match the exhaustive pair count") {
  const std::vector<double> a{1, 3, 5, 7};
  const std::vector<double> b{2, 4, 6, 8};
  // Pairs with a < b: 4 + 3 + 2 + 1 = 10; a > b: 6; U = min = 6.
  CHECK(mann_whitney_u(a, b).statistic == 6.0);
}

TEST_CASE("U complementarity and brute-force equality with ties") {
  Rng rng(193);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(3 + rng.uniform_index(8));
    std::vector<double> b(3 + rng.uniform_index(8));
    for (auto& v : a) v = static_cast<double>(rng.uniform_index(6));
    for (auto& v : b) v = static_cast<double>(rng.uniform_index(6));

    double below = 0.0, above = 0.0;
    for (const double x : a) {
      for (const double y : b) {
        if (x < y) below += 1.0;
        if (x > y) above += 1.0;
        if (x == y) {
          below += 0.5;
          above += 0.5;
        }
      }
    }
    const double expected_u = std::min(below, above);
    const auto result = mann_whitney_u(a, b);
    CHECK(result.statistic == expected_u);
    CHECK(below + above == static_cast<double>(a.size() * b.size()));
    CHECK(result.p_value >= 0.0);
    CHECK(result.p_value <= 1.0);
  }
}

TEST_CASE("chi-squared survival function matches closed forms") {
  // df = 2: sf(x) = exp(-x/2).
  for (const double x : {0.5, 1.0, 3.0, 7.2, 15.0}) {
    CHECK(chi_squared_sf(x, 2.0) ==
          doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-12));
  }
  // df = 1: sf(x) = 2 * normal_sf(sqrt(x)).
  for (const double x : {0.5, 2.0, 5.0}) {
    CHECK(chi_squared_sf(x, 1.0) ==
          doctest::Approx(2.0 * normal_sf(std::sqrt(x))).epsilon(1e-10));
  }
  CHECK(chi_squared_sf(0.0, 3.0) == 1.0);
}

TEST_CASE("argmax decoding with deterministic tie break") {
  CHECK(decide_class(std::vector<double>{0.9, 0.1, 0.2}) == 0);
  CHECK(decide_class(std::vector<double>{0.5, 0.5, 0.1}) == 0);
  CHECK(decide_class(std::vector<double>{0.1, 0.5, 0.5}) == 1);
}

TEST_CASE("permuting outputs permutes the decision") {
  const std::vector<double> outputs{0.2, 0.9, 0.4};
  CHECK(decide_class(outputs) == 1);
  CHECK(decide_class(std::vector<double>{0.9, 0.4, 0.2}) == 0);
  CHECK(decide_class(std::vector<double>{0.4, 0.2, 0.9}) == 2);
}

TEST_CASE("argmax is invariant under shared positive rescaling") {
  Rng rng(197);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> outputs(4);
    for (auto& v : outputs) v = rng.uniform(-1.0, 1.0);
    const double scale = rng.uniform(0.1, 10.0);
    std::vector<double> scaled = outputs;
    for (auto& v : scaled) v *= scale;
    CHECK(decide_class(outputs) == decide_class(scaled));
  }
}

TEST_CASE("non-finite outputs raise a numeric error") {
  CHECK_THROWS_AS(
      decide_class(std::vector<double>{0.1, std::nan(""), 0.3}),
      NumericError);
}
