#include <doctest.h>

#include <cmath>
#include <limits>

#include "support/test_oracles.hpp"
#include "tnfin/cso.hpp"
#include "tnfin/errors.hpp"
#include "tnfin/train_cso.hpp"

using namespace tnfin;
using namespace tnfin::cso;

namespace {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v * v;
  return s;
}

std::vector<Interval> box(std::size_t dim, double lo, double hi) {
  return std::vector<Interval>(dim, Interval{lo, hi});
}

Cat make_cat(std::vector<double> position, Mode mode, double fitness) {
  Cat cat;
  cat.velocity.assign(position.size(), 0.0);
  cat.position = std::move(position);
  cat.mode = mode;
  cat.fitness = fitness;
  return cat;
}

}  // namespace

TEST_CASE("selection probabilities follow the minimization rule") {
  const auto p = selection_probabilities(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.5);
  CHECK(p[2] == 0.0);
}

TEST_CASE("equal candidate fitnesses all get probability 1") {
  const auto p = selection_probabilities(std::vector<double>{4.0, 4.0, 4.0});
  for (const double v : p) CHECK(v == 1.0);
}

TEST_CASE("probabilities stay within [0, 1] with extremes pinned") {
  Rng rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> fs(5);
    for (auto& f : fs) f = rng.uniform(-10.0, 10.0);
    const auto p = selection_probabilities(fs);
    double lo = fs[0], hi = fs[0];
    for (const double f : fs) {
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    for (std::size_t i = 0; i < fs.size(); ++i) {
      CHECK(p[i] >= 0.0);
      CHECK(p[i] <= 1.0);
      if (hi > lo) {
        if (fs[i] == lo) CHECK(p[i] == 1.0);
        if (fs[i] == hi) CHECK(p[i] == 0.0);
      }
    }
  }
}

TEST_CASE("zero seeking range leaves the position unchanged") {
  CsoConfig config;
  config.srd = 0.0;
  Rng rng(83);
  const Cat cat = make_cat({1.5, -2.0, 0.0}, Mode::kSeeking, sphere(std::vector<double>{1.5, -2.0, 0.0}));
  const Cat next = seeking_step(cat, sphere, config, box(3, -5.0, 5.0), rng);
  CHECK(next.position == cat.position);
}

TEST_CASE("seeking keeps velocity and refreshes fitness from the pick") {
  CsoConfig config;
  Rng rng(89);
  Cat cat = make_cat({1.0, 1.0}, Mode::kSeeking, 2.0);
  cat.velocity = {0.25, -0.5};
  const Cat next = seeking_step(cat, sphere, config, box(2, -5.0, 5.0), rng);
  CHECK(next.velocity == cat.velocity);
  CHECK(next.fitness == sphere(next.position));
}

TEST_CASE("non-finite candidates are discarded, all non-finite errors out") {
  CsoConfig config;
  Rng rng(97);
  const Cat cat = make_cat({1.0}, Mode::kSeeking, 1.0);
  const auto nan_fitness = [](std::span<const double>) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_AS(
      seeking_step(cat, nan_fitness, config, box(1, -5.0, 5.0), rng),
      NumericError);
}

TEST_CASE("seeking mutates zero coordinates on the bound scale") {
  CsoConfig config;
  config.smp = 1;
  Rng rng(101);
  const Cat cat = make_cat({0.0, 0.0}, Mode::kSeeking, 0.0);
  // With srd = 0.1 and bound width 10 the absolute nudge is at most 1e-3.
  const Cat next = seeking_step(cat, sphere, config, box(2, -5.0, 5.0), rng);
  for (const double v : next.position) {
    CHECK(std::fabs(v) <= 0.1 * 1e-3 * 10.0);
  }
}

TEST_CASE("tracing from the best position with zero velocity is a fixed point") {
  CsoConfig config;
  Rng rng(103);
  const std::vector<double> best{0.5, -1.0};
  Cat cat = make_cat(best, Mode::kTracing, sphere(best));
  const Cat next =
      tracing_step(cat, best, sphere, config, 0, box(2, -5.0, 5.0), rng);
  CHECK(next.position == best);
  CHECK(next.velocity == std::vector<double>{0.0, 0.0});
}

TEST_CASE("adaptive inertia weight follows the linear schedule") {
  CHECK(adaptive_inertia_weight(0, 200, 0.15) ==
        doctest::Approx(0.65).epsilon(1e-15));
  CHECK(adaptive_inertia_weight(200, 200, 0.15) == 0.15);
  double prev = adaptive_inertia_weight(0, 200, 0.15);
  for (std::size_t i = 1; i <= 200; ++i) {
    const double w = adaptive_inertia_weight(i, 200, 0.15);
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("velocity is clamped to 20% of the bound width") {
  CsoConfig config;
  config.inertia = Inertia::constant(1.0);
  Rng rng(107);
  const auto bounds = box(1, -5.0, 5.0);
  Cat cat = make_cat({-5.0}, Mode::kTracing, 25.0);
  const std::vector<double> best{5.0};
  for (int step = 0; step < 10; ++step) {
    cat = tracing_step(cat, best, sphere, config, 0, bounds, rng);
    CHECK(std::fabs(cat.velocity[0]) <= 0.2 * 10.0 + 1e-12);
    CHECK(cat.position[0] >= -5.0);
    CHECK(cat.position[0] <= 5.0);
  }
}

TEST_CASE("mode assignment flags exactly round(MR * population) tracers") {
  std::vector<Cat> cats(40);
  Rng rng(109);
  assign_modes(cats, 0.5, rng);
  std::size_t tracing = 0;
  for (const auto& cat : cats) {
    if (cat.mode == Mode::kTracing) ++tracing;
  }
  CHECK(tracing == 20);

  std::vector<Cat> three(3);
  Rng rng2(109);
  assign_modes(three, 0.4, rng2);  // round(1.2) = 1
  std::size_t tracing3 = 0;
  for (const auto& cat : three) {
    if (cat.mode == Mode::kTracing) ++tracing3;
  }
  CHECK(tracing3 == 1);
}

TEST_CASE("mode assignment is deterministic under the same seed") {
  std::vector<Cat> a(17), b(17);
  Rng rng_a(211), rng_b(211);
  assign_modes(a, 0.3, rng_a);
  assign_modes(b, 0.3, rng_b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mode == b[i].mode);
  }
}

TEST_CASE("sphere minimization reaches the regression bound") {
  CsoConfig config;  // Table-2 defaults
  config.seed = 2024;
  const auto report = minimize(sphere, 10, box(10, -5.0, 5.0), config);
  CHECK(report.best_fitness < 1e-3);
  CHECK(report.fitness_curve.size() == 200);
  CHECK(report.evaluations == config.expected_evaluations());
  for (std::size_t i = 1; i < report.fitness_curve.size(); ++i) {
    CHECK(report.fitness_curve[i] <= report.fitness_curve[i - 1]);
  }
}

TEST_CASE("constant fitness yields a flat curve at that constant") {
  CsoConfig config;
  config.iterations = 10;
  config.population = 6;
  config.seed = 5;
  const auto constant = [](std::span<const double>) { return 7.25; };
  const auto report = minimize(constant, 3, box(3, -1.0, 1.0), config);
  CHECK(report.best_fitness == 7.25);
  for (const double f : report.fitness_curve) CHECK(f == 7.25);
}

TEST_CASE("identical config and seed give bitwise-identical reports") {
  CsoConfig config;
  config.iterations = 20;
  config.population = 12;
  config.seed = 77;
  const auto a = minimize(sphere, 4, box(4, -3.0, 3.0), config);
  const auto b = minimize(sphere, 4, box(4, -3.0, 3.0), config);
  CHECK(a.best_fitness == b.best_fitness);
  CHECK(a.best_position == b.best_position);
  CHECK(a.fitness_curve == b.fitness_curve);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("config validation rejects out-of-range knobs") {
  CsoConfig config;
  config.smp = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = {};
  config.population = 1;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = {};
  config.mixture_ratio = 0.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = {};
  config.srd = 1.5;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = {};
  config.c1 = 0.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("non-finite fitness at initialization errors after 10 retries") {
  CsoConfig config;
  config.population = 2;
  config.iterations = 1;
  const auto nan_fitness = [](std::span<const double>) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_AS(minimize(nan_fitness, 2, box(2, -1.0, 1.0), config),
                  NumericError);
}

TEST_CASE("bounds widen initialization intervals by half their width") {
  const std::vector<Interval> init{{0.0, 1.0}, {2.0, 2.0}, {-4.0, 4.0}};
  const auto bounds = cso_parameter_bounds(init);
  CHECK(bounds[0].lo == doctest::Approx(-0.5));
  CHECK(bounds[0].hi == doctest::Approx(1.5));
  // Point values widen relative to the value itself.
  CHECK(bounds[1].lo == doctest::Approx(1.0));
  CHECK(bounds[1].hi == doctest::Approx(3.0));
  CHECK(bounds[2].lo == doctest::Approx(-8.0));
  CHECK(bounds[2].hi == doctest::Approx(8.0));
}

TEST_CASE("training a network that already fits keeps zero loss") {
  Rng rng(113);
  const std::vector<Interval> ranges{{0.0, 1.0}, {0.0, 1.0}};
  const auto net =
      TnfinNetwork::initialized(2, 2, ranges, Interval{0.0, 1.0}, rng);

  TrainingSet data;
  for (int i = 0; i < 12; ++i) {
    std::vector<double> x{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
    data.target.push_back(net.evaluate(x));
    data.x.push_back(std::move(x));
  }

  CsoConfig config;
  config.iterations = 5;
  config.population = 6;
  config.seed = 3;
  const auto result = train_tnfin_cso(net, data, config);
  CHECK(result.report.best_fitness == 0.0);
  CHECK(loss(result.network, data) == 0.0);
}

TEST_CASE("adaptive and constant inertia both keep the elitist curve") {
  Rng rng(127);
  const std::vector<Interval> ranges{{0.0, 1.0}};
  const auto net =
      TnfinNetwork::initialized(1, 2, ranges, Interval{0.0, 1.0}, rng);
  TrainingSet data;
  for (int i = 0; i < 16; ++i) {
    const double x = static_cast<double>(i) / 15.0;
    data.x.push_back({x});
    data.target.push_back(x * x);
  }

  for (const Inertia inertia :
       {Inertia::adaptive(0.15), Inertia::constant(0.9)}) {
    CsoConfig config;
    config.iterations = 12;
    config.population = 8;
    config.seed = 9;
    config.inertia = inertia;
    const auto result = train_tnfin_cso(net, data, config);
    for (std::size_t i = 1; i < result.report.fitness_curve.size(); ++i) {
      CHECK(result.report.fitness_curve[i] <=
            result.report.fitness_curve[i - 1]);
    }
  }
}

TEST_CASE("training improves a separable synthetic fit") {
  Rng rng(131);
  const std::vector<Interval> ranges{{0.0, 1.0}, {0.0, 1.0}};
  const auto net =
      TnfinNetwork::initialized(2, 2, ranges, Interval{-0.25, 1.25}, rng);
  TrainingSet data;
  for (int i = 0; i < 40; ++i) {
    const double a = rng.uniform(0.0, 1.0);
    const double b = rng.uniform(0.0, 1.0);
    data.x.push_back({a, b});
    data.target.push_back(a + b > 1.0 ? 1.0 : 0.0);
  }
  const double initial = loss(net, data);

  CsoConfig config;
  config.iterations = 25;
  config.population = 12;
  config.seed = 21;
  const auto result = train_tnfin_cso(net, data, config, Interval{-0.25, 1.25});
  CHECK(loss(result.network, data) < initial);
}
