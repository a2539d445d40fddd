#include "tnfin/cso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tnfin/errors.hpp"

namespace tnfin::cso {

namespace {

// Substream tags keep the init / mode-assignment / per-cat-step RNG streams
// disjoint, so results do not depend on evaluation order.
constexpr std::uint64_t kInitTag = 0xC0;
constexpr std::uint64_t kModesTag = 0xA5;
constexpr std::uint64_t kStepTag = 0x57;

double evaluate_candidate(const FitnessFn& fitness,
                          std::span<const double> position,
                          std::size_t* evaluations) {
  if (evaluations) ++*evaluations;
  return fitness(position);
}

void check_bounds(std::span<const Interval> bounds, std::size_t dimension) {
  if (bounds.size() != dimension) {
    throw ConfigError("cso: need one bound per dimension");
  }
  for (const auto& b : bounds) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) {
      throw ConfigError("cso: bounds must be finite ordered intervals");
    }
  }
}

}  // namespace

void CsoConfig::validate() const {
  if (smp < 1) throw ConfigError("cso: smp must be >= 1");
  if (!(srd >= 0.0 && srd <= 1.0)) throw ConfigError("cso: srd must be in [0, 1]");
  if (!(cdc > 0.0 && cdc <= 1.0)) throw ConfigError("cso: cdc must be in (0, 1]");
  if (!(mixture_ratio > 0.0 && mixture_ratio <= 1.0)) {
    throw ConfigError("cso: mixture ratio must be in (0, 1]");
  }
  if (population < 2) throw ConfigError("cso: population must be >= 2");
  if (!(c1 > 0.0)) throw ConfigError("cso: c1 must be positive");
  if (epochs_per_iteration < 1) {
    throw ConfigError("cso: epochs per iteration must be >= 1");
  }
}

std::size_t CsoConfig::expected_evaluations() const {
  const auto tracing = static_cast<std::size_t>(
      std::llround(mixture_ratio * static_cast<double>(population)));
  const std::size_t seeking = population - tracing;
  const std::size_t per_seek = spc ? smp - 1 : smp;
  return population +
         iterations * epochs_per_iteration * (tracing + seeking * per_seek);
}

double adaptive_inertia_weight(std::size_t iteration,
                               std::size_t max_iterations, double w_start) {
  if (max_iterations == 0) return w_start;
  return w_start + static_cast<double>(max_iterations - iteration) /
                       (2.0 * static_cast<double>(max_iterations));
}

std::vector<double> velocity_limits(std::span<const Interval> bounds) {
  std::vector<double> limits(bounds.size());
  for (std::size_t d = 0; d < bounds.size(); ++d) {
    limits[d] = 0.2 * bounds[d].width();
  }
  return limits;
}

std::vector<double> selection_probabilities(std::span<const double> fitness) {
  std::vector<double> probability(fitness.size(), 1.0);
  if (fitness.empty()) return probability;
  double fs_min = fitness[0];
  double fs_max = fitness[0];
  for (const double f : fitness) {
    fs_min = std::min(fs_min, f);
    fs_max = std::max(fs_max, f);
  }
  if (fs_max > fs_min) {
    // Minimization: the reference point is the worst candidate, so the best
    // one scores 1 and the worst 0.
    for (std::size_t i = 0; i < fitness.size(); ++i) {
      probability[i] = std::fabs(fitness[i] - fs_max) / (fs_max - fs_min);
    }
  }
  return probability;
}

Cat seeking_step(const Cat& cat, const FitnessFn& fitness,
                 const CsoConfig& config, std::span<const Interval> bounds,
                 Rng& rng, std::size_t* evaluations) {
  const std::size_t dim = cat.position.size();
  check_bounds(bounds, dim);

  struct Candidate {
    std::vector<double> position;
    double fitness;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(config.smp);
  if (config.spc) {
    candidates.push_back({cat.position, cat.fitness});
  }
  const std::size_t copies = config.spc ? config.smp - 1 : config.smp;

  const auto mutate_count = static_cast<std::size_t>(
      std::ceil(config.cdc * static_cast<double>(dim)));
  std::vector<std::size_t> dims(dim);
  std::iota(dims.begin(), dims.end(), std::size_t{0});

  for (std::size_t j = 0; j < copies; ++j) {
    Candidate c{cat.position, 0.0};
    if (mutate_count < dim) {
      // Partial Fisher-Yates: the first mutate_count entries are the chosen
      // dimensions.
      for (std::size_t i = 0; i < mutate_count; ++i) {
        std::swap(dims[i], dims[i + rng.uniform_index(dim - i)]);
      }
    }
    for (std::size_t i = 0; i < mutate_count; ++i) {
      const std::size_t d = dims[i];
      const double u = rng.uniform(-config.srd, config.srd);
      double delta = c.position[d] * u;
      if (c.position[d] == 0.0) {
        // Multiplicative mutation cannot leave zero; nudge on the bound scale.
        delta = u * 1e-3 * bounds[d].width();
      }
      c.position[d] = bounds[d].clamp(c.position[d] + delta);
    }
    c.fitness = evaluate_candidate(fitness, c.position, evaluations);
    if (std::isfinite(c.fitness)) {
      candidates.push_back(std::move(c));
    }
  }
  if (config.spc && !std::isfinite(cat.fitness)) {
    candidates.erase(candidates.begin());
  }
  if (candidates.empty()) {
    throw NumericError("cso seeking: every candidate fitness was non-finite");
  }

  std::vector<double> fitnesses(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    fitnesses[i] = candidates[i].fitness;
  }
  const std::vector<double> probability = selection_probabilities(fitnesses);

  double total = std::accumulate(probability.begin(), probability.end(), 0.0);
  std::size_t pick = 0;
  if (total > 0.0) {
    const double u = rng.uniform(0.0, total);
    double acc = 0.0;
    for (std::size_t i = 0; i < probability.size(); ++i) {
      acc += probability[i];
      if (u < acc) {
        pick = i;
        break;
      }
      pick = i;  // numeric tail: fall through to the last entry
    }
  } else {
    pick = rng.uniform_index(candidates.size());
  }

  Cat next = cat;
  next.position = std::move(candidates[pick].position);
  next.fitness = candidates[pick].fitness;
  return next;
}

Cat tracing_step(const Cat& cat, std::span<const double> best,
                 const FitnessFn& fitness, const CsoConfig& config,
                 std::size_t iteration, std::span<const Interval> bounds,
                 Rng& rng, std::size_t* evaluations) {
  const std::size_t dim = cat.position.size();
  check_bounds(bounds, dim);
  if (best.size() != dim) {
    throw ConfigError("cso tracing: best position dimension mismatch");
  }

  double weight = 1.0;
  switch (config.inertia.kind) {
    case Inertia::Kind::kConstant:
      weight = config.inertia.constant_weight;
      break;
    case Inertia::Kind::kAdaptive:
      weight = adaptive_inertia_weight(iteration, config.iterations,
                                       config.inertia.w_start);
      break;
  }

  const std::vector<double> vmax = velocity_limits(bounds);
  Cat next = cat;
  for (std::size_t d = 0; d < dim; ++d) {
    const double r1 = rng.uniform01();
    double v = weight * next.velocity[d] +
               r1 * config.c1 * (best[d] - next.position[d]);
    v = std::clamp(v, -vmax[d], vmax[d]);
    next.velocity[d] = v;
    next.position[d] = bounds[d].clamp(next.position[d] + v);
  }
  next.fitness = evaluate_candidate(fitness, next.position, evaluations);
  return next;
}

void assign_modes(std::vector<Cat>& cats, double mixture_ratio, Rng& rng) {
  const auto tracing = static_cast<std::size_t>(
      std::llround(mixture_ratio * static_cast<double>(cats.size())));
  std::vector<std::size_t> order(cats.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  for (std::size_t i = 0; i < cats.size(); ++i) {
    cats[order[i]].mode = i < tracing ? Mode::kTracing : Mode::kSeeking;
  }
}

CsoReport minimize(const FitnessFn& fitness, std::size_t dimension,
                   std::span<const Interval> bounds, const CsoConfig& config,
                   std::optional<std::vector<double>> initial_guess,
                   const IterationObserver& observer) {
  config.validate();
  if (dimension < 1) throw ConfigError("cso: dimension must be >= 1");
  check_bounds(bounds, dimension);
  if (initial_guess && initial_guess->size() != dimension) {
    throw ConfigError("cso: initial guess dimension mismatch");
  }

  CsoReport report;
  std::vector<Cat> cats(config.population);
  for (std::size_t c = 0; c < cats.size(); ++c) {
    Rng init_rng(Rng::derive(config.seed, {kInitTag, c}));
    Cat& cat = cats[c];
    cat.velocity.assign(dimension, 0.0);
    cat.position.resize(dimension);
    bool seeded = false;
    if (c == 0 && initial_guess) {
      for (std::size_t d = 0; d < dimension; ++d) {
        cat.position[d] = bounds[d].clamp((*initial_guess)[d]);
      }
      seeded = true;
    }
    for (std::size_t attempt = 0;; ++attempt) {
      if (!seeded) {
        for (std::size_t d = 0; d < dimension; ++d) {
          cat.position[d] = init_rng.uniform(bounds[d].lo, bounds[d].hi);
        }
      }
      seeded = false;
      cat.fitness =
          evaluate_candidate(fitness, cat.position, &report.evaluations);
      if (std::isfinite(cat.fitness)) break;
      if (attempt >= 10) {
        throw NumericError(
            "cso: fitness stayed non-finite after 10 reinitializations of cat " +
            std::to_string(c));
      }
    }
  }

  std::size_t best_index = 0;
  for (std::size_t c = 1; c < cats.size(); ++c) {
    if (cats[c].fitness < cats[best_index].fitness) best_index = c;
  }
  report.best_position = cats[best_index].position;
  report.best_fitness = cats[best_index].fitness;

  report.fitness_curve.reserve(config.iterations);
  for (std::size_t iter = 0; iter < config.iterations; ++iter) {
    for (std::size_t epoch = 0; epoch < config.epochs_per_iteration; ++epoch) {
      Rng modes_rng(Rng::derive(config.seed, {kModesTag, iter, epoch}));
      assign_modes(cats, config.mixture_ratio, modes_rng);

      // The tracing target stays frozen for the whole round; best-update is
      // a sequential reduction afterwards, so per-cat steps are independent.
      const std::vector<double> frozen_best = report.best_position;
      for (std::size_t c = 0; c < cats.size(); ++c) {
        Rng step_rng(Rng::derive(config.seed, {kStepTag, iter, epoch, c}));
        if (cats[c].mode == Mode::kSeeking) {
          cats[c] = seeking_step(cats[c], fitness, config, bounds, step_rng,
                                 &report.evaluations);
        } else {
          cats[c] = tracing_step(cats[c], frozen_best, fitness, config, iter,
                                 bounds, step_rng, &report.evaluations);
        }
      }
      for (const Cat& cat : cats) {
        if (std::isfinite(cat.fitness) && cat.fitness < report.best_fitness) {
          report.best_fitness = cat.fitness;
          report.best_position = cat.position;
        }
      }
    }
    report.fitness_curve.push_back(report.best_fitness);
    if (observer) observer(iter, report.best_position, report.best_fitness);
  }
  return report;
}

}  // namespace tnfin::cso
