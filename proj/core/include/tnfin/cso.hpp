#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tnfin/interval.hpp"
#include "tnfin/rng.hpp"

namespace tnfin::cso {

enum class Mode { kSeeking, kTracing };

/// One swarm individual.
struct Cat {
  std::vector<double> position;
  std::vector<double> velocity;
  double fitness = 0.0;
  Mode mode = Mode::kSeeking;
};

/// Tracing-mode inertia handling: a fixed multiplier on the previous
/// velocity, or a weight decaying linearly from w_start + 1/2 down to
/// w_start over the run.
struct Inertia {
  enum class Kind { kConstant, kAdaptive };
  Kind kind = Kind::kAdaptive;
  double constant_weight = 1.0;  // used when kind == kConstant
  double w_start = 0.15;         // used when kind == kAdaptive

  static Inertia constant(double w) {
    return {Kind::kConstant, w, 0.15};
  }
  static Inertia adaptive(double w_start = 0.15) {
    return {Kind::kAdaptive, 1.0, w_start};
  }
};

struct CsoConfig {
  std::size_t smp = 3;          // seeking memory pool (candidates per cat)
  double srd = 0.10;            // seeking range of selected dimension
  double cdc = 1.0;             // fraction of dimensions mutated
  bool spc = false;             // keep the current position as a candidate
  double mixture_ratio = 0.5;   // fraction of cats in tracing mode
  double c1 = 2.05;             // tracing acceleration coefficient
  Inertia inertia;
  std::size_t iterations = 200;
  std::size_t population = 40;
  std::size_t epochs_per_iteration = 5;
  std::uint64_t seed = 0;

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  /// Fitness evaluations one minimize() run will spend (excluding
  /// reinitialization retries).
  std::size_t expected_evaluations() const;
};

struct CsoReport {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  std::vector<double> fitness_curve;  // best-so-far after each iteration
  std::size_t evaluations = 0;
};

using FitnessFn = std::function<double(std::span<const double>)>;

/// Called after each outer iteration with the elitist best so far.
using IterationObserver = std::function<void(
    std::size_t iteration, std::span<const double> best_position,
    double best_fitness)>;

/// Linearly decaying inertia weight: w_start + (i_max - i) / (2 * i_max).
double adaptive_inertia_weight(std::size_t iteration,
                               std::size_t max_iterations, double w_start);

/// Tracing velocity clamp: 20% of each dimension's bound width.
std::vector<double> velocity_limits(std::span<const Interval> bounds);

/// Seeking-mode selection scores for minimization: all 1 when every fitness
/// is equal, otherwise |FS_i - FS_max| / (FS_max - FS_min), so the best
/// candidate scores 1 and the worst 0.
std::vector<double> selection_probabilities(std::span<const double> fitness);

/// Exploration move: mutates copies of the cat's position, evaluates them,
/// and roulette-selects the replacement with probabilities favoring low
/// fitness. Non-finite candidate fitnesses are discarded; throws
/// NumericError if every candidate is non-finite.
Cat seeking_step(const Cat& cat, const FitnessFn& fitness,
                 const CsoConfig& config, std::span<const Interval> bounds,
                 Rng& rng, std::size_t* evaluations = nullptr);

/// Exploitation move toward the swarm best: per-dimension velocity update
/// with inertia, clamped to velocity_limits, then a position step.
Cat tracing_step(const Cat& cat, std::span<const double> best,
                 const FitnessFn& fitness, const CsoConfig& config,
                 std::size_t iteration, std::span<const Interval> bounds,
                 Rng& rng, std::size_t* evaluations = nullptr);

/// Flags round(mixture_ratio * population) cats as tracing, chosen uniformly
/// at random; the rest seek.
void assign_modes(std::vector<Cat>& cats, double mixture_ratio, Rng& rng);

/// Minimizes fitness over the box. Positions initialize uniformly within
/// bounds (velocities zero); each iteration runs epochs_per_iteration rounds
/// of mode assignment plus per-cat steps; the elitist best never regresses.
/// An optional initial guess seeds cat 0.
CsoReport minimize(const FitnessFn& fitness, std::size_t dimension,
                   std::span<const Interval> bounds, const CsoConfig& config,
                   std::optional<std::vector<double>> initial_guess = {},
                   const IterationObserver& observer = {});

}  // namespace tnfin::cso
