#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "tnfin/cso.hpp"
#include "tnfin/dataset.hpp"
#include "tnfin/metrics.hpp"

namespace tnfin::pipeline {

enum class VariantKind { kGd, kCsoConstant, kCsoAdaptive };

/// One trained model flavor: the gradient-descent baseline or CSO with
/// constant / adaptive inertia weight.
struct Variant {
  VariantKind kind = VariantKind::kCsoAdaptive;
  std::string name() const;
};

struct GdConfig {
  // Steps scale with the half-SSE total gradient, so the workable rate
  // shrinks with the training-set size; this default suits desk-scale sets.
  double learning_rate = 0.001;
  std::size_t epochs = 0;  // 0: match the CSO fitness-evaluation budget
};

struct ExperimentConfig {
  std::string data_path;          // feature csv or image directory
  double train_fraction = 0.8;
  std::size_t cycles = 10;
  std::size_t sample_cap = 1000;  // 0 disables the cap
  std::vector<Variant> variants = {{VariantKind::kGd},
                                   {VariantKind::kCsoConstant},
                                   {VariantKind::kCsoAdaptive}};
  cso::CsoConfig cso;             // shared knobs; inertia set per variant
  double cso_constant_weight = 0.9;
  GdConfig gd;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  bool scale_features = true;
  std::size_t mfs_per_input = 3;
  std::size_t image_side = 224;
  std::size_t quant_levels = 8;
  glcm::Offset offset;
  std::string binary_positive;    // nonempty: merge the rest into one class
  bool paper_protocol = false;    // 500 CSO iterations instead of 200

  void validate() const;
};

/// Everything one (variant, cycle) run produced.
struct CycleOutcome {
  std::vector<eval::MetricSet> per_class;
  std::vector<double> train_curve;  // per iteration/epoch, mean over class nets
  std::vector<double> test_curve;
  std::vector<double> residuals;    // target - output, per (class net, sample)
  double test_accuracy = 0.0;       // multiclass argmax accuracy
  double untrained_test_mse = 0.0;  // mean over class nets, initial networks
  double trained_test_mse = 0.0;
};

struct ExperimentReport {
  std::vector<std::string> class_names;
  std::vector<Variant> variants;
  std::size_t cycles = 0;
  std::vector<std::vector<CycleOutcome>> outcomes;  // [variant][cycle]
  std::vector<std::pair<std::string, std::string>> resolved_config;
};

/// Runs the full protocol: per cycle a stratified split, per variant three
/// one-vs-rest networks trained on (optionally scaled) features, evaluated
/// on the test split; metrics, curves and residuals recorded; aggregate
/// tables and statistical comparisons written to the output directory.
/// Output-directory writability is checked before any computation.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes metrics.csv, metrics_cycles.csv, stats_kw.csv, stats_mwu.csv,
/// mse_curves.csv, error_hist.csv and config_echo. On failure, files written
/// so far are removed.
void emit_outputs(const ExperimentReport& report,
                  const std::filesystem::path& output_dir);

/// Recomputes metrics.csv, stats_kw.csv and stats_mwu.csv from an existing
/// metrics_cycles.csv in the directory.
void reaggregate_outputs(const std::filesystem::path& output_dir);

/// Key=value config-file layer: every key is mirrored by a CLI flag and
/// echoed (resolved) into the config_echo artifact.
std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path);
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);
std::vector<std::pair<std::string, std::string>> resolved_entries(
    const ExperimentConfig& config);

}  // namespace tnfin::pipeline
