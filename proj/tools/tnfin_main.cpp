// Command-line front end: feature extraction, experiment runs, re-evaluation
// of existing runs, and synthetic dataset generation.

#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "tnfin/dataset.hpp"
#include "tnfin/errors.hpp"
#include "tnfin/experiment.hpp"
#include "tnfin/glcm.hpp"

namespace {

namespace fs = std::filesystem;

// Every config-file key, mirrored one-to-one by a --flag (dots and
// underscores become dashes). Flags override file values.
constexpr const char* kConfigKeys[] = {
    "data",           "train_fraction",    "cycles",
    "sample_cap",     "variants",          "seed",
    "output_dir",     "scale_features",    "mfs_per_input",
    "image_side",     "quant_levels",      "offset_dy",
    "offset_dx",      "binary_positive",   "paper_protocol",
    "cso.smp",        "cso.srd",           "cso.cdc",
    "cso.spc",        "cso.mixture_ratio", "cso.c1",
    "cso.w_start",    "cso.constant_weight", "cso.iterations",
    "cso.population", "cso.epochs_per_iteration", "gd.learning_rate",
    "gd.epochs"};

std::string flag_for_key(const std::string& key) {
  std::string flag = "--";
  for (const char c : key) {
    flag += (c == '.' || c == '_') ? '-' : c;
  }
  return flag;
}

int run_featurize(const std::string& image_dir, const std::string& output,
                  std::size_t side, std::size_t levels, int dy, int dx) {
  const auto items = tnfin::glcm::scan_image_directory(image_dir);
  const auto features =
      tnfin::glcm::featurize_dataset(items, {side, levels}, {dy, dx});
  tnfin::glcm::write_feature_csv(output, features);
  std::printf("featurized %zu images -> %s\n", features.features.size(),
              output.c_str());
  return 0;
}

int run_train(const std::string& config_path,
              const std::vector<std::pair<std::string, std::string>>& overrides) {
  tnfin::pipeline::ExperimentConfig config;
  if (!config_path.empty()) {
    for (const auto& [key, value] :
         tnfin::pipeline::read_config_file(config_path)) {
      tnfin::pipeline::apply_config_entry(config, key, value);
    }
  }
  for (const auto& [key, value] : overrides) {
    tnfin::pipeline::apply_config_entry(config, key, value);
  }
  const auto report = tnfin::pipeline::run_experiment(config);
  std::printf("experiment complete: %zu variants x %zu cycles -> %s\n",
              report.variants.size(), report.cycles,
              config.output_dir.c_str());
  return 0;
}

int run_evaluate(const std::string& run_dir) {
  tnfin::pipeline::reaggregate_outputs(run_dir);
  std::printf("recomputed metrics.csv, stats_kw.csv, stats_mwu.csv in %s\n",
              run_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolving Tsukamoto neuro-fuzzy classifier"};
  app.require_subcommand(1);

  // featurize
  auto* featurize = app.add_subcommand(
      "featurize", "Extract GLCM texture features from an image directory");
  std::string image_dir;
  std::string features_out = "features.csv";
  std::size_t side = 224;
  std::size_t levels = 8;
  int offset_dy = 0;
  int offset_dx = 1;
  featurize->add_option("image-dir", image_dir, "Directory of class subfolders")
      ->required();
  featurize->add_option("-o,--output", features_out, "Output CSV path");
  featurize->add_option("--side", side, "Resize side length");
  featurize->add_option("--levels", levels, "Gray quantization levels");
  featurize->add_option("--offset-dy", offset_dy, "Co-occurrence row offset");
  featurize->add_option("--offset-dx", offset_dx, "Co-occurrence column offset");

  // train
  auto* train = app.add_subcommand(
      "train", "Run the multi-cycle training and evaluation experiment");
  std::string config_path;
  train->add_option("-c,--config", config_path, "key=value config file");
  std::vector<std::pair<std::string, std::string>> overrides;
  for (std::size_t i = 0; i < std::size(kConfigKeys); ++i) {
    const std::string key = kConfigKeys[i];
    train
        ->add_option_function<std::string>(
            flag_for_key(key),
            [&overrides, key](const std::string& value) {
              overrides.emplace_back(key, value);
            },
            "Override config key " + key)
        ->type_name("VALUE");
  }

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Recompute aggregate tables from a finished run directory");
  std::string run_dir;
  evaluate->add_option("-i,--input", run_dir, "Run output directory")->required();

  // synth-data
  auto* synth = app.add_subcommand("synth-data", "Generate synthetic datasets");
  synth->require_subcommand(1);
  auto* blobs = synth->add_subcommand("blobs", "3-class Gaussian blob features");
  std::string blob_out = "blobs.csv";
  std::size_t blob_samples = 600;
  double blob_separation = 2.5;
  std::uint64_t blob_seed = 1;
  blobs->add_option("-o,--output", blob_out, "Output feature CSV");
  blobs->add_option("-n,--samples", blob_samples, "Total samples");
  blobs->add_option("--separation", blob_separation, "Class mean separation");
  blobs->add_option("--seed", blob_seed, "RNG seed");

  auto* textures =
      synth->add_subcommand("textures", "3-family synthetic texture images");
  std::string texture_out = "textures";
  std::size_t per_class = 10;
  std::size_t texture_side = 64;
  std::uint64_t texture_seed = 1;
  textures->add_option("-o,--output", texture_out, "Output directory");
  textures->add_option("--per-class", per_class, "Images per family");
  textures->add_option("--side", texture_side, "Image side length");
  textures->add_option("--seed", texture_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*featurize) {
      return run_featurize(image_dir, features_out, side, levels, offset_dy,
                           offset_dx);
    }
    if (*train) {
      return run_train(config_path, overrides);
    }
    if (*evaluate) {
      return run_evaluate(run_dir);
    }
    if (*blobs) {
      const auto data =
          tnfin::pipeline::make_blobs(blob_samples, blob_separation, blob_seed);
      if (const auto parent = fs::path(blob_out).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
      }
      tnfin::pipeline::write_dataset_csv(blob_out, data);
      std::printf("wrote %zu blob samples -> %s\n", data.size(),
                  blob_out.c_str());
      return 0;
    }
    if (*textures) {
      tnfin::pipeline::write_texture_dataset(texture_out, per_class,
                                             texture_side, texture_seed);
      std::printf("wrote %zu images per family -> %s\n", per_class,
                  texture_out.c_str());
      return 0;
    }
  } catch (const tnfin::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const tnfin::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const tnfin::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
