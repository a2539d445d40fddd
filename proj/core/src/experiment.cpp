#include "tnfin/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tnfin/codec.hpp"
#include "tnfin/errors.hpp"
#include "tnfin/network.hpp"
#include "tnfin/rank_tests.hpp"
#include "tnfin/train_cso.hpp"
#include "tnfin/train_gd.hpp"

namespace tnfin::pipeline {

namespace {

constexpr std::uint64_t kNetInitTag = 0x60;
constexpr std::uint64_t kTrainTag = 0x61;

constexpr std::array<const char*, 4> kMetricNames = {
    "accuracy", "sensitivity", "specificity", "f1"};

/// Shortest round-trip decimal representation.
std::string format_double(double v) {
  char buffer[40];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, result.ptr);
}

template <typename Fn>
auto with_context(const std::string& tag, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(tag + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(tag + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(tag + ": " + e.what());
  }
}

double parse_double_value(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ConfigError("config key '" + key + "': invalid number '" + value + "'");
  }
  return v;
}

std::uint64_t parse_unsigned_value(const std::string& key,
                                   const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': invalid count '" + value + "'");
  }
  return v;
}

bool parse_bool_value(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': invalid boolean '" + value + "'");
}

int parse_int_value(const std::string& key, const std::string& value) {
  int v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': invalid integer '" + value + "'");
  }
  return v;
}

std::vector<Variant> parse_variants(const std::string& value) {
  std::vector<Variant> variants;
  std::stringstream stream(value);
  std::string name;
  while (std::getline(stream, name, ',')) {
    if (name == "gd") {
      variants.push_back({VariantKind::kGd});
    } else if (name == "cso_constant") {
      variants.push_back({VariantKind::kCsoConstant});
    } else if (name == "cso_adaptive") {
      variants.push_back({VariantKind::kCsoAdaptive});
    } else {
      throw ConfigError("unknown variant '" + name +
                        "' (expected gd, cso_constant, cso_adaptive)");
    }
  }
  return variants;
}

std::string variants_to_string(const std::vector<Variant>& variants) {
  std::string out;
  for (const auto& v : variants) {
    if (!out.empty()) out += ',';
    out += v.name();
  }
  return out;
}

}  // namespace

std::string Variant::name() const {
  switch (kind) {
    case VariantKind::kGd:
      return "gd";
    case VariantKind::kCsoConstant:
      return "cso_constant";
    case VariantKind::kCsoAdaptive:
      return "cso_adaptive";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must be in (0, 1)");
  }
  if (cycles < 1) throw ConfigError("cycles must be >= 1");
  if (variants.empty()) throw ConfigError("at least one model variant required");
  for (std::size_t i = 0; i < variants.size(); ++i) {
    for (std::size_t j = i + 1; j < variants.size(); ++j) {
      if (variants[i].kind == variants[j].kind) {
        throw ConfigError("duplicate variant '" + variants[i].name() + "'");
      }
    }
  }
  if (mfs_per_input < 1) throw ConfigError("mfs_per_input must be >= 1");
  if (image_side == 0) throw ConfigError("image_side must be > 0");
  if (quant_levels < 2 || quant_levels > 256) {
    throw ConfigError("quant_levels must be in [2, 256]");
  }
  if (!(gd.learning_rate >= 0.0)) {
    throw ConfigError("gd.learning_rate must be nonnegative");
  }
  if (!(cso_constant_weight > 0.0)) {
    throw ConfigError("cso.constant_weight must be positive");
  }
  cso.validate();
}

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path.string());
  }
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "data") {
    config.data_path = value;
  } else if (key == "train_fraction") {
    config.train_fraction = parse_double_value(key, value);
  } else if (key == "cycles") {
    config.cycles = parse_unsigned_value(key, value);
  } else if (key == "sample_cap") {
    config.sample_cap = parse_unsigned_value(key, value);
  } else if (key == "variants") {
    config.variants = parse_variants(value);
  } else if (key == "seed") {
    config.seed = parse_unsigned_value(key, value);
  } else if (key == "output_dir") {
    config.output_dir = value;
  } else if (key == "scale_features") {
    config.scale_features = parse_bool_value(key, value);
  } else if (key == "mfs_per_input") {
    config.mfs_per_input = parse_unsigned_value(key, value);
  } else if (key == "image_side") {
    config.image_side = parse_unsigned_value(key, value);
  } else if (key == "quant_levels") {
    config.quant_levels = parse_unsigned_value(key, value);
  } else if (key == "offset_dy") {
    config.offset.dy = parse_int_value(key, value);
  } else if (key == "offset_dx") {
    config.offset.dx = parse_int_value(key, value);
  } else if (key == "binary_positive") {
    config.binary_positive = value;
  } else if (key == "paper_protocol") {
    config.paper_protocol = parse_bool_value(key, value);
  } else if (key == "cso.smp") {
    config.cso.smp = parse_unsigned_value(key, value);
  } else if (key == "cso.srd") {
    config.cso.srd = parse_double_value(key, value);
  } else if (key == "cso.cdc") {
    config.cso.cdc = parse_double_value(key, value);
  } else if (key == "cso.spc") {
    config.cso.spc = parse_bool_value(key, value);
  } else if (key == "cso.mixture_ratio") {
    config.cso.mixture_ratio = parse_double_value(key, value);
  } else if (key == "cso.c1") {
    config.cso.c1 = parse_double_value(key, value);
  } else if (key == "cso.w_start") {
    config.cso.inertia.w_start = parse_double_value(key, value);
  } else if (key == "cso.constant_weight") {
    config.cso_constant_weight = parse_double_value(key, value);
  } else if (key == "cso.iterations") {
    config.cso.iterations = parse_unsigned_value(key, value);
  } else if (key == "cso.population") {
    config.cso.population = parse_unsigned_value(key, value);
  } else if (key == "cso.epochs_per_iteration") {
    config.cso.epochs_per_iteration = parse_unsigned_value(key, value);
  } else if (key == "gd.learning_rate") {
    config.gd.learning_rate = parse_double_value(key, value);
  } else if (key == "gd.epochs") {
    config.gd.epochs = parse_unsigned_value(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> resolved_entries(
    const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::string>> entries;
  const auto add = [&](const char* key, std::string value) {
    entries.emplace_back(key, std::move(value));
  };
  add("data", config.data_path);
  add("train_fraction", format_double(config.train_fraction));
  add("cycles", std::to_string(config.cycles));
  add("sample_cap", std::to_string(config.sample_cap));
  add("variants", variants_to_string(config.variants));
  add("seed", std::to_string(config.seed));
  add("output_dir", config.output_dir);
  add("scale_features", config.scale_features ? "true" : "false");
  add("mfs_per_input", std::to_string(config.mfs_per_input));
  add("image_side", std::to_string(config.image_side));
  add("quant_levels", std::to_string(config.quant_levels));
  add("offset_dy", std::to_string(config.offset.dy));
  add("offset_dx", std::to_string(config.offset.dx));
  add("binary_positive", config.binary_positive);
  add("paper_protocol", config.paper_protocol ? "true" : "false");
  add("cso.smp", std::to_string(config.cso.smp));
  add("cso.srd", format_double(config.cso.srd));
  add("cso.cdc", format_double(config.cso.cdc));
  add("cso.spc", config.cso.spc ? "true" : "false");
  add("cso.mixture_ratio", format_double(config.cso.mixture_ratio));
  add("cso.c1", format_double(config.cso.c1));
  add("cso.w_start", format_double(config.cso.inertia.w_start));
  add("cso.constant_weight", format_double(config.cso_constant_weight));
  add("cso.iterations", std::to_string(config.cso.iterations));
  add("cso.population", std::to_string(config.cso.population));
  add("cso.epochs_per_iteration",
      std::to_string(config.cso.epochs_per_iteration));
  add("gd.learning_rate", format_double(config.gd.learning_rate));
  add("gd.epochs", std::to_string(config.gd.epochs));
  return entries;
}

namespace {

Dataset load_configured_dataset(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  if (config.data_path.empty()) {
    throw ConfigError("no data source configured (key 'data')");
  }
  const fs::path path(config.data_path);
  Dataset data;
  if (fs::is_directory(path)) {
    data = dataset_from_images(
        path, {config.image_side, config.quant_levels}, config.offset);
  } else if (fs::is_regular_file(path)) {
    data = load_feature_csv(path);
  } else {
    throw DataError("data source does not exist: " + config.data_path);
  }
  if (!config.binary_positive.empty()) {
    data = merge_binary(data, config.binary_positive);
  }
  if (config.sample_cap > 0) {
    data = stratified_cap(data, config.sample_cap, config.seed);
  }
  return data;
}

CycleOutcome run_variant_cycle(const ExperimentConfig& config,
                               const Variant& variant, std::size_t cycle,
                               const Dataset& train, const Dataset& test,
                               std::size_t gd_epochs) {
  const std::size_t classes = train.class_names.size();
  const std::size_t dims = train.dims();
  const Interval target_range{-0.25, 1.25};

  const std::vector<Interval> feature_ranges = [&] {
    TrainingSet probe;
    probe.x = train.x;
    probe.target.assign(train.size(), 0.0);
    return feature_ranges_of(probe);
  }();

  CycleOutcome outcome;
  std::vector<std::vector<double>> per_class_train_curve(classes);
  std::vector<std::vector<double>> per_class_test_curve(classes);
  std::vector<std::vector<double>> outputs(classes);

  const auto n_train = static_cast<double>(train.size());

  for (std::size_t c = 0; c < classes; ++c) {
    TrainingSet train_c{train.x, {}};
    train_c.target.reserve(train.size());
    for (const int y : train.y) {
      train_c.target.push_back(y == static_cast<int>(c) ? 1.0 : 0.0);
    }
    TrainingSet test_c{test.x, {}};
    test_c.target.reserve(test.size());
    for (const int y : test.y) {
      test_c.target.push_back(y == static_cast<int>(c) ? 1.0 : 0.0);
    }

    // Same initial network for every variant of a (cycle, class) pair, so
    // the ablation compares trainers, not starting points.
    Rng init_rng(Rng::derive(config.seed, {kNetInitTag, cycle, c}));
    const TnfinNetwork initial = TnfinNetwork::initialized(
        dims, config.mfs_per_input, feature_ranges, target_range, init_rng);
    outcome.untrained_test_mse +=
        per_sample_mse(initial, test_c) / static_cast<double>(classes);

    TnfinNetwork trained = initial;
    if (variant.kind == VariantKind::kGd) {
      GdOptions options{config.gd.learning_rate, gd_epochs};
      const GdResult result = train_gd(
          initial, train_c, options,
          [&](std::size_t, const TnfinNetwork& net) {
            per_class_test_curve[c].push_back(per_sample_mse(net, test_c));
          });
      per_class_train_curve[c] = result.curve;
      trained = result.network;
    } else {
      cso::CsoConfig cso_config = config.cso;
      cso_config.inertia =
          variant.kind == VariantKind::kCsoConstant
              ? cso::Inertia::constant(config.cso_constant_weight)
              : cso::Inertia::adaptive(config.cso.inertia.w_start);
      cso_config.seed = Rng::derive(
          config.seed, {kTrainTag, cycle, static_cast<std::uint64_t>(variant.kind), c});
      const TnfinCsoResult result = train_tnfin_cso(
          initial, train_c, cso_config, target_range,
          [&](std::size_t, const TnfinNetwork& best, double fitness) {
            per_class_train_curve[c].push_back(fitness / n_train);
            per_class_test_curve[c].push_back(per_sample_mse(best, test_c));
          });
      trained = result.network;
    }

    outcome.trained_test_mse +=
        per_sample_mse(trained, test_c) / static_cast<double>(classes);

    outputs[c].reserve(test.size());
    for (std::size_t s = 0; s < test.size(); ++s) {
      outputs[c].push_back(trained.evaluate(test.x[s]));
    }
    for (std::size_t s = 0; s < test.size(); ++s) {
      outcome.residuals.push_back(test_c.target[s] - outputs[c][s]);
    }
  }

  // Mean curves over the one-vs-rest networks.
  const std::size_t curve_length = per_class_train_curve[0].size();
  outcome.train_curve.assign(curve_length, 0.0);
  outcome.test_curve.assign(per_class_test_curve[0].size(), 0.0);
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < outcome.train_curve.size(); ++i) {
      outcome.train_curve[i] +=
          per_class_train_curve[c][i] / static_cast<double>(classes);
    }
    for (std::size_t i = 0; i < outcome.test_curve.size(); ++i) {
      outcome.test_curve[i] +=
          per_class_test_curve[c][i] / static_cast<double>(classes);
    }
  }

  // Argmax decision per test sample, then one-vs-rest metrics.
  std::vector<int> predicted(test.size());
  std::vector<double> sample_outputs(classes);
  std::size_t correct = 0;
  for (std::size_t s = 0; s < test.size(); ++s) {
    for (std::size_t c = 0; c < classes; ++c) sample_outputs[c] = outputs[c][s];
    predicted[s] = static_cast<int>(eval::decide_class(sample_outputs));
    if (predicted[s] == test.y[s]) ++correct;
  }
  outcome.test_accuracy =
      test.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test.size());
  for (std::size_t c = 0; c < classes; ++c) {
    outcome.per_class.push_back(
        eval::metrics(eval::confusion(predicted, test.y, static_cast<int>(c))));
  }
  return outcome;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& base_config) {
  namespace fs = std::filesystem;
  ExperimentConfig config = base_config;
  if (config.paper_protocol) config.cso.iterations = 500;
  config.validate();

  // Fail on an unwritable output directory before any computation.
  const fs::path out_dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  {
    const fs::path probe = out_dir / ".write_probe";
    std::ofstream test_stream(probe, std::ios::binary);
    test_stream << "probe";
    const bool ok = test_stream.good();
    test_stream.close();
    fs::remove(probe, ec);
    if (!ok) {
      throw DataError("output directory is not writable: " +
                      out_dir.string());
    }
  }

  const Dataset data = load_configured_dataset(config);
  if (data.class_names.size() < 2) {
    throw DataError("need at least two classes, got " +
                    std::to_string(data.class_names.size()));
  }

  // Match the GD budget to CSO by total loss evaluations.
  if (config.gd.epochs == 0) {
    CodecSpec spec =
        CodecSpec::plain(data.dims(), config.mfs_per_input);
    const auto per_epoch = 2 * spec.parameter_count() + 1;
    config.gd.epochs = std::max<std::size_t>(
        1, (config.cso.expected_evaluations() + per_epoch / 2) / per_epoch);
  }

  ExperimentReport report;
  report.class_names = data.class_names;
  report.variants = config.variants;
  report.cycles = config.cycles;
  report.resolved_config = resolved_entries(config);
  report.outcomes.resize(config.variants.size());

  for (std::size_t cycle = 0; cycle < config.cycles; ++cycle) {
    const auto [train_raw, test_raw] =
        split_dataset(data, config.train_fraction, config.seed, cycle);

    Dataset train = train_raw;
    Dataset test = test_raw;
    if (config.scale_features) {
      const MinMaxScaler scaler = MinMaxScaler::fit(train_raw);
      train = scaler.transform(train_raw);
      test = scaler.transform(test_raw);
    }

    for (std::size_t v = 0; v < config.variants.size(); ++v) {
      const std::string tag = "cycle " + std::to_string(cycle) + " variant " +
                              config.variants[v].name();
      report.outcomes[v].push_back(with_context(tag, [&] {
        return run_variant_cycle(config, config.variants[v], cycle, train,
                                 test, config.gd.epochs);
      }));
    }
  }

  emit_outputs(report, out_dir);
  return report;
}

// ---------------------------------------------------------------------------
// Aggregation and artifact rendering.

namespace {

/// Per-cycle metric values in a fixed [variant][cycle][class][metric] shape;
/// the common ground between a fresh report and a re-parsed
/// metrics_cycles.csv.
struct MetricTable {
  std::vector<std::string> variant_names;
  std::vector<std::string> class_names;
  std::size_t cycles = 0;
  std::vector<std::vector<std::vector<std::array<double, 4>>>> values;
};

MetricTable table_from_report(const ExperimentReport& report) {
  MetricTable table;
  for (const auto& v : report.variants) table.variant_names.push_back(v.name());
  table.class_names = report.class_names;
  table.cycles = report.cycles;
  table.values.resize(report.variants.size());
  for (std::size_t v = 0; v < report.variants.size(); ++v) {
    table.values[v].resize(report.cycles);
    for (std::size_t cy = 0; cy < report.cycles; ++cy) {
      const auto& per_class = report.outcomes[v][cy].per_class;
      table.values[v][cy].resize(per_class.size());
      for (std::size_t c = 0; c < per_class.size(); ++c) {
        table.values[v][cy][c] = {per_class[c].accuracy,
                                  per_class[c].sensitivity,
                                  per_class[c].specificity, per_class[c].f1};
      }
    }
  }
  return table;
}

struct MeanStd {
  double mean = 0.0;
  double std_dev = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  const auto n = static_cast<double>(values.size());
  for (const double v : values) out.mean += v;
  out.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) {
      const double d = v - out.mean;
      ss += d * d;
    }
    out.std_dev = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

std::vector<double> cycle_values(const MetricTable& table, std::size_t variant,
                                 std::size_t cls, std::size_t metric) {
  std::vector<double> values;
  values.reserve(table.cycles);
  for (std::size_t cy = 0; cy < table.cycles; ++cy) {
    values.push_back(table.values[variant][cy][cls][metric]);
  }
  return values;
}

/// Per-cycle macro-average of one metric over classes: the samples compared
/// across variants by the Mann-Whitney table.
std::vector<double> cycle_macro_values(const MetricTable& table,
                                       std::size_t variant,
                                       std::size_t metric) {
  std::vector<double> values;
  values.reserve(table.cycles);
  const auto classes = static_cast<double>(table.class_names.size());
  for (std::size_t cy = 0; cy < table.cycles; ++cy) {
    double sum = 0.0;
    for (std::size_t c = 0; c < table.class_names.size(); ++c) {
      sum += table.values[variant][cy][c][metric];
    }
    values.push_back(sum / classes);
  }
  return values;
}

std::string render_metrics_csv(const MetricTable& table) {
  std::string out = "class,metric";
  for (const auto& name : table.variant_names) out += "," + name;
  out += '\n';
  for (std::size_t c = 0; c < table.class_names.size(); ++c) {
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      out += table.class_names[c];
      out += ',';
      out += kMetricNames[m];
      for (std::size_t v = 0; v < table.variant_names.size(); ++v) {
        const MeanStd agg = mean_std(cycle_values(table, v, c, m));
        out += ',' + format_double(agg.mean) + " ± " + format_double(agg.std_dev);
      }
      out += '\n';
    }
  }
  return out;
}

std::string render_metrics_cycles_csv(const MetricTable& table) {
  std::string out = "variant,cycle,class,metric,value\n";
  for (std::size_t v = 0; v < table.variant_names.size(); ++v) {
    for (std::size_t cy = 0; cy < table.cycles; ++cy) {
      for (std::size_t c = 0; c < table.class_names.size(); ++c) {
        for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
          out += table.variant_names[v] + ',' + std::to_string(cy) + ',' +
                 table.class_names[c] + ',' + kMetricNames[m] + ',' +
                 format_double(table.values[v][cy][c][m]) + '\n';
        }
      }
    }
  }
  return out;
}

std::string render_stats_kw_csv(const MetricTable& table) {
  std::string out = "class";
  for (const auto* name : kMetricNames) out += std::string(",") + name;
  out += '\n';
  for (std::size_t c = 0; c < table.class_names.size(); ++c) {
    out += table.class_names[c];
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      if (table.variant_names.size() < 2 ||
          table.variant_names.size() * table.cycles < 3) {
        out += ",n/a";
        continue;
      }
      std::vector<std::vector<double>> groups;
      for (std::size_t v = 0; v < table.variant_names.size(); ++v) {
        groups.push_back(cycle_values(table, v, c, m));
      }
      const auto result = eval::kruskal_wallis(groups);
      out += ',' + format_double(result.p_value);
    }
    out += '\n';
  }
  return out;
}

std::string render_stats_mwu_csv(const MetricTable& table) {
  std::string out = "metric,model";
  for (const auto& name : table.variant_names) out += "," + name;
  out += '\n';
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    for (std::size_t row = 0; row < table.variant_names.size(); ++row) {
      out += std::string(kMetricNames[m]) + ',' + table.variant_names[row];
      const std::vector<double> row_values = cycle_macro_values(table, row, m);
      for (std::size_t col = 0; col < table.variant_names.size(); ++col) {
        if (col == row) {
          out += ",n/a";
        } else if (col > row) {
          out += ",";
        } else {
          const std::vector<double> col_values =
              cycle_macro_values(table, col, m);
          const auto result = eval::mann_whitney_u(row_values, col_values);
          out += ',' + format_double(result.p_value);
        }
      }
      out += '\n';
    }
  }
  return out;
}

std::string render_mse_curves_csv(const ExperimentReport& report) {
  std::string out = "variant,cycle,iteration,train_mse,test_mse\n";
  for (std::size_t v = 0; v < report.variants.size(); ++v) {
    const std::string name = report.variants[v].name();
    for (std::size_t cy = 0; cy < report.cycles; ++cy) {
      const auto& outcome = report.outcomes[v][cy];
      for (std::size_t i = 0; i < outcome.train_curve.size(); ++i) {
        out += name + ',' + std::to_string(cy) + ',' + std::to_string(i) + ',' +
               format_double(outcome.train_curve[i]) + ',' +
               format_double(i < outcome.test_curve.size()
                                 ? outcome.test_curve[i]
                                 : outcome.test_curve.back()) +
               '\n';
      }
    }
  }
  return out;
}

std::string render_error_hist_csv(const ExperimentReport& report) {
  constexpr std::size_t kBins = 20;
  std::vector<double> residuals;
  for (const auto& variant : report.outcomes) {
    for (const auto& outcome : variant) {
      residuals.insert(residuals.end(), outcome.residuals.begin(),
                       outcome.residuals.end());
    }
  }

  std::string out = "bin_center,count\n";
  if (residuals.empty()) return out;

  double lo = residuals.front();
  double hi = lo;
  for (const double r : residuals) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(kBins);
  std::array<std::size_t, kBins> counts{};
  for (const double r : residuals) {
    auto bin = static_cast<std::size_t>((r - lo) / width);
    if (bin >= kBins) bin = kBins - 1;
    ++counts[bin];
  }
  for (std::size_t b = 0; b < kBins; ++b) {
    const double center = lo + (static_cast<double>(b) + 0.5) * width;
    out += format_double(center) + ',' + std::to_string(counts[b]) + '\n';
  }
  return out;
}

std::string render_config_echo(const ExperimentReport& report) {
  std::string out;
  for (const auto& [key, value] : report.resolved_config) {
    out += key + '=' + value + '\n';
  }
  return out;
}

void write_artifacts(
    const std::filesystem::path& dir,
    const std::vector<std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> written;
  try {
    for (const auto& [name, content] : files) {
      const fs::path path = dir / name;
      std::ofstream out(path, std::ios::binary);
      if (!out) throw DataError("cannot write artifact: " + path.string());
      out << content;
      if (!out.good()) throw DataError("write failed: " + path.string());
      written.push_back(path);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& path : written) fs::remove(path, ec);
    throw;
  }
}

MetricTable parse_metrics_cycles_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty metrics_cycles.csv: " + path.string());
  }

  MetricTable table;
  struct Row {
    std::string variant, cls;
    std::size_t cycle, metric;
    double value;
  };
  std::vector<Row> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::stringstream stream(line);
    std::string variant, cycle, cls, metric, value;
    if (!std::getline(stream, variant, ',') ||
        !std::getline(stream, cycle, ',') || !std::getline(stream, cls, ',') ||
        !std::getline(stream, metric, ',') || !std::getline(stream, value)) {
      throw DataError("metrics_cycles.csv line " + std::to_string(line_number) +
                      ": malformed row");
    }
    const auto metric_it =
        std::find(kMetricNames.begin(), kMetricNames.end(), metric);
    if (metric_it == kMetricNames.end()) {
      throw DataError("metrics_cycles.csv line " + std::to_string(line_number) +
                      ": unknown metric '" + metric + "'");
    }
    Row row;
    row.variant = variant;
    row.cls = cls;
    row.cycle = parse_unsigned_value("cycle", cycle);
    row.metric = static_cast<std::size_t>(metric_it - kMetricNames.begin());
    row.value = parse_double_value("value", value);
    rows.push_back(std::move(row));

    if (std::find(table.variant_names.begin(), table.variant_names.end(),
                  variant) == table.variant_names.end()) {
      table.variant_names.push_back(variant);
    }
    if (std::find(table.class_names.begin(), table.class_names.end(), cls) ==
        table.class_names.end()) {
      table.class_names.push_back(cls);
    }
    table.cycles = std::max(table.cycles, rows.back().cycle + 1);
  }
  if (rows.empty()) {
    throw DataError("metrics_cycles.csv has no data rows: " + path.string());
  }

  table.values.assign(
      table.variant_names.size(),
      std::vector<std::vector<std::array<double, 4>>>(
          table.cycles, std::vector<std::array<double, 4>>(
                            table.class_names.size(), {0.0, 0.0, 0.0, 0.0})));
  for (const auto& row : rows) {
    const auto v = static_cast<std::size_t>(
        std::find(table.variant_names.begin(), table.variant_names.end(),
                  row.variant) -
        table.variant_names.begin());
    const auto c = static_cast<std::size_t>(
        std::find(table.class_names.begin(), table.class_names.end(), row.cls) -
        table.class_names.begin());
    table.values[v][row.cycle][c][row.metric] = row.value;
  }
  return table;
}

}  // namespace

void emit_outputs(const ExperimentReport& report,
                  const std::filesystem::path& output_dir) {
  std::filesystem::create_directories(output_dir);
  const MetricTable table = table_from_report(report);
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("metrics.csv", render_metrics_csv(table));
  files.emplace_back("metrics_cycles.csv", render_metrics_cycles_csv(table));
  files.emplace_back("stats_kw.csv", render_stats_kw_csv(table));
  files.emplace_back("stats_mwu.csv", render_stats_mwu_csv(table));
  files.emplace_back("mse_curves.csv", render_mse_curves_csv(report));
  files.emplace_back("error_hist.csv", render_error_hist_csv(report));
  files.emplace_back("config_echo", render_config_echo(report));
  write_artifacts(output_dir, files);
}

void reaggregate_outputs(const std::filesystem::path& output_dir) {
  const MetricTable table =
      parse_metrics_cycles_csv(output_dir / "metrics_cycles.csv");
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("metrics.csv", render_metrics_csv(table));
  files.emplace_back("stats_kw.csv", render_stats_kw_csv(table));
  files.emplace_back("stats_mwu.csv", render_stats_mwu_csv(table));
  write_artifacts(output_dir, files);
}

}  // namespace tnfin::pipeline
