#include "tnfin/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "tnfin/errors.hpp"
#include "tnfin/rng.hpp"

namespace tnfin::pipeline {

namespace {

constexpr std::uint64_t kCapTag = 0x11;
constexpr std::uint64_t kSplitTag = 0x22;
constexpr std::uint64_t kBlobTag = 0x33;
constexpr std::uint64_t kTextureTag = 0x44;

constexpr const char* kHeader =
    "contrast,correlation,energy,homogeneity,mean,std,label";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, std::size_t line_number) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw DataError("feature csv line " + std::to_string(line_number) +
                    ": non-numeric value '" + field + "'");
  }
  return value;
}

Dataset index_labels(std::vector<std::vector<double>> x,
                     std::vector<std::string> labels) {
  std::map<std::string, int> name_to_index;
  for (const auto& label : labels) name_to_index.emplace(label, 0);
  Dataset data;
  data.class_names.reserve(name_to_index.size());
  for (auto& [name, index] : name_to_index) {
    index = static_cast<int>(data.class_names.size());
    data.class_names.push_back(name);
  }
  data.x = std::move(x);
  data.y.reserve(labels.size());
  for (const auto& label : labels) data.y.push_back(name_to_index[label]);
  return data;
}

std::vector<std::vector<std::size_t>> indices_by_class(const Dataset& data) {
  std::vector<std::vector<std::size_t>> by_class(data.class_names.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    by_class[static_cast<std::size_t>(data.y[i])].push_back(i);
  }
  return by_class;
}

Dataset take_rows(const Dataset& data, std::vector<std::size_t> rows) {
  std::sort(rows.begin(), rows.end());
  Dataset out;
  out.class_names = data.class_names;
  out.x.reserve(rows.size());
  out.y.reserve(rows.size());
  for (const std::size_t i : rows) {
    out.x.push_back(data.x[i]);
    out.y.push_back(data.y[i]);
  }
  return out;
}

}  // namespace

Dataset load_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open feature csv: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("feature csv is empty: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw DataError("feature csv header mismatch in " + path.string() +
                    ": expected '" + kHeader + "'");
  }

  std::vector<std::vector<double>> x;
  std::vector<std::string> labels;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 7) {
      throw DataError("feature csv line " + std::to_string(line_number) +
                      ": expected 7 fields, got " +
                      std::to_string(fields.size()));
    }
    std::vector<double> row(6);
    for (std::size_t k = 0; k < 6; ++k) {
      row[k] = parse_number(fields[k], line_number);
    }
    if (fields[6].empty()) {
      throw DataError("feature csv line " + std::to_string(line_number) +
                      ": empty label");
    }
    x.push_back(std::move(row));
    labels.push_back(fields[6]);
  }
  return index_labels(std::move(x), std::move(labels));
}

Dataset from_labeled_features(const glcm::LabeledFeatures& features) {
  std::vector<std::vector<double>> x;
  x.reserve(features.features.size());
  for (const auto& f : features.features) {
    const auto values = f.as_array();
    x.emplace_back(values.begin(), values.end());
  }
  return index_labels(std::move(x), features.labels);
}

Dataset dataset_from_images(const std::filesystem::path& root,
                            const glcm::PreprocessOptions& options,
                            glcm::Offset offset) {
  const auto items = glcm::scan_image_directory(root);
  return from_labeled_features(glcm::featurize_dataset(items, options, offset));
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write csv: " + path.string());
  }
  out << kHeader << '\n';
  char buffer[64];
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.x[i].size() != 6) {
      throw DataError("write_dataset_csv: rows must have 6 features");
    }
    for (const double v : data.x[i]) {
      std::snprintf(buffer, sizeof buffer, "%.10g", v);
      out << buffer << ',';
    }
    out << data.class_names[static_cast<std::size_t>(data.y[i])] << '\n';
  }
  if (!out.good()) {
    throw DataError("write failed: " + path.string());
  }
}

Dataset stratified_cap(const Dataset& data, std::size_t cap,
                       std::uint64_t seed) {
  if (cap == 0 || cap >= data.size()) return data;

  auto by_class = indices_by_class(data);
  const auto total = static_cast<double>(data.size());

  // Largest-remainder quotas proportional to class sizes.
  std::vector<std::size_t> quota(by_class.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    const double exact =
        static_cast<double>(cap) * static_cast<double>(by_class[c].size()) / total;
    quota[c] = static_cast<std::size_t>(exact);
    assigned += quota[c];
    remainders.emplace_back(exact - static_cast<double>(quota[c]), c);
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (std::size_t i = 0; assigned < cap && i < remainders.size(); ++i) {
    ++quota[remainders[i].second];
    ++assigned;
  }

  Rng rng(Rng::derive(seed, {kCapTag}));
  std::vector<std::size_t> chosen;
  chosen.reserve(cap);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& indices = by_class[c];
    rng.shuffle(indices);
    const std::size_t keep = std::min(quota[c], indices.size());
    chosen.insert(chosen.end(), indices.begin(), indices.begin() + keep);
  }
  return take_rows(data, std::move(chosen));
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                          double train_fraction,
                                          std::uint64_t seed,
                                          std::size_t cycle) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("split: train fraction must be in (0, 1)");
  }
  auto by_class = indices_by_class(data);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (by_class[c].size() < 2) {
      throw DataError("split: class '" + data.class_names[c] +
                      "' has fewer than 2 samples");
    }
  }

  Rng rng(Rng::derive(seed, {kSplitTag, cycle}));
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (auto& indices : by_class) {
    rng.shuffle(indices);
    const auto want = static_cast<std::size_t>(std::llround(
        train_fraction * static_cast<double>(indices.size())));
    const std::size_t take = std::min(want, indices.size());
    train_rows.insert(train_rows.end(), indices.begin(), indices.begin() + take);
    test_rows.insert(test_rows.end(), indices.begin() + take, indices.end());
  }
  return {take_rows(data, std::move(train_rows)),
          take_rows(data, std::move(test_rows))};
}

Dataset merge_binary(const Dataset& data, const std::string& positive_class) {
  const auto it = std::find(data.class_names.begin(), data.class_names.end(),
                            positive_class);
  if (it == data.class_names.end()) {
    throw ConfigError("binary preset: unknown class '" + positive_class + "'");
  }
  const int positive = static_cast<int>(it - data.class_names.begin());

  std::vector<std::string> labels;
  labels.reserve(data.size());
  for (const int y : data.y) {
    labels.push_back(y == positive ? positive_class : "rest");
  }
  return index_labels(data.x, std::move(labels));
}

MinMaxScaler MinMaxScaler::fit(const Dataset& train) {
  if (train.empty()) throw DataError("scaler: empty training split");
  MinMaxScaler scaler;
  scaler.ranges.resize(train.dims());
  for (std::size_t k = 0; k < train.dims(); ++k) {
    scaler.ranges[k] = {train.x[0][k], train.x[0][k]};
  }
  for (const auto& row : train.x) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      scaler.ranges[k] = scaler.ranges[k].merged(row[k]);
    }
  }
  return scaler;
}

std::vector<double> MinMaxScaler::transform(const std::vector<double>& row) const {
  if (row.size() != ranges.size()) {
    throw DataError("scaler: row dimension mismatch");
  }
  std::vector<double> out(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) {
    const double width = ranges[k].width();
    out[k] = width > 0.0 ? (row[k] - ranges[k].lo) / width : 0.5;
  }
  return out;
}

Dataset MinMaxScaler::transform(const Dataset& data) const {
  Dataset out = data;
  for (auto& row : out.x) row = transform(row);
  return out;
}

Dataset make_blobs(std::size_t samples, double separation, std::uint64_t seed) {
  constexpr std::size_t kDims = 6;
  constexpr std::size_t kClasses = 3;
  Rng rng(Rng::derive(seed, {kBlobTag}));

  std::vector<std::vector<double>> x;
  std::vector<std::string> labels;
  x.reserve(samples);
  labels.reserve(samples);
  for (std::size_t c = 0; c < kClasses; ++c) {
    const std::size_t count = samples / kClasses + (c < samples % kClasses ? 1 : 0);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> row(kDims);
      for (std::size_t d = 0; d < kDims; ++d) {
        const double mean = d % kClasses == c ? separation : 0.0;
        row[d] = mean + rng.normal();
      }
      x.push_back(std::move(row));
      labels.push_back("class_" + std::to_string(c));
    }
  }
  return index_labels(std::move(x), std::move(labels));
}

void write_texture_dataset(const std::filesystem::path& root,
                           std::size_t per_class, std::size_t side,
                           std::uint64_t seed) {
  namespace fs = std::filesystem;
  Rng rng(Rng::derive(seed, {kTextureTag}));
  const std::array<const char*, 3> families = {"constant", "noise", "stripes"};
  for (const char* family : families) {
    fs::create_directories(root / family);
  }

  char name[32];
  for (std::size_t i = 0; i < per_class; ++i) {
    std::snprintf(name, sizeof name, "img_%03zu.png", i);

    glcm::RawImage image;
    image.width = side;
    image.height = side;
    image.channels = 1;
    image.pixels.assign(side * side, 0);

    const auto value = static_cast<std::uint8_t>(32 + (i * 17) % 192);
    std::fill(image.pixels.begin(), image.pixels.end(), value);
    glcm::write_png(root / "constant" / name, image);

    for (auto& p : image.pixels) {
      p = static_cast<std::uint8_t>(rng.uniform_index(256));
    }
    glcm::write_png(root / "noise" / name, image);

    const std::size_t period = 2 + i % 6;
    const std::size_t phase = i % period;
    const auto lo = static_cast<std::uint8_t>(40 + (i * 5) % 40);
    const auto hi = static_cast<std::uint8_t>(180 + (i * 7) % 60);
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        image.pixels[r * side + c] = (c + phase) / period % 2 == 0 ? lo : hi;
      }
    }
    glcm::write_png(root / "stripes" / name, image);
  }
}

}  // namespace tnfin::pipeline
