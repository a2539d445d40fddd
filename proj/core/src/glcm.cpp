#include "tnfin/glcm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "tnfin/errors.hpp"

namespace tnfin::glcm {

GlcmMatrix compute_glcm(const GrayImage& image, Offset offset) {
  if (image.width == 0 || image.height == 0) {
    throw DataError("compute_glcm: empty image");
  }
  GlcmMatrix glcm;
  glcm.levels = image.levels;
  glcm.offset = offset;
  glcm.entries.assign(image.levels * image.levels, 0.0);

  const auto h = static_cast<long>(image.height);
  const auto w = static_cast<long>(image.width);
  std::size_t pairs = 0;
  for (long r = 0; r < h; ++r) {
    const long r2 = r + offset.dy;
    if (r2 < 0 || r2 >= h) continue;
    for (long c = 0; c < w; ++c) {
      const long c2 = c + offset.dx;
      if (c2 < 0 || c2 >= w) continue;
      const std::size_t a = image.at(r, c);
      const std::size_t b = image.at(r2, c2);
      glcm.entries[a * glcm.levels + b] += 1.0;
      ++pairs;
    }
  }
  if (pairs == 0) {
    throw DataError("compute_glcm: offset admits no pixel pair");
  }

  // Symmetrize (count each pair in both directions), then normalize.
  for (std::size_t i = 0; i < glcm.levels; ++i) {
    for (std::size_t j = i + 1; j < glcm.levels; ++j) {
      const double s = glcm.entries[i * glcm.levels + j] +
                       glcm.entries[j * glcm.levels + i];
      glcm.entries[i * glcm.levels + j] = s;
      glcm.entries[j * glcm.levels + i] = s;
    }
    glcm.entries[i * glcm.levels + i] *= 2.0;
  }
  const double total = 2.0 * static_cast<double>(pairs);
  for (double& e : glcm.entries) e /= total;
  return glcm;
}

FeatureVector extract_features(const GlcmMatrix& glcm, const GrayImage& image) {
  if (glcm.levels == 0 || glcm.entries.size() != glcm.levels * glcm.levels) {
    throw DataError("extract_features: malformed GLCM");
  }
  const std::size_t levels = glcm.levels;

  // Marginal distribution (rows == columns for a symmetric matrix).
  std::vector<double> marginal(levels, 0.0);
  for (std::size_t i = 0; i < levels; ++i) {
    for (std::size_t j = 0; j < levels; ++j) {
      marginal[i] += glcm.at(i, j);
    }
  }
  double mu = 0.0;
  for (std::size_t i = 0; i < levels; ++i) {
    mu += static_cast<double>(i) * marginal[i];
  }
  double var = 0.0;
  for (std::size_t i = 0; i < levels; ++i) {
    const double d = static_cast<double>(i) - mu;
    var += d * d * marginal[i];
  }

  FeatureVector f;
  for (std::size_t i = 0; i < levels; ++i) {
    for (std::size_t j = 0; j < levels; ++j) {
      const double p = glcm.at(i, j);
      const double di = static_cast<double>(i) - mu;
      const double dj = static_cast<double>(j) - mu;
      const double ij = static_cast<double>(i) - static_cast<double>(j);
      f.contrast += ij * ij * p;
      f.energy += p * p;
      f.homogeneity += p / (1.0 + ij * ij);
      if (var > 0.0) f.correlation += p * di * dj / var;
    }
  }
  if (var <= 0.0) f.correlation = 1.0;  // constant image: perfectly correlated

  // Histogram mean / standard deviation of the quantized image itself.
  if (image.pixels.empty()) {
    throw DataError("extract_features: empty image");
  }
  std::vector<double> histogram(image.levels, 0.0);
  for (const std::uint8_t level : image.pixels) {
    histogram[level] += 1.0;
  }
  const double n = static_cast<double>(image.pixels.size());
  for (double& h : histogram) h /= n;
  for (std::size_t i = 0; i < histogram.size(); ++i) {
    f.mean += static_cast<double>(i) * histogram[i];
  }
  double spread = 0.0;
  for (std::size_t i = 0; i < histogram.size(); ++i) {
    const double d = static_cast<double>(i) - f.mean;
    spread += d * d * histogram[i];
  }
  f.std_dev = std::sqrt(spread);
  return f;
}

LabeledFeatures featurize_dataset(
    const std::vector<std::pair<std::filesystem::path, std::string>>& items,
    const PreprocessOptions& options, Offset offset) {
  LabeledFeatures out;
  out.features.reserve(items.size());
  out.labels.reserve(items.size());

  std::string failures;
  for (const auto& [path, label] : items) {
    try {
      const GrayImage gray = preprocess(load_image(path), options);
      out.features.push_back(extract_features(compute_glcm(gray, offset), gray));
      out.labels.push_back(label);
    } catch (const Error& e) {
      failures += failures.empty() ? "" : "; ";
      failures += path.string();
    }
  }
  if (!failures.empty()) {
    throw DataError("featurize_dataset: failed images: " + failures);
  }

  for (std::size_t i = 0; i < out.features.size(); ++i) {
    const auto values = out.features[i].as_array();
    for (std::size_t k = 0; k < values.size(); ++k) {
      out.ranges[k] =
          i == 0 ? Interval{values[k], values[k]} : out.ranges[k].merged(values[k]);
    }
  }
  return out;
}

std::vector<std::pair<std::filesystem::path, std::string>>
scan_image_directory(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) {
    throw DataError("not an image directory: " + root.string());
  }
  const auto has_image_extension = [](const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
  };

  std::map<std::string, std::vector<fs::path>> by_class;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    auto& files = by_class[entry.path().filename().string()];
    for (const auto& file : fs::directory_iterator(entry.path())) {
      if (file.is_regular_file() && has_image_extension(file.path())) {
        files.push_back(file.path());
      }
    }
    if (files.empty()) by_class.erase(entry.path().filename().string());
  }
  if (by_class.size() < 2) {
    throw DataError("image directory needs >= 2 class subdirectories: " +
                    root.string());
  }

  std::vector<std::pair<fs::path, std::string>> items;
  for (auto& [label, files] : by_class) {
    std::sort(files.begin(), files.end());
    for (auto& f : files) items.emplace_back(std::move(f), label);
  }
  return items;
}

void write_feature_csv(const std::filesystem::path& path,
                       const LabeledFeatures& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write feature csv: " + path.string());
  }
  out << "contrast,correlation,energy,homogeneity,mean,std,label\n";
  char buffer[64];
  for (std::size_t i = 0; i < data.features.size(); ++i) {
    const auto values = data.features[i].as_array();
    for (const double v : values) {
      std::snprintf(buffer, sizeof buffer, "%.10g", v);
      out << buffer << ',';
    }
    out << data.labels[i] << '\n';
  }
  if (!out.good()) {
    throw DataError("write failed: " + path.string());
  }
}

}  // namespace tnfin::glcm
