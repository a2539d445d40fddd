#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tnfin/image.hpp"
#include "tnfin/interval.hpp"

namespace tnfin::glcm {

/// Pixel displacement between the two members of a co-occurring pair.
struct Offset {
  int dy = 0;
  int dx = 1;
};

/// Normalized symmetric gray-level co-occurrence matrix.
struct GlcmMatrix {
  std::size_t levels = 0;
  std::vector<double> entries;  // levels x levels, row-major, sums to 1
  Offset offset;

  double at(std::size_t i, std::size_t j) const {
    return entries[i * levels + j];
  }
};

/// The network's six inputs, in this fixed order.
struct FeatureVector {
  double contrast = 0.0;
  double correlation = 0.0;
  double energy = 0.0;
  double homogeneity = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;

  std::array<double, 6> as_array() const {
    return {contrast, correlation, energy, homogeneity, mean, std_dev};
  }
  static constexpr std::array<const char*, 6> names() {
    return {"contrast", "correlation", "energy", "homogeneity", "mean", "std"};
  }
};

/// Counts level pairs at the offset over every in-bounds pixel pair, adds
/// the transpose, and normalizes to unit mass. Throws DataError when the
/// offset admits no pixel pair.
GlcmMatrix compute_glcm(const GrayImage& image, Offset offset = {});

/// Contrast, correlation, energy and homogeneity from the GLCM (correlation
/// uses the GLCM marginal mean/deviation; a constant image has correlation 1
/// by convention) plus mean and standard deviation of the normalized
/// gray-level histogram.
FeatureVector extract_features(const GlcmMatrix& glcm, const GrayImage& image);

/// Feature rows for a list of labeled images plus the per-feature value
/// ranges observed. Any undecodable path aborts with an error listing every
/// failing path.
struct LabeledFeatures {
  std::vector<FeatureVector> features;
  std::vector<std::string> labels;
  std::array<Interval, 6> ranges{};
};

LabeledFeatures featurize_dataset(
    const std::vector<std::pair<std::filesystem::path, std::string>>& items,
    const PreprocessOptions& options = {}, Offset offset = {});

/// Collects `<root>/<class-name>/*.{png,jpg,jpeg}` (class = directory name),
/// both sorted lexicographically. Throws DataError when fewer than two class
/// directories contain images.
std::vector<std::pair<std::filesystem::path, std::string>>
scan_image_directory(const std::filesystem::path& root);

/// CSV with header `contrast,correlation,energy,homogeneity,mean,std,label`,
/// one row per image, 10 significant digits, LF line endings.
void write_feature_csv(const std::filesystem::path& path,
                       const LabeledFeatures& data);

}  // namespace tnfin::glcm
