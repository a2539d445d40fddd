#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tnfin/glcm.hpp"
#include "tnfin/interval.hpp"

namespace tnfin::pipeline {

/// Labeled feature table. Labels are indices into class_names, which is
/// sorted lexicographically.
struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  std::vector<std::string> class_names;

  std::size_t size() const noexcept { return x.size(); }
  std::size_t dims() const noexcept { return x.empty() ? 0 : x.front().size(); }
  bool empty() const noexcept { return x.empty(); }
};

/// Reads a feature CSV produced by write_feature_csv. The header must match
/// `contrast,correlation,energy,homogeneity,mean,std,label` exactly;
/// malformed rows raise DataError naming the line.
Dataset load_feature_csv(const std::filesystem::path& path);

/// Featurizes `<root>/<class>/*.{png,jpg,jpeg}` into a dataset.
Dataset dataset_from_images(const std::filesystem::path& root,
                            const glcm::PreprocessOptions& options = {},
                            glcm::Offset offset = {});

Dataset from_labeled_features(const glcm::LabeledFeatures& features);

/// Writes a dataset back out in the feature-CSV format (blob datasets use
/// the same six columns).
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

/// Seeded uniform subsampling down to `cap` rows, stratified by class with
/// largest-remainder quotas. A cap of zero or >= size leaves data unchanged.
Dataset stratified_cap(const Dataset& data, std::size_t cap,
                       std::uint64_t seed);

/// Per-class shuffled split: round(fraction * class size) rows train, rest
/// test, RNG derived from (seed, cycle). Every class needs >= 2 samples.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                          double train_fraction,
                                          std::uint64_t seed,
                                          std::size_t cycle);

/// Binary preset: keeps `positive_class` and merges every other class into
/// "rest" (class indices reassigned lexicographically).
Dataset merge_binary(const Dataset& data, const std::string& positive_class);

/// Min-max feature scaler fit on the training split only.
struct MinMaxScaler {
  std::vector<Interval> ranges;

  static MinMaxScaler fit(const Dataset& train);
  std::vector<double> transform(const std::vector<double>& row) const;
  Dataset transform(const Dataset& data) const;
};

/// Three Gaussian blobs in 6-D feature space; class means sit `separation`
/// standard deviations from the origin on disjoint coordinate pairs.
Dataset make_blobs(std::size_t samples, double separation, std::uint64_t seed);

/// Writes three synthetic texture families (constant, noise, stripes) as
/// grayscale PNGs under `<root>/<family>/img_NNN.png`.
void write_texture_dataset(const std::filesystem::path& root,
                           std::size_t per_class, std::size_t side,
                           std::uint64_t seed);

}  // namespace tnfin::pipeline
