/*
 * Copyright 2026 The uios Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef UIOS_DATAGEN_HPP_
#define UIOS_DATAGEN_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "uios/matrix.hpp"

namespace uios {

inline constexpr int kOodLabel = -1;

struct Dataset {
  Matrix features;
  // Class index in [0, classes), or kOodLabel.
  std::vector<int> labels;
  // Number of in-distribution classes the labels refer to.
  std::size_t classes = 0;
  std::string name;
  std::map<std::string, std::string> provenance;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
  // Throws DataError if rows are non-finite or labels out of range.
  void validate() const;
  Dataset subset(std::span<const std::size_t> indices, std::string subset_name) const;
};

using Point = std::vector<double>;

// K centers evenly spaced on a circle of the given radius in the first
// two coordinates; remaining coordinates are 0. Requires dim >= 2.
std::vector<Point> circle_centers(std::size_t classes, std::size_t dim, double radius);

struct BlobSpec {
  std::size_t classes = 5;
  std::size_t dim = 2;
  std::size_t n_per_class = 500;
  // Empty means circle_centers(classes, dim, radius).
  std::vector<Point> centers;
  double radius = 4.0;
  double sigma = 0.9;
  std::uint64_t seed = 42;

  std::vector<Point> resolved_centers() const;
};

// Isotropic Gaussian clusters, class-major row order.
Dataset gen_blobs(const BlobSpec& spec);

enum class OodKind { kRing, kFarCluster, kUniformBox };

std::string_view to_string(OodKind kind);
OodKind parse_ood_kind(std::string_view name);

// Geometry of the in-distribution data the OOD set must avoid.
struct OodParams {
  std::vector<Point> centers;
  double sigma = 0.9;
};

// Samples labelled kOodLabel, outside the ID support:
//   ring        radius uniform in [3R, 3.5R] (R = largest center norm),
//               in the plane of the first two coordinates
//   far_cluster Gaussian (same sigma) around a point R + 20 sigma from the
//               origin; samples within 10 sigma of an ID center are redrawn
//   uniform_box uniform over the ID bounding box (centers +- 3 sigma)
//               scaled 5x about its middle; samples within 3 sigma of an
//               ID center are redrawn
Dataset gen_ood(OodKind kind, std::size_t n, const OodParams& params, std::uint64_t seed);

struct SplitSpec {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
  std::uint64_t seed = 42;
};

struct DataSplit {
  Dataset train;
  Dataset val;
  Dataset test;
};

// Stratified by label (OOD rows form their own stratum). Each split keeps
// the original row order.
DataSplit split_622(const Dataset& dataset, const SplitSpec& spec = {});

// CSV with header f0,...,f{d-1},label; label is an integer >= 0 or "ood".
Dataset parse_csv(std::istream& in, std::string_view source_name);
Dataset load_csv(const std::filesystem::path& path);
void write_csv(const Dataset& dataset, std::ostream& out);
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace uios

#endif  // UIOS_DATAGEN_HPP_
