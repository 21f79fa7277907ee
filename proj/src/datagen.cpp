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

#include "uios/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "uios/errors.hpp"
#include "uios/random.hpp"

namespace uios {
namespace {

double Distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

double MinDistance(std::span<const double> x, const std::vector<Point>& centers) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : centers) best = std::min(best, Distance(x, c));
  return best;
}

std::size_t CheckedDim(const std::vector<Point>& centers) {
  if (centers.empty()) throw UsageError("OOD generation needs the in-distribution centers");
  const std::size_t d = centers.front().size();
  for (const auto& c : centers) {
    if (c.size() != d || d == 0) throw UsageError("centers have inconsistent dimensions");
  }
  return d;
}

std::string FormatDouble(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void Dataset::validate() const {
  if (features.rows() != labels.size()) {
    throw DataError(name + ": " + std::to_string(features.rows()) + " feature rows but " +
                    std::to_string(labels.size()) + " labels");
  }
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (double v : features.row(r)) {
      if (!std::isfinite(v)) throw DataError(name + ": non-finite feature in row " + std::to_string(r));
    }
    if (labels[r] != kOodLabel && (labels[r] < 0 || static_cast<std::size_t>(labels[r]) >= classes)) {
      throw DataError(name + ": label " + std::to_string(labels[r]) + " out of range in row " +
                      std::to_string(r));
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices, std::string subset_name) const {
  Dataset out;
  out.features = features.select_rows(indices);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(labels[i]);
  out.classes = classes;
  out.name = std::move(subset_name);
  out.provenance = provenance;
  return out;
}

std::vector<Point> circle_centers(std::size_t classes, std::size_t dim, double radius) {
  if (dim < 2) throw UsageError("circle_centers: need at least 2 dimensions");
  std::vector<Point> centers;
  for (std::size_t k = 0; k < classes; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(classes);
    Point c(dim, 0.0);
    c[0] = radius * std::cos(angle);
    c[1] = radius * std::sin(angle);
    centers.push_back(std::move(c));
  }
  return centers;
}

std::vector<Point> BlobSpec::resolved_centers() const {
  return centers.empty() ? circle_centers(classes, dim, radius) : centers;
}

Dataset gen_blobs(const BlobSpec& spec) {
  if (!(spec.sigma > 0.0)) throw UsageError("gen_blobs: sigma must be > 0");
  if (spec.classes == 0 || spec.n_per_class == 0) throw UsageError("gen_blobs: empty dataset");
  const auto centers = spec.resolved_centers();
  if (centers.size() != spec.classes) throw UsageError("gen_blobs: need one center per class");
  for (const auto& c : centers) {
    if (c.size() != spec.dim) throw UsageError("gen_blobs: center dimension mismatch");
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      if (centers[i] == centers[j]) throw UsageError("gen_blobs: centers must be pairwise distinct");
    }
  }

  Rng rng(spec.seed);
  Dataset ds;
  ds.features = Matrix(spec.classes * spec.n_per_class, spec.dim);
  ds.labels.reserve(ds.features.rows());
  ds.classes = spec.classes;
  ds.name = "blobs";
  std::size_t r = 0;
  for (std::size_t k = 0; k < spec.classes; ++k) {
    for (std::size_t i = 0; i < spec.n_per_class; ++i, ++r) {
      auto row = ds.features.row(r);
      for (std::size_t j = 0; j < spec.dim; ++j) row[j] = rng.normal(centers[k][j], spec.sigma);
      ds.labels.push_back(static_cast<int>(k));
    }
  }
  ds.provenance = {{"generator", "blobs"},
                   {"classes", std::to_string(spec.classes)},
                   {"dim", std::to_string(spec.dim)},
                   {"n_per_class", std::to_string(spec.n_per_class)},
                   {"sigma", FormatDouble(spec.sigma)},
                   {"seed", std::to_string(spec.seed)}};
  return ds;
}

std::string_view to_string(OodKind kind) {
  switch (kind) {
    case OodKind::kRing: return "ring";
    case OodKind::kFarCluster: return "far_cluster";
    case OodKind::kUniformBox: return "uniform_box";
  }
  return "?";
}

OodKind parse_ood_kind(std::string_view name) {
  if (name == "ring") return OodKind::kRing;
  if (name == "far_cluster") return OodKind::kFarCluster;
  if (name == "uniform_box") return OodKind::kUniformBox;
  throw UsageError("unknown OOD kind '" + std::string(name) + "'");
}

Dataset gen_ood(OodKind kind, std::size_t n, const OodParams& params, std::uint64_t seed) {
  const std::size_t d = CheckedDim(params.centers);
  if (!(params.sigma > 0.0)) throw UsageError("gen_ood: sigma must be > 0");
  Rng rng(seed);
  double max_radius = 0.0;
  for (const auto& c : params.centers) {
    max_radius = std::max(max_radius, Distance(c, Point(d, 0.0)));
  }

  Dataset ds;
  ds.features = Matrix(n, d);
  ds.labels.assign(n, kOodLabel);
  ds.classes = params.centers.size();
  ds.name = "ood_" + std::string(to_string(kind));

  switch (kind) {
    case OodKind::kRing: {
      if (d < 2) throw UsageError("gen_ood: ring needs at least 2 dimensions");
      for (std::size_t r = 0; r < n; ++r) {
        const double radius = rng.uniform(3.0 * max_radius, 3.5 * max_radius);
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        ds.features(r, 0) = radius * std::cos(angle);
        ds.features(r, 1) = radius * std::sin(angle);
      }
      break;
    }
    case OodKind::kFarCluster: {
      Point center(d, (max_radius + 20.0 * params.sigma) / std::sqrt(static_cast<double>(d)));
      for (std::size_t r = 0; r < n; ++r) {
        auto row = ds.features.row(r);
        do {
          for (std::size_t j = 0; j < d; ++j) row[j] = rng.normal(center[j], params.sigma);
        } while (MinDistance(row, params.centers) <= 10.0 * params.sigma);
      }
      break;
    }
    case OodKind::kUniformBox: {
      Point lo(d, std::numeric_limits<double>::infinity());
      Point hi(d, -std::numeric_limits<double>::infinity());
      for (const auto& c : params.centers) {
        for (std::size_t j = 0; j < d; ++j) {
          lo[j] = std::min(lo[j], c[j] - 3.0 * params.sigma);
          hi[j] = std::max(hi[j], c[j] + 3.0 * params.sigma);
        }
      }
      for (std::size_t j = 0; j < d; ++j) {
        const double mid = 0.5 * (lo[j] + hi[j]);
        const double half = 2.5 * (hi[j] - lo[j]);
        lo[j] = mid - half;
        hi[j] = mid + half;
      }
      for (std::size_t r = 0; r < n; ++r) {
        auto row = ds.features.row(r);
        do {
          for (std::size_t j = 0; j < d; ++j) row[j] = rng.uniform(lo[j], hi[j]);
        } while (MinDistance(row, params.centers) <= 3.0 * params.sigma);
      }
      break;
    }
  }
  ds.provenance = {{"generator", ds.name},
                   {"n", std::to_string(n)},
                   {"sigma", FormatDouble(params.sigma)},
                   {"seed", std::to_string(seed)}};
  return ds;
}

DataSplit split_622(const Dataset& dataset, const SplitSpec& spec) {
  for (double r : {spec.train, spec.val, spec.test}) {
    if (!(r > 0.0)) throw UsageError("split ratios must be positive");
  }
  if (std::abs(spec.train + spec.val + spec.test - 1.0) > 1e-9) {
    throw UsageError("split ratios must sum to 1");
  }
  if (dataset.size() < 10) throw DataError("split: need at least 10 rows, got " + std::to_string(dataset.size()));

  std::map<int, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < dataset.size(); ++i) strata[dataset.labels[i]].push_back(i);

  Rng rng(spec.seed);
  std::vector<std::size_t> train_idx, val_idx, test_idx;
  for (auto& [label, idx] : strata) {
    const std::size_t m = idx.size();
    if (m < 3) {
      throw DataError("split: label " + std::to_string(label) + " has only " + std::to_string(m) +
                      " rows; stratification needs at least 3");
    }
    rng.shuffle(idx);
    const auto md = static_cast<double>(m);
    std::size_t n_train = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.train * md)));
    std::size_t n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.val * md)));
    while (n_train + n_val >= m) {
      if (n_train >= n_val && n_train > 1) {
        --n_train;
      } else {
        --n_val;
      }
    }
    train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + n_train);
    val_idx.insert(val_idx.end(), idx.begin() + n_train, idx.begin() + n_train + n_val);
    test_idx.insert(test_idx.end(), idx.begin() + n_train + n_val, idx.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {dataset.subset(train_idx, dataset.name + "/train"),
          dataset.subset(val_idx, dataset.name + "/val"),
          dataset.subset(test_idx, dataset.name + "/test")};
}

namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Dataset parse_csv(std::istream& in, std::string_view source_name) {
  const std::string src(source_name);
  std::string line;
  if (!std::getline(in, line)) throw DataError(src + ": empty file (missing header)");
  const auto header = SplitFields(Trim(line));
  if (header.size() < 2 || Trim(header.back()) != "label") {
    throw DataError(src + ": header must be f0,...,f{d-1},label");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (Trim(header[j]) != "f" + std::to_string(j)) {
      throw DataError(src + ": header column " + std::to_string(j + 1) + " must be f" +
                      std::to_string(j) + ", got '" + std::string(header[j]) + "'");
    }
  }

  std::vector<double> values;
  Dataset ds;
  ds.name = src;
  int max_label = -1;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto fields = SplitFields(trimmed);
    const std::string where = src + ": row " + std::to_string(row);
    if (fields.size() != d + 1) {
      throw DataError(where + ": expected " + std::to_string(d + 1) + " fields, got " +
                      std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < d; ++j) {
      const auto cell = Trim(fields[j]);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw DataError(where + ", column f" + std::to_string(j) + ": '" + std::string(cell) +
                        "' is not a number");
      }
      if (!std::isfinite(v)) {
        throw DataError(where + ", column f" + std::to_string(j) + ": non-finite value");
      }
      values.push_back(v);
    }
    const auto label_cell = Trim(fields[d]);
    if (label_cell == "ood") {
      ds.labels.push_back(kOodLabel);
    } else {
      int label = 0;
      const auto res = std::from_chars(label_cell.data(), label_cell.data() + label_cell.size(), label);
      if (res.ec != std::errc() || res.ptr != label_cell.data() + label_cell.size() || label < 0) {
        throw DataError(where + ", column label: '" + std::string(label_cell) +
                        "' is not a class index or 'ood'");
      }
      ds.labels.push_back(label);
      max_label = std::max(max_label, label);
    }
  }
  ds.features = Matrix(ds.labels.size(), d, std::move(values));
  ds.classes = static_cast<std::size_t>(max_label + 1);
  ds.provenance = {{"source", src}};
  return ds;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_csv(in, path.string());
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  for (std::size_t j = 0; j < dataset.dim(); ++j) out << 'f' << j << ',';
  out << "label\n";
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    for (double v : dataset.features.row(r)) out << FormatDouble(v) << ',';
    if (dataset.labels[r] == kOodLabel) {
      out << "ood\n";
    } else {
      out << dataset.labels[r] << '\n';
    }
  }
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_csv(dataset, out);
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace uios
