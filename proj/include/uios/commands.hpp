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

// Pipeline commands behind the uios command-line tool.

#ifndef UIOS_COMMANDS_HPP_
#define UIOS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uios/baselines.hpp"
#include "uios/serialization.hpp"
#include "uios/trainer.hpp"

namespace uios {

inline constexpr std::uint64_t kDefaultSeed = 42;

struct GenDataOptions {
  std::filesystem::path out_dir = "data";
  std::size_t classes = 5;
  std::size_t dim = 2;
  std::size_t n_per_class = 500;
  double radius = 4.0;
  double sigma = 0.9;
  std::size_t n_ood = 500;
  bool unseen = false;       // extra test_unseen.csv drawn with a wider sigma
  double unseen_sigma = 1.5;
  bool uniform_box = false;  // extra ood_uniform_box.csv
  std::uint64_t seed = kDefaultSeed;
};

struct TrainOptions {
  std::filesystem::path train_csv;
  std::optional<std::filesystem::path> val_csv;
  std::filesystem::path out = "model.json";
  std::optional<std::filesystem::path> log;  // default: <out>.log.jsonl
  TrainConfig config;
};

struct CalibrateOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path val_csv;
  std::optional<std::filesystem::path> out;  // default: overwrite checkpoint
  std::vector<std::string> methods;           // empty: default method for the model
  double tpr_weight = 2.0;
  ScorerParams scorer;
};

struct EvalOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path test_csv;
  std::string method;  // empty: default method for the model
  bool thresholded = false;
  std::optional<std::filesystem::path> out;
};

struct OodEvalOptions {
  std::filesystem::path checkpoint;
  std::vector<std::filesystem::path> ood_csvs;
  std::optional<std::filesystem::path> id_csv;
  std::string method;
  std::size_t bins = 10;
  std::optional<std::filesystem::path> out;
};

struct CompareOptions {
  std::optional<std::filesystem::path> checkpoint;           // evidential model, method uios
  std::optional<std::filesystem::path> baseline_checkpoint;  // standard_ce model, other methods
  std::filesystem::path test_csv;
  std::vector<std::filesystem::path> ood_csvs;
  std::vector<std::string> methods{"uios", "entropy", "mc_drop", "ensemble", "tta"};
  bool timing = false;  // include measured ms/sample in the JSON report
  std::optional<std::filesystem::path> out;
};

nlohmann::json cmd_gen_data(const GenDataOptions& opts, std::ostream& out);
nlohmann::json cmd_train(const TrainOptions& opts, std::ostream& out);
nlohmann::json cmd_calibrate(const CalibrateOptions& opts, std::ostream& out);
nlohmann::json cmd_eval(const EvalOptions& opts, std::ostream& out);
nlohmann::json cmd_ood_eval(const OodEvalOptions& opts, std::ostream& out);
nlohmann::json cmd_compare(const CompareOptions& opts, std::ostream& out);

// uios for evidential models, entropy otherwise.
Method default_method(const Model& model);

// Throws UsageError when the method cannot score this model.
void check_method_compatible(Method method, const Model& model);

// Counts of u in [0, 1] split into equal-width bins; u = 1 lands in the last bin.
std::vector<std::size_t> uncertainty_histogram(const std::vector<double>& u, std::size_t bins);

// Strict structural check of a report document; throws DataError.
void validate_report(const nlohmann::json& report);

}  // namespace uios

#endif  // UIOS_COMMANDS_HPP_
