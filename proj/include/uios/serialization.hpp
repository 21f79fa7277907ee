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

#ifndef UIOS_SERIALIZATION_HPP_
#define UIOS_SERIALIZATION_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include "uios/baselines.hpp"
#include "uios/calibration.hpp"
#include "uios/datagen.hpp"
#include "uios/metrics.hpp"
#include "uios/trainer.hpp"

namespace uios {

inline constexpr int kCheckpointFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;

// Base64 (standard alphabet, padded) of the little-endian IEEE-754 bytes.
std::string encode_doubles(std::span<const double> values);
// Throws DataError on bad base64 or when the length is not `expected`.
std::vector<double> decode_doubles(std::string_view encoded, std::size_t expected);

// Hex BLAKE2b-256 of the feature bytes and labels.
std::string dataset_fingerprint(const Dataset& dataset);

// A threshold together with the scorer settings that produced the
// uncertainties it was fitted on.
struct StoredCalibration {
  ThresholdCalibration calibration;
  ScorerParams scorer;
};

struct Checkpoint {
  int format_version = kCheckpointFormatVersion;
  Model model;
  TrainConfig train_config;
  std::string dataset_fingerprint;
  // Keyed by method name ("uios", "entropy", ...).
  std::map<std::string, StoredCalibration> calibrations;
};

nlohmann::json checkpoint_to_json(const Checkpoint& ckpt);
// Strict: unknown or missing fields throw DataError.
Checkpoint checkpoint_from_json(const nlohmann::json& doc);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

nlohmann::json params_to_json(const MlpParams& params);
MlpParams params_from_json(const nlohmann::json& doc);

nlohmann::json metric_report_to_json(const MetricReport& report);
nlohmann::json calibration_to_json(const ThresholdCalibration& cal);

// Writes `doc` with two-space indentation and a trailing newline.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace uios

#endif  // UIOS_SERIALIZATION_HPP_
