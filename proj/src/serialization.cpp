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

#include "uios/serialization.hpp"

#include <sodium.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <set>

#include "uios/errors.hpp"

namespace uios {

using nlohmann::json;

namespace {

void EnsureSodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error("libsodium initialisation failed");
}

std::vector<unsigned char> LittleEndianBytes(std::span<const double> values) {
  std::vector<unsigned char> bytes(values.size() * sizeof(double));
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (std::size_t b = 0; b < 8; ++b) {
      bytes[i * 8 + b] = static_cast<unsigned char>(bits & 0xFF);
      bits >>= 8;
    }
  }
  return bytes;
}

// Exact key set; anything extra or missing is a format error.
void ExpectKeys(const json& obj, std::initializer_list<const char*> keys, const char* what) {
  if (!obj.is_object()) throw DataError(std::string(what) + ": expected a JSON object");
  const std::set<std::string> wanted(keys.begin(), keys.end());
  for (const auto& [key, _] : obj.items()) {
    if (!wanted.contains(key)) {
      throw DataError(std::string(what) + ": unknown field '" + key + "'");
    }
  }
  for (const auto& key : wanted) {
    if (!obj.contains(key)) throw DataError(std::string(what) + ": missing field '" + key + "'");
  }
}

json EncodedArray(std::span<const double> values) {
  return {{"n", values.size()}, {"data", encode_doubles(values)}};
}

std::vector<double> DecodeArray(const json& doc, const char* what) {
  ExpectKeys(doc, {"n", "data"}, what);
  return decode_doubles(doc.at("data").get<std::string>(), doc.at("n").get<std::size_t>());
}

json MlpConfigToJson(const MlpConfig& cfg) {
  return {{"input_dim", cfg.input_dim},       {"hidden_dims", cfg.hidden_dims},
          {"output_dim", cfg.output_dim},     {"activation", "relu"},
          {"dropout_rate", cfg.dropout_rate}, {"seed", cfg.seed}};
}

MlpConfig MlpConfigFromJson(const json& doc) {
  ExpectKeys(doc, {"input_dim", "hidden_dims", "output_dim", "activation", "dropout_rate", "seed"},
             "mlp");
  if (doc.at("activation") != "relu") throw DataError("mlp: unsupported activation");
  MlpConfig cfg;
  cfg.input_dim = doc.at("input_dim").get<std::size_t>();
  cfg.hidden_dims = doc.at("hidden_dims").get<std::vector<std::size_t>>();
  cfg.output_dim = doc.at("output_dim").get<std::size_t>();
  cfg.dropout_rate = doc.at("dropout_rate").get<double>();
  cfg.seed = doc.at("seed").get<std::uint64_t>();
  try {
    cfg.validate();
  } catch (const UsageError& e) {
    throw DataError(std::string("mlp: ") + e.what());
  }
  return cfg;
}

json TrainConfigToJson(const TrainConfig& cfg) {
  return {{"learning_rate", cfg.learning_rate},
          {"weight_decay", cfg.weight_decay},
          {"batch_size", cfg.batch_size},
          {"epochs", cfg.epochs},
          {"anneal_epochs", cfg.anneal_epochs},
          {"objective", std::string(to_string(cfg.objective))},
          {"seed", cfg.seed},
          {"snapshot_count", cfg.snapshot_count},
          {"hidden_dims", cfg.hidden_dims},
          {"dropout_rate", cfg.dropout_rate}};
}

TrainConfig TrainConfigFromJson(const json& doc) {
  ExpectKeys(doc,
             {"learning_rate", "weight_decay", "batch_size", "epochs", "anneal_epochs", "objective",
              "seed", "snapshot_count", "hidden_dims", "dropout_rate"},
             "train_config");
  TrainConfig cfg;
  cfg.learning_rate = doc.at("learning_rate").get<double>();
  cfg.weight_decay = doc.at("weight_decay").get<double>();
  cfg.batch_size = doc.at("batch_size").get<std::size_t>();
  cfg.epochs = doc.at("epochs").get<int>();
  cfg.anneal_epochs = doc.at("anneal_epochs").get<int>();
  cfg.objective = parse_objective(doc.at("objective").get<std::string>());
  cfg.seed = doc.at("seed").get<std::uint64_t>();
  cfg.snapshot_count = doc.at("snapshot_count").get<std::size_t>();
  cfg.hidden_dims = doc.at("hidden_dims").get<std::vector<std::size_t>>();
  cfg.dropout_rate = doc.at("dropout_rate").get<double>();
  return cfg;
}

json ScorerToJson(const ScorerParams& p) {
  return {{"passes", p.passes},
          {"dropout_rate", p.dropout_rate},
          {"jitter_sigma", p.jitter_sigma},
          {"seed", p.seed}};
}

ScorerParams ScorerFromJson(const json& doc) {
  ExpectKeys(doc, {"passes", "dropout_rate", "jitter_sigma", "seed"}, "scorer");
  ScorerParams p;
  p.passes = doc.at("passes").get<std::size_t>();
  p.dropout_rate = doc.at("dropout_rate").get<double>();
  p.jitter_sigma = doc.at("jitter_sigma").get<double>();
  p.seed = doc.at("seed").get<std::uint64_t>();
  return p;
}

json StoredCalibrationToJson(const StoredCalibration& stored) {
  const auto& cal = stored.calibration;
  return {{"theta", cal.theta},
          {"tpr_weight", cal.tpr_weight},
          {"selected", cal.selected},
          {"candidates", EncodedArray(cal.candidates)},
          {"tpr", EncodedArray(cal.tpr)},
          {"fpr", EncodedArray(cal.fpr)},
          {"objective", EncodedArray(cal.objective)},
          {"scorer", ScorerToJson(stored.scorer)}};
}

StoredCalibration StoredCalibrationFromJson(const json& doc) {
  ExpectKeys(doc, {"theta", "tpr_weight", "selected", "candidates", "tpr", "fpr", "objective", "scorer"},
             "calibration");
  StoredCalibration stored;
  auto& cal = stored.calibration;
  cal.theta = doc.at("theta").get<double>();
  cal.tpr_weight = doc.at("tpr_weight").get<double>();
  cal.selected = doc.at("selected").get<std::size_t>();
  cal.candidates = DecodeArray(doc.at("candidates"), "calibration.candidates");
  cal.tpr = DecodeArray(doc.at("tpr"), "calibration.tpr");
  cal.fpr = DecodeArray(doc.at("fpr"), "calibration.fpr");
  cal.objective = DecodeArray(doc.at("objective"), "calibration.objective");
  const std::size_t n = cal.candidates.size();
  if (cal.tpr.size() != n || cal.fpr.size() != n || cal.objective.size() != n || cal.selected >= n ||
      cal.candidates[cal.selected] != cal.theta) {
    throw DataError("calibration: inconsistent threshold curve");
  }
  stored.scorer = ScorerFromJson(doc.at("scorer"));
  return stored;
}

}  // namespace

std::string encode_doubles(std::span<const double> values) {
  EnsureSodium();
  const auto bytes = LittleEndianBytes(values);
  const auto variant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_encoded_len(bytes.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), variant);
  out.resize(std::strlen(out.c_str()));
  return out;
}

std::vector<double> decode_doubles(std::string_view encoded, std::size_t expected) {
  EnsureSodium();
  std::vector<unsigned char> bytes(expected * sizeof(double) + 3);
  std::size_t len = 0;
  if (sodium_base642bin(bytes.data(), bytes.size(), encoded.data(), encoded.size(), nullptr, &len,
                        nullptr, sodium_base64_VARIANT_ORIGINAL) != 0) {
    throw DataError("malformed base64 array");
  }
  if (len != expected * sizeof(double)) {
    throw DataError("array holds " + std::to_string(len / sizeof(double)) + " values, expected " +
                    std::to_string(expected));
  }
  std::vector<double> values(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    std::uint64_t bits = 0;
    for (std::size_t b = 8; b-- > 0;) bits = (bits << 8) | bytes[i * 8 + b];
    values[i] = std::bit_cast<double>(bits);
  }
  return values;
}

std::string dataset_fingerprint(const Dataset& dataset) {
  EnsureSodium();
  crypto_generichash_state state;
  crypto_generichash_init(&state, nullptr, 0, crypto_generichash_BYTES);
  const std::uint64_t shape[2] = {dataset.features.rows(), dataset.features.cols()};
  const auto shape_bytes = LittleEndianBytes(
      std::array<double, 2>{static_cast<double>(shape[0]), static_cast<double>(shape[1])});
  crypto_generichash_update(&state, shape_bytes.data(), shape_bytes.size());
  const auto feature_bytes = LittleEndianBytes(dataset.features.data());
  crypto_generichash_update(&state, feature_bytes.data(), feature_bytes.size());
  std::vector<double> labels(dataset.labels.begin(), dataset.labels.end());
  const auto label_bytes = LittleEndianBytes(labels);
  crypto_generichash_update(&state, label_bytes.data(), label_bytes.size());
  unsigned char digest[crypto_generichash_BYTES];
  crypto_generichash_final(&state, digest, sizeof(digest));
  char hex[2 * crypto_generichash_BYTES + 1];
  sodium_bin2hex(hex, sizeof(hex), digest, sizeof(digest));
  return hex;
}

json params_to_json(const MlpParams& params) {
  json layers = json::array();
  for (const auto& layer : params.layers) {
    layers.push_back({{"weight",
                       {{"rows", layer.weight.rows()},
                        {"cols", layer.weight.cols()},
                        {"data", encode_doubles(layer.weight.data())}}},
                      {"bias", EncodedArray(layer.bias)}});
  }
  return layers;
}

MlpParams params_from_json(const json& doc) {
  if (!doc.is_array()) throw DataError("params: expected an array of layers");
  MlpParams params;
  for (const auto& layer : doc) {
    ExpectKeys(layer, {"weight", "bias"}, "layer");
    const auto& w = layer.at("weight");
    ExpectKeys(w, {"rows", "cols", "data"}, "layer.weight");
    const auto rows = w.at("rows").get<std::size_t>();
    const auto cols = w.at("cols").get<std::size_t>();
    DenseLayer dl{Matrix(rows, cols, decode_doubles(w.at("data").get<std::string>(), rows * cols)),
                  DecodeArray(layer.at("bias"), "layer.bias")};
    if (dl.bias.size() != cols) throw DataError("layer: bias size does not match weight columns");
    params.layers.push_back(std::move(dl));
  }
  if (!params.all_finite()) throw DataError("params: non-finite parameter");
  return params;
}

json checkpoint_to_json(const Checkpoint& ckpt) {
  const Model& m = ckpt.model;
  json snapshots = json::array();
  for (std::size_t i = 0; i < m.snapshots.size(); ++i) {
    snapshots.push_back({{"epoch", m.snapshot_epochs.at(i)}, {"params", params_to_json(m.snapshots[i])}});
  }
  json calibrations = json::object();
  for (const auto& [method, stored] : ckpt.calibrations) {
    calibrations[method] = StoredCalibrationToJson(stored);
  }
  return {{"format", "uios-checkpoint"},
          {"format_version", ckpt.format_version},
          {"mlp", MlpConfigToJson(m.config)},
          {"params", params_to_json(m.params)},
          {"objective", std::string(to_string(m.objective))},
          {"schedule",
           {{"epoch", m.schedule.epoch},
            {"anneal_epochs", m.schedule.anneal_epochs},
            {"lambda", m.schedule.lambda},
            {"tau", m.schedule.tau}}},
          {"train_config", TrainConfigToJson(ckpt.train_config)},
          {"dataset_fingerprint", ckpt.dataset_fingerprint},
          {"snapshots", snapshots},
          {"calibrations", calibrations}};
}

Checkpoint checkpoint_from_json(const json& doc) {
  try {
    ExpectKeys(doc,
               {"format", "format_version", "mlp", "params", "objective", "schedule", "train_config",
                "dataset_fingerprint", "snapshots", "calibrations"},
               "checkpoint");
    if (doc.at("format") != "uios-checkpoint") throw DataError("checkpoint: wrong format tag");
    Checkpoint ckpt;
    ckpt.format_version = doc.at("format_version").get<int>();
    if (ckpt.format_version != kCheckpointFormatVersion) {
      throw DataError("checkpoint: unsupported format_version " + std::to_string(ckpt.format_version));
    }
    Model& m = ckpt.model;
    m.config = MlpConfigFromJson(doc.at("mlp"));
    m.params = params_from_json(doc.at("params"));
    const auto widths = m.config.layer_widths();
    if (m.params.layers.size() + 1 != widths.size()) throw DataError("checkpoint: layer count mismatch");
    for (std::size_t l = 0; l < m.params.layers.size(); ++l) {
      if (m.params.layers[l].weight.rows() != widths[l] ||
          m.params.layers[l].weight.cols() != widths[l + 1]) {
        throw DataError("checkpoint: layer " + std::to_string(l) + " shape does not match mlp config");
      }
    }
    m.objective = parse_objective(doc.at("objective").get<std::string>());
    const auto& s = doc.at("schedule");
    ExpectKeys(s, {"epoch", "anneal_epochs", "lambda", "tau"}, "schedule");
    m.schedule = {s.at("lambda").get<double>(), s.at("tau").get<double>(), s.at("epoch").get<int>(),
                  s.at("anneal_epochs").get<int>()};
    for (const auto& snap : doc.at("snapshots")) {
      ExpectKeys(snap, {"epoch", "params"}, "snapshot");
      m.snapshot_epochs.push_back(snap.at("epoch").get<int>());
      m.snapshots.push_back(params_from_json(snap.at("params")));
      if (m.snapshots.back().parameter_count() != m.params.parameter_count()) {
        throw DataError("snapshot: parameter layout differs from the model");
      }
    }
    ckpt.train_config = TrainConfigFromJson(doc.at("train_config"));
    ckpt.dataset_fingerprint = doc.at("dataset_fingerprint").get<std::string>();
    const auto& cals = doc.at("calibrations");
    if (!cals.is_object()) throw DataError("calibrations: expected an object");
    for (const auto& [method, entry] : cals.items()) {
      parse_method(method);
      ckpt.calibrations[method] = StoredCalibrationFromJson(entry);
    }
    return ckpt;
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
}

void write_json(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  write_json(checkpoint_to_json(ckpt), path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(read_json(path));
}

namespace {

json OptionalNumber(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json metric_report_to_json(const MetricReport& report) {
  json doc = {{"n_total", report.n_total},
              {"n_evaluated", report.n_evaluated},
              {"n_referred", report.n_referred},
              {"referral_rate", report.referral_rate},
              {"available", report.available}};
  json cm = json::array();
  for (std::size_t t = 0; t < report.confusion.classes(); ++t) {
    json row = json::array();
    for (std::size_t p = 0; p < report.confusion.classes(); ++p) row.push_back(report.confusion.at(t, p));
    cm.push_back(row);
  }
  doc["confusion"] = cm;
  if (!report.available) {
    doc["accuracy"] = nullptr;
    doc["macro"] = nullptr;
    doc["per_class"] = json::array();
    doc["auc_excluded_classes"] = json::array();
    return doc;
  }
  const auto& m = report.metrics;
  doc["accuracy"] = m.accuracy;
  doc["macro"] = {{"precision", m.macro_precision},
                  {"sensitivity", m.macro_sensitivity},
                  {"specificity", m.macro_specificity},
                  {"f1", m.macro_f1},
                  {"auc", OptionalNumber(report.auc.macro)}};
  json per_class = json::array();
  for (std::size_t c = 0; c < m.per_class.size(); ++c) {
    const auto& pc = m.per_class[c];
    per_class.push_back({{"class", c},
                         {"support", pc.support},
                         {"precision", pc.precision},
                         {"sensitivity", pc.sensitivity},
                         {"specificity", pc.specificity},
                         {"f1", pc.f1},
                         {"in_macro", pc.in_macro},
                         {"auc", OptionalNumber(report.auc.per_class.at(c))}});
  }
  doc["per_class"] = per_class;
  doc["auc_excluded_classes"] = report.auc.excluded;
  return doc;
}

json calibration_to_json(const ThresholdCalibration& cal) {
  json curve = json::array();
  for (std::size_t i = 0; i < cal.candidates.size(); ++i) {
    curve.push_back({{"theta", cal.candidates[i]},
                     {"tpr", cal.tpr[i]},
                     {"fpr", cal.fpr[i]},
                     {"objective", cal.objective[i]}});
  }
  return {{"theta", cal.theta},
          {"tpr_weight", cal.tpr_weight},
          {"tpr_at_theta", cal.tpr_at_theta()},
          {"fpr_at_theta", cal.fpr_at_theta()},
          {"objective_at_theta", cal.objective_at_theta()},
          {"curve", curve}};
}

}  // namespace uios
