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

#include "uios/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <map>
#include <numeric>
#include <set>

#include "uios/calibration.hpp"
#include "uios/datagen.hpp"
#include "uios/errors.hpp"
#include "uios/metrics.hpp"
#include "uios/random.hpp"

namespace uios {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string Fixed(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string Padded(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

json Envelope(std::string_view command) {
  return {{"format", "uios-report"}, {"format_version", kReportFormatVersion}, {"command", command}};
}

json DatasetEntry(const fs::path& path, const Dataset& ds) {
  return {{"path", path.generic_string()}, {"rows", ds.size()}, {"fingerprint", dataset_fingerprint(ds)}};
}

Dataset LoadFor(const fs::path& path, const Model& model, bool labelled) {
  Dataset ds = load_csv(path);
  if (ds.dim() != model.config.input_dim) {
    throw DataError(path.string() + ": " + std::to_string(ds.dim()) +
                    " feature columns, checkpoint expects " + std::to_string(model.config.input_dim));
  }
  if (labelled) {
    for (std::size_t r = 0; r < ds.size(); ++r) {
      const int y = ds.labels[r];
      if (y < 0 || static_cast<std::size_t>(y) >= model.classes()) {
        throw DataError(path.string() + ": row " + std::to_string(r + 1) + " has label " +
                        (y == kOodLabel ? std::string("ood") : std::to_string(y)) +
                        " outside the model's " + std::to_string(model.classes()) + " classes");
      }
    }
  }
  return ds;
}

Method ResolveMethod(const std::string& name, const Model& model) {
  const Method m = name.empty() ? default_method(model) : parse_method(name);
  check_method_compatible(m, model);
  return m;
}

const StoredCalibration* FindCalibration(const Checkpoint& ckpt, Method method) {
  const auto it = ckpt.calibrations.find(std::string(to_string(method)));
  return it == ckpt.calibrations.end() ? nullptr : &it->second;
}

std::vector<double> Uncertainties(const std::vector<ScoredPrediction>& scored) {
  std::vector<double> u;
  u.reserve(scored.size());
  for (const auto& s : scored) u.push_back(s.uncertainty);
  return u;
}

double Mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void PrintBlock(std::ostream& out, const std::string& title, const MetricReport& r) {
  out << title << ": n=" << r.n_evaluated << "/" << r.n_total << " referred=" << r.n_referred << " ("
      << Fixed(r.referral_rate) << ")\n";
  if (!r.available) {
    out << "  no samples left to evaluate\n";
    return;
  }
  const auto& m = r.metrics;
  out << "  accuracy " << Fixed(m.accuracy) << "  precision " << Fixed(m.macro_precision)
      << "  sensitivity " << Fixed(m.macro_sensitivity) << "  specificity "
      << Fixed(m.macro_specificity) << "  F1 " << Fixed(m.macro_f1) << "  AUC "
      << (r.auc.macro ? Fixed(*r.auc.macro) : std::string("n/a")) << "\n";
  out << "  confusion (rows: true, cols: predicted)\n";
  for (std::size_t t = 0; t < r.confusion.classes(); ++t) {
    out << "   ";
    for (std::size_t p = 0; p < r.confusion.classes(); ++p) {
      out << Padded(std::to_string(r.confusion.at(t, p)), 6);
    }
    out << "\n";
  }
}

void PrintHistogram(std::ostream& out, const std::vector<std::size_t>& hist) {
  const std::size_t peak = hist.empty() ? 0 : *std::max_element(hist.begin(), hist.end());
  const double width = 1.0 / static_cast<double>(hist.size());
  for (std::size_t b = 0; b < hist.size(); ++b) {
    const std::size_t bar = peak == 0 ? 0 : (hist[b] * 40 + peak - 1) / peak;
    out << "  [" << Fixed(width * static_cast<double>(b), 2) << ", "
        << Fixed(width * static_cast<double>(b + 1), 2) << (b + 1 == hist.size() ? "]" : ")") << " "
        << Padded(std::to_string(hist[b]), 6) << " " << std::string(bar, '#') << "\n";
  }
}

void ExpectKeys(const json& obj, std::initializer_list<const char*> keys, const std::string& what) {
  if (!obj.is_object()) throw DataError(what + ": expected an object");
  const std::set<std::string> wanted(keys.begin(), keys.end());
  for (const auto& [key, _] : obj.items()) {
    if (!wanted.contains(key)) throw DataError(what + ": unknown field '" + key + "'");
  }
  for (const auto& key : wanted) {
    if (!obj.contains(key)) throw DataError(what + ": missing field '" + key + "'");
  }
}

void ValidateMetricBlock(const json& block, const std::string& what) {
  ExpectKeys(block,
             {"n_total", "n_evaluated", "n_referred", "referral_rate", "available", "confusion",
              "accuracy", "macro", "per_class", "auc_excluded_classes"},
             what);
  if (!block.at("macro").is_null()) {
    ExpectKeys(block.at("macro"), {"precision", "sensitivity", "specificity", "f1", "auc"},
               what + ".macro");
  }
  for (const auto& pc : block.at("per_class")) {
    ExpectKeys(pc, {"class", "support", "precision", "sensitivity", "specificity", "f1", "in_macro", "auc"},
               what + ".per_class");
  }
}

void ValidateDataset(const json& ds, const std::string& what) {
  ExpectKeys(ds, {"path", "rows", "fingerprint"}, what);
}

}  // namespace

Method default_method(const Model& model) {
  return is_evidential(model.objective) ? Method::kUios : Method::kEntropy;
}

void check_method_compatible(Method method, const Model& model) {
  const bool evidential = is_evidential(model.objective);
  if (method == Method::kUios && !evidential) {
    throw UsageError("method uios needs a model trained with objective un or tun, got " +
                     std::string(to_string(model.objective)));
  }
  if (method != Method::kUios && evidential) {
    throw UsageError("method " + std::string(to_string(method)) +
                     " needs a model trained with objective standard_ce, got " +
                     std::string(to_string(model.objective)));
  }
}

std::vector<std::size_t> uncertainty_histogram(const std::vector<double>& u, std::size_t bins) {
  if (bins == 0) throw UsageError("histogram needs at least one bin");
  std::vector<std::size_t> hist(bins, 0);
  for (double v : u) {
    const double c = std::clamp(v, 0.0, 1.0);
    auto b = static_cast<std::size_t>(c * static_cast<double>(bins));
    hist[std::min(b, bins - 1)] += 1;
  }
  return hist;
}

json cmd_gen_data(const GenDataOptions& opts, std::ostream& out) {
  BlobSpec spec;
  spec.classes = opts.classes;
  spec.dim = opts.dim;
  spec.n_per_class = opts.n_per_class;
  spec.radius = opts.radius;
  spec.sigma = opts.sigma;
  spec.seed = opts.seed;
  if (opts.n_ood == 0) throw UsageError("n-ood must be >= 1");

  const Dataset blobs = gen_blobs(spec);
  SplitSpec split_spec;
  split_spec.seed = derive_seed(opts.seed, 1);
  const DataSplit split = split_622(blobs, split_spec);
  const OodParams ood{spec.resolved_centers(), spec.sigma};

  std::vector<std::pair<std::string, Dataset>> files;
  files.emplace_back("train.csv", split.train);
  files.emplace_back("val.csv", split.val);
  files.emplace_back("test.csv", split.test);
  files.emplace_back("ood_far_cluster.csv", gen_ood(OodKind::kFarCluster, opts.n_ood, ood, derive_seed(opts.seed, 2)));
  files.emplace_back("ood_ring.csv", gen_ood(OodKind::kRing, opts.n_ood, ood, derive_seed(opts.seed, 3)));
  if (opts.uniform_box) {
    files.emplace_back("ood_uniform_box.csv",
                       gen_ood(OodKind::kUniformBox, opts.n_ood, ood, derive_seed(opts.seed, 4)));
  }
  if (opts.unseen) {
    BlobSpec wide = spec;
    wide.sigma = opts.unseen_sigma;
    wide.n_per_class = std::max<std::size_t>(1, opts.n_per_class / 5);
    wide.seed = derive_seed(opts.seed, 5);
    files.emplace_back("test_unseen.csv", gen_blobs(wide));
  }

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) throw DataError("cannot create " + opts.out_dir.string() + ": " + ec.message());

  json entries = json::array();
  for (const auto& [name, ds] : files) {
    write_csv(ds, opts.out_dir / name);
    entries.push_back({{"file", name}, {"rows", ds.size()}, {"fingerprint", dataset_fingerprint(ds)}});
    out << "wrote " << (opts.out_dir / name).string() << " (" << ds.size() << " rows)\n";
  }
  json manifest = {{"format", "uios-manifest"},
                   {"format_version", kReportFormatVersion},
                   {"seed", opts.seed},
                   {"classes", opts.classes},
                   {"dim", opts.dim},
                   {"n_per_class", opts.n_per_class},
                   {"radius", opts.radius},
                   {"sigma", opts.sigma},
                   {"n_ood", opts.n_ood},
                   {"split", {0.6, 0.2, 0.2}},
                   {"files", entries}};
  if (opts.unseen) manifest["unseen_sigma"] = opts.unseen_sigma;
  write_json(manifest, opts.out_dir / "manifest.json");
  out << "wrote " << (opts.out_dir / "manifest.json").string() << "\n";
  return manifest;
}

json cmd_train(const TrainOptions& opts, std::ostream& out) {
  opts.config.validate();
  const Dataset train_set = load_csv(opts.train_csv);
  for (std::size_t r = 0; r < train_set.size(); ++r) {
    if (train_set.labels[r] == kOodLabel) {
      throw DataError(opts.train_csv.string() + ": row " + std::to_string(r + 1) +
                      " is labelled ood; training data must be labelled");
    }
  }
  if (train_set.classes < 2) throw DataError(opts.train_csv.string() + ": need at least 2 classes");
  std::optional<Dataset> val;
  if (opts.val_csv) {
    val = load_csv(*opts.val_csv);
    if (val->dim() != train_set.dim()) {
      throw DataError(opts.val_csv->string() + ": " + std::to_string(val->dim()) +
                      " feature columns, training data has " + std::to_string(train_set.dim()));
    }
    for (std::size_t r = 0; r < val->size(); ++r) {
      const int y = val->labels[r];
      if (y < 0 || static_cast<std::size_t>(y) >= train_set.classes) {
        throw DataError(opts.val_csv->string() + ": row " + std::to_string(r + 1) +
                        " has a label outside the training classes");
      }
    }
  }

  TrainResult result = train(train_set, val ? &*val : nullptr, opts.config);

  Checkpoint ckpt;
  ckpt.model = std::move(result.model);
  ckpt.train_config = opts.config;
  ckpt.dataset_fingerprint = dataset_fingerprint(train_set);
  save_checkpoint(ckpt, opts.out);

  const fs::path log_path = opts.log ? *opts.log : fs::path(opts.out.string() + ".log.jsonl");
  {
    std::ofstream log(log_path, std::ios::binary);
    if (!log) throw DataError("cannot write " + log_path.string());
    for (const auto& e : result.log) {
      json line = {{"epoch", e.epoch}, {"loss", e.loss}, {"lambda", e.lambda}, {"tau", e.tau},
                   {"val_accuracy", e.val_accuracy ? json(*e.val_accuracy) : json(nullptr)}};
      log << line.dump() << '\n';
    }
  }

  const double train_acc = accuracy(ckpt.model, train_set);
  const std::optional<double> val_acc = val ? std::optional(accuracy(ckpt.model, *val)) : std::nullopt;
  out << "objective " << to_string(opts.config.objective) << ", " << opts.config.epochs << " epochs\n";
  if (!result.log.empty()) out << "final loss " << Fixed(result.log.back().loss, 6) << "\n";
  out << "train accuracy " << Fixed(train_acc) << "\n";
  if (val_acc) out << "val accuracy " << Fixed(*val_acc) << "\n";
  out << "wrote " << opts.out.string() << " and " << log_path.string() << "\n";

  json summary = Envelope("train");
  summary["dataset"] = DatasetEntry(opts.train_csv, train_set);
  summary["checkpoint"] = opts.out.generic_string();
  summary["log"] = log_path.generic_string();
  summary["objective"] = to_string(opts.config.objective);
  summary["epochs"] = opts.config.epochs;
  summary["final_loss"] = result.log.empty() ? json(nullptr) : json(result.log.back().loss);
  summary["train_accuracy"] = train_acc;
  summary["val_accuracy"] = val_acc ? json(*val_acc) : json(nullptr);
  return summary;
}

json cmd_calibrate(const CalibrateOptions& opts, std::ostream& out) {
  Checkpoint ckpt = load_checkpoint(opts.checkpoint);
  const Dataset val = LoadFor(opts.val_csv, ckpt.model, true);
  std::vector<std::string> names = opts.methods;
  if (names.empty()) names.emplace_back(to_string(default_method(ckpt.model)));

  json calibrations = json::object();
  for (const auto& name : names) {
    const Method method = ResolveMethod(name, ckpt.model);
    const auto scored = score(method, ckpt.model, val.features, opts.scorer);
    const auto records = to_records(scored, val);
    StoredCalibration stored{calibrate(records, opts.tpr_weight), opts.scorer};
    const auto& cal = stored.calibration;
    out << to_string(method) << ": theta " << Fixed(cal.theta, 6) << "  TPR " << Fixed(cal.tpr_at_theta())
        << "  FPR " << Fixed(cal.fpr_at_theta()) << "  objective " << Fixed(cal.objective_at_theta())
        << "\n";
    json entry = calibration_to_json(cal);
    entry["scorer"] = {{"passes", opts.scorer.passes},
                       {"dropout_rate", opts.scorer.dropout_rate},
                       {"jitter_sigma", opts.scorer.jitter_sigma},
                       {"seed", opts.scorer.seed}};
    calibrations[std::string(to_string(method))] = entry;
    ckpt.calibrations[std::string(to_string(method))] = std::move(stored);
  }
  const fs::path target = opts.out ? *opts.out : opts.checkpoint;
  save_checkpoint(ckpt, target);
  out << "wrote " << target.string() << "\n";

  json report = Envelope("calibrate");
  report["dataset"] = DatasetEntry(opts.val_csv, val);
  report["checkpoint"] = target.generic_string();
  report["calibrations"] = calibrations;
  return report;
}

json cmd_eval(const EvalOptions& opts, std::ostream& out) {
  const Checkpoint ckpt = load_checkpoint(opts.checkpoint);
  const Method method = ResolveMethod(opts.method, ckpt.model);
  const StoredCalibration* stored = FindCalibration(ckpt, method);
  if (opts.thresholded && stored == nullptr) {
    throw UsageError("--thresholded needs a calibrated checkpoint; run calibrate --method " +
                     std::string(to_string(method)) + " first");
  }
  const Dataset test = LoadFor(opts.test_csv, ckpt.model, true);
  const ScorerParams scorer = stored ? stored->scorer : ScorerParams{};
  const auto records = to_records(score(method, ckpt.model, test.features, scorer), test);
  const std::size_t k = ckpt.model.classes();

  const MetricReport full = full_report(records, k);
  out << "method " << to_string(method) << " on " << opts.test_csv.string() << "\n";
  PrintBlock(out, "unthresholded", full);

  json report = Envelope("eval");
  report["method"] = to_string(method);
  report["dataset"] = DatasetEntry(opts.test_csv, test);
  report["theta"] = stored ? json(stored->calibration.theta) : json(nullptr);
  report["unthresholded"] = metric_report_to_json(full);
  report["thresholded"] = nullptr;
  if (opts.thresholded) {
    const double theta = stored->calibration.theta;
    const MetricReport kept = thresholded_report(records, k, theta);
    out << "theta " << Fixed(theta, 6) << "\n";
    PrintBlock(out, "thresholded", kept);
    report["thresholded"] = metric_report_to_json(kept);
  }
  if (opts.out) {
    write_json(report, *opts.out);
    out << "wrote " << opts.out->string() << "\n";
  }
  return report;
}

json cmd_ood_eval(const OodEvalOptions& opts, std::ostream& out) {
  if (opts.ood_csvs.empty()) throw UsageError("ood-eval needs at least one --ood file");
  const Checkpoint ckpt = load_checkpoint(opts.checkpoint);
  const Method method = ResolveMethod(opts.method, ckpt.model);
  const StoredCalibration* stored = FindCalibration(ckpt, method);
  if (stored == nullptr) {
    throw UsageError("ood-eval needs a calibrated checkpoint; run calibrate --method " +
                     std::string(to_string(method)) + " first");
  }
  const double theta = stored->calibration.theta;
  out << "method " << to_string(method) << ", theta " << Fixed(theta, 6) << "\n";

  auto describe = [&](const fs::path& path, bool labelled) {
    const Dataset ds = LoadFor(path, ckpt.model, labelled);
    if (ds.size() == 0) throw DataError(path.string() + ": no samples");
    const auto u = Uncertainties(score(method, ckpt.model, ds.features, stored->scorer));
    const double rate = ood_detection_rate(u, theta);
    const auto hist = uncertainty_histogram(u, opts.bins);
    out << path.string() << ": n=" << ds.size() << " flagged " << Fixed(rate) << " mean u "
        << Fixed(Mean(u)) << "\n";
    PrintHistogram(out, hist);
    return json{{"path", path.generic_string()},
                {"rows", ds.size()},
                {"fingerprint", dataset_fingerprint(ds)},
                {"detection_rate", rate},
                {"mean_uncertainty", Mean(u)},
                {"histogram", hist}};
  };

  json report = Envelope("ood-eval");
  report["method"] = to_string(method);
  report["theta"] = theta;
  report["bins"] = opts.bins;
  report["reference"] = opts.id_csv ? describe(*opts.id_csv, true) : json(nullptr);
  json files = json::array();
  for (const auto& path : opts.ood_csvs) files.push_back(describe(path, false));
  report["ood"] = files;
  if (opts.out) {
    write_json(report, *opts.out);
    out << "wrote " << opts.out->string() << "\n";
  }
  return report;
}

json cmd_compare(const CompareOptions& opts, std::ostream& out) {
  if (opts.methods.empty()) throw UsageError("compare needs at least one method");
  std::optional<Checkpoint> evidential, baseline;
  if (opts.checkpoint) evidential = load_checkpoint(*opts.checkpoint);
  if (opts.baseline_checkpoint) baseline = load_checkpoint(*opts.baseline_checkpoint);

  std::vector<Method> methods;
  std::vector<std::string> missing;
  for (const auto& name : opts.methods) {
    const Method m = parse_method(name);
    methods.push_back(m);
    const bool is_uios = m == Method::kUios;
    const auto& ckpt = is_uios ? evidential : baseline;
    const char* flag = is_uios ? "--checkpoint" : "--baseline-checkpoint";
    if (!ckpt) {
      missing.push_back(name + " (no " + flag + " given)");
      continue;
    }
    check_method_compatible(m, ckpt->model);
    if (FindCalibration(*ckpt, m) == nullptr) {
      missing.push_back(name + " (" + flag + " has no calibration for it)");
    }
  }
  if (!missing.empty()) {
    std::string msg = "compare: missing artifacts:";
    for (const auto& m : missing) msg += " " + m + ";";
    msg.pop_back();
    throw DataError(msg);
  }

  std::optional<Dataset> test;
  std::vector<Dataset> ood;
  json rows = json::array();
  out << "method     theta     F1        F1@theta  AUC       referral  OOD rate  passes  ms/sample\n";
  for (const Method m : methods) {
    const Checkpoint& ckpt = m == Method::kUios ? *evidential : *baseline;
    if (!test) {
      test = LoadFor(opts.test_csv, ckpt.model, true);
      for (const auto& p : opts.ood_csvs) {
        ood.push_back(LoadFor(p, ckpt.model, false));
        if (ood.back().size() == 0) throw DataError(p.string() + ": no samples");
      }
    } else if (test->dim() != ckpt.model.config.input_dim) {
      throw DataError("compare: checkpoints disagree on the input dimension");
    }
    const StoredCalibration& stored = *FindCalibration(ckpt, m);
    const double theta = stored.calibration.theta;
    const std::size_t k = ckpt.model.classes();

    const auto start = std::chrono::steady_clock::now();
    const auto scored = score(m, ckpt.model, test->features, stored.scorer);
    const auto stop = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(stop - start).count() /
                      static_cast<double>(std::max<std::size_t>(1, test->size()));

    const auto records = to_records(scored, *test);
    const MetricReport full = full_report(records, k);
    const MetricReport kept = thresholded_report(records, k, theta);
    json ood_rates = json::object();
    std::vector<double> rates;
    for (std::size_t i = 0; i < ood.size(); ++i) {
      const auto u = Uncertainties(score(m, ckpt.model, ood[i].features, stored.scorer));
      rates.push_back(ood_detection_rate(u, theta));
      ood_rates[opts.ood_csvs[i].generic_string()] = rates.back();
    }
    const std::size_t passes = forward_passes_per_sample(m, ckpt.model, stored.scorer);

    json row = {{"method", to_string(m)},
                {"theta", theta},
                {"macro_f1", full.metrics.macro_f1},
                {"macro_f1_thresholded", kept.available ? json(kept.metrics.macro_f1) : json(nullptr)},
                {"macro_auc", full.auc.macro ? json(*full.auc.macro) : json(nullptr)},
                {"referral_rate", kept.referral_rate},
                {"ood_rate", rates.empty() ? json(nullptr) : json(Mean(rates))},
                {"ood_rates", ood_rates},
                {"forward_passes_per_sample", passes}};
    if (opts.timing) row["ms_per_sample"] = ms;
    rows.push_back(row);

    std::string name(to_string(m));
    name.resize(std::max<std::size_t>(name.size(), 10), ' ');
    out << name << " " << Fixed(theta) << "    " << Fixed(full.metrics.macro_f1) << "    "
        << (kept.available ? Fixed(kept.metrics.macro_f1) : std::string("   n/a")) << "    "
        << (full.auc.macro ? Fixed(*full.auc.macro) : std::string("   n/a")) << "    "
        << Fixed(kept.referral_rate) << "    " << (rates.empty() ? std::string("   n/a") : Fixed(Mean(rates)))
        << "    " << Padded(std::to_string(passes), 6) << "  " << Fixed(ms, 5) << "\n";
  }

  json report = Envelope("compare");
  report["test"] = DatasetEntry(opts.test_csv, *test);
  report["timing"] = opts.timing;
  report["rows"] = rows;
  if (opts.out) {
    write_json(report, *opts.out);
    out << "wrote " << opts.out->string() << "\n";
  }
  return report;
}

void validate_report(const json& report) {
  if (!report.is_object() || !report.contains("command")) throw DataError("report: missing command");
  if (report.value("format", "") != "uios-report") throw DataError("report: wrong format tag");
  if (report.value("format_version", 0) != kReportFormatVersion) {
    throw DataError("report: unsupported format_version");
  }
  const std::string command = report.at("command").get<std::string>();
  if (command == "eval") {
    ExpectKeys(report, {"format", "format_version", "command", "method", "dataset", "theta", "unthresholded", "thresholded"},
               "eval report");
    ValidateDataset(report.at("dataset"), "eval report.dataset");
    ValidateMetricBlock(report.at("unthresholded"), "eval report.unthresholded");
    if (!report.at("thresholded").is_null()) {
      ValidateMetricBlock(report.at("thresholded"), "eval report.thresholded");
    }
  } else if (command == "ood-eval") {
    ExpectKeys(report, {"format", "format_version", "command", "method", "theta", "bins", "reference", "ood"},
               "ood-eval report");
    auto check = [](const json& entry) {
      ExpectKeys(entry, {"path", "rows", "fingerprint", "detection_rate", "mean_uncertainty", "histogram"},
                 "ood-eval report entry");
    };
    if (!report.at("reference").is_null()) check(report.at("reference"));
    for (const auto& entry : report.at("ood")) check(entry);
  } else if (command == "compare") {
    ExpectKeys(report, {"format", "format_version", "command", "test", "timing", "rows"}, "compare report");
    ValidateDataset(report.at("test"), "compare report.test");
    const bool timing = report.at("timing").get<bool>();
    for (const auto& row : report.at("rows")) {
      if (timing) {
        ExpectKeys(row, {"method", "theta", "macro_f1", "macro_f1_thresholded", "macro_auc", "referral_rate",
                         "ood_rate", "ood_rates", "forward_passes_per_sample", "ms_per_sample"},
                   "compare report row");
      } else {
        ExpectKeys(row, {"method", "theta", "macro_f1", "macro_f1_thresholded", "macro_auc", "referral_rate",
                         "ood_rate", "ood_rates", "forward_passes_per_sample"},
                   "compare report row");
      }
    }
  } else if (command == "calibrate") {
    ExpectKeys(report, {"format", "format_version", "command", "dataset", "checkpoint", "calibrations"},
               "calibrate report");
    ValidateDataset(report.at("dataset"), "calibrate report.dataset");
  } else if (command == "train") {
    ExpectKeys(report, {"format", "format_version", "command", "dataset", "checkpoint", "log", "objective", "epochs",
                        "final_loss", "train_accuracy", "val_accuracy"},
               "train report");
    ValidateDataset(report.at("dataset"), "train report.dataset");
  } else {
    throw DataError("report: unknown command '" + command + "'");
  }
}

}  // namespace uios
