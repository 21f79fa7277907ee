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

// uios: synthetic open-set workbench.
//
//   uios gen-data  --out-dir data
//   uios train     --train data/train.csv --val data/val.csv --out model.json
//   uios calibrate --checkpoint model.json --val data/val.csv
//   uios eval      --checkpoint model.json --test data/test.csv --thresholded
//   uios ood-eval  --checkpoint model.json --ood data/ood_ring.csv
//   uios compare   --checkpoint model.json --baseline-checkpoint ce.json --test data/test.csv
//
// Every subcommand also accepts --config FILE holding key=value lines, where
// keys are long flag names. Flags given on the command line win.
//
// Exit codes: 0 ok, 2 usage, 3 data, 4 numeric.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uios/commands.hpp"
#include "uios/errors.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splices `--key=value` tokens from the config file in right after the
// subcommand name, skipping keys already given on the command line.
std::vector<std::string> ExpandConfig(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty() || args.empty()) return args;

  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::ifstream in(config_path);
  if (!in) throw uios::DataError("cannot read config file " + config_path);
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw uios::UsageError(config_path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = Trim(t.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty() || key == "config") {
      throw uios::UsageError(config_path + ":" + std::to_string(lineno) + ": invalid key");
    }
    if (given.contains(key)) continue;
    extra.push_back("--" + key + "=" + Trim(t.substr(eq + 1)));
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

void AddScorerFlags(CLI::App* cmd, uios::ScorerParams& scorer) {
  cmd->add_option("--passes", scorer.passes, "Stochastic passes for mc_drop and tta")->capture_default_str();
  cmd->add_option("--dropout-rate", scorer.dropout_rate,
                  "mc_drop rate at inference (0 uses the model's training rate)")
      ->capture_default_str();
  cmd->add_option("--jitter", scorer.jitter_sigma, "tta input noise sigma")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evidential open-set classification workbench", "uios"};
  app.require_subcommand(1);
  std::string config;

  uios::GenDataOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate the synthetic blob benchmark");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();
  gen_cmd->add_option("--k", gen.classes, "Number of classes")->capture_default_str();
  gen_cmd->add_option("--dim", gen.dim, "Feature dimension")->capture_default_str();
  gen_cmd->add_option("--n-per-class", gen.n_per_class, "Samples per class")->capture_default_str();
  gen_cmd->add_option("--radius", gen.radius, "Radius of the class-centre circle")->capture_default_str();
  gen_cmd->add_option("--sigma", gen.sigma, "Blob standard deviation")->capture_default_str();
  gen_cmd->add_option("--n-ood", gen.n_ood, "Samples per OOD file")->capture_default_str();
  gen_cmd->add_flag("--unseen", gen.unseen, "Also write test_unseen.csv");
  gen_cmd->add_option("--unseen-sigma", gen.unseen_sigma, "Sigma for test_unseen.csv")->capture_default_str();
  gen_cmd->add_flag("--uniform-box", gen.uniform_box, "Also write ood_uniform_box.csv");
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();

  uios::TrainOptions tr;
  std::string objective = "tun";
  std::string val_csv, log_path;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--train", tr.train_csv, "Training CSV")->required();
  train_cmd->add_option("--val", val_csv, "Validation CSV, logged per epoch");
  train_cmd->add_option("--out", tr.out, "Checkpoint path")->capture_default_str();
  train_cmd->add_option("--log", log_path, "Training log (default <out>.log.jsonl)");
  train_cmd->add_option("--objective", objective, "standard_ce, un or tun")->capture_default_str();
  train_cmd->add_option("--epochs", tr.config.epochs, "Epochs")->capture_default_str();
  train_cmd->add_option("--lr", tr.config.learning_rate, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--weight-decay", tr.config.weight_decay, "L2 weight decay")->capture_default_str();
  train_cmd->add_option("--batch-size", tr.config.batch_size, "Mini-batch size")->capture_default_str();
  train_cmd->add_option("--anneal-epochs", tr.config.anneal_epochs, "Epochs to reach lambda = tau = 1")
      ->capture_default_str();
  train_cmd->add_option("--hidden", tr.config.hidden_dims, "Hidden widths, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  train_cmd->add_option("--dropout", tr.config.dropout_rate, "Dropout rate on hidden layers")
      ->capture_default_str();
  train_cmd->add_option("--snapshots", tr.config.snapshot_count, "Snapshot ensemble size")
      ->capture_default_str();
  train_cmd->add_option("--seed", tr.config.seed, "Random seed")->capture_default_str();

  uios::CalibrateOptions cal;
  std::string cal_out;
  auto* cal_cmd = app.add_subcommand("calibrate", "Pick the uncertainty threshold on validation data");
  cal_cmd->add_option("--checkpoint", cal.checkpoint, "Checkpoint to calibrate")->required();
  cal_cmd->add_option("--val", cal.val_csv, "Validation CSV")->required();
  cal_cmd->add_option("--out", cal_out, "Output checkpoint (default: overwrite)");
  cal_cmd->add_option("--method", cal.methods, "Scoring methods, comma separated")->delimiter(',');
  cal_cmd->add_option("--tpr-weight", cal.tpr_weight, "Weight on TPR in the objective")->capture_default_str();
  AddScorerFlags(cal_cmd, cal.scorer);
  cal_cmd->add_option("--seed", cal.scorer.seed, "Seed for stochastic scorers")->capture_default_str();

  uios::EvalOptions ev;
  std::string ev_out;
  auto* eval_cmd = app.add_subcommand("eval", "Classification metrics on a labelled CSV");
  eval_cmd->add_option("--checkpoint", ev.checkpoint, "Checkpoint")->required();
  eval_cmd->add_option("--test", ev.test_csv, "Test CSV")->required();
  eval_cmd->add_option("--method", ev.method, "Scoring method");
  eval_cmd->add_flag("--thresholded", ev.thresholded, "Also report metrics on u < theta");
  eval_cmd->add_option("--out", ev_out, "Report JSON path");
  std::uint64_t unused_seed = uios::kDefaultSeed;
  eval_cmd->add_option("--seed", unused_seed, "Accepted for uniformity; scoring uses the calibrated seed");

  uios::OodEvalOptions oe;
  std::string oe_id, oe_out;
  auto* ood_cmd = app.add_subcommand("ood-eval", "Detection rates on out-of-distribution CSVs");
  ood_cmd->add_option("--checkpoint", oe.checkpoint, "Calibrated checkpoint")->required();
  ood_cmd->add_option("--ood", oe.ood_csvs, "OOD CSVs, comma separated")->required()->delimiter(',');
  ood_cmd->add_option("--id", oe_id, "In-distribution CSV for reference");
  ood_cmd->add_option("--method", oe.method, "Scoring method");
  ood_cmd->add_option("--bins", oe.bins, "Histogram bins")->capture_default_str();
  ood_cmd->add_option("--out", oe_out, "Report JSON path");
  ood_cmd->add_option("--seed", unused_seed, "Accepted for uniformity; scoring uses the calibrated seed");

  uios::CompareOptions cmp;
  std::string cmp_ckpt, cmp_base, cmp_out;
  auto* cmp_cmd = app.add_subcommand("compare", "Side-by-side table across methods");
  cmp_cmd->add_option("--checkpoint", cmp_ckpt, "Calibrated evidential checkpoint (uios)");
  cmp_cmd->add_option("--baseline-checkpoint", cmp_base, "Calibrated standard_ce checkpoint (baselines)");
  cmp_cmd->add_option("--test", cmp.test_csv, "Test CSV")->required();
  cmp_cmd->add_option("--ood", cmp.ood_csvs, "OOD CSVs, comma separated")->delimiter(',');
  cmp_cmd->add_option("--methods", cmp.methods, "Methods, comma separated")->delimiter(',')->capture_default_str();
  cmp_cmd->add_flag("--timing", cmp.timing, "Write measured ms/sample into the report");
  cmp_cmd->add_option("--out", cmp_out, "Report JSON path");
  cmp_cmd->add_option("--seed", unused_seed, "Accepted for uniformity; scoring uses the calibrated seed");

  for (auto* cmd : {gen_cmd, train_cmd, cal_cmd, eval_cmd, ood_cmd, cmp_cmd}) {
    cmd->add_option("--config", config, "key=value file; flags override it");
  }

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = ExpandConfig(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const uios::UsageError& e) {
    std::cerr << "uios: " << e.what() << "\n";
    return kExitUsage;
  } catch (const uios::DataError& e) {
    std::cerr << "uios: " << e.what() << "\n";
    return kExitData;
  }

  try {
    if (*gen_cmd) {
      uios::cmd_gen_data(gen, std::cout);
    } else if (*train_cmd) {
      tr.config.objective = uios::parse_objective(objective);
      if (!val_csv.empty()) tr.val_csv = val_csv;
      if (!log_path.empty()) tr.log = log_path;
      uios::cmd_train(tr, std::cout);
    } else if (*cal_cmd) {
      if (!cal_out.empty()) cal.out = cal_out;
      uios::cmd_calibrate(cal, std::cout);
    } else if (*eval_cmd) {
      if (!ev_out.empty()) ev.out = ev_out;
      uios::cmd_eval(ev, std::cout);
    } else if (*ood_cmd) {
      if (!oe_id.empty()) oe.id_csv = oe_id;
      if (!oe_out.empty()) oe.out = oe_out;
      uios::cmd_ood_eval(oe, std::cout);
    } else if (*cmp_cmd) {
      if (!cmp_ckpt.empty()) cmp.checkpoint = cmp_ckpt;
      if (!cmp_base.empty()) cmp.baseline_checkpoint = cmp_base;
      if (!cmp_out.empty()) cmp.out = cmp_out;
      uios::cmd_compare(cmp, std::cout);
    }
  } catch (const uios::UsageError& e) {
    std::cerr << "uios: " << e.what() << "\n";
    return kExitUsage;
  } catch (const uios::NumericError& e) {
    std::cerr << "uios: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const uios::Error& e) {
    std::cerr << "uios: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "uios: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "uios: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
