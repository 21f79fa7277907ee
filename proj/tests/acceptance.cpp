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

// Acceptance suite: one PASS/FAIL line per check, non-zero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "uios/backbone.hpp"
#include "uios/baselines.hpp"
#include "uios/calibration.hpp"
#include "uios/commands.hpp"
#include "uios/datagen.hpp"
#include "uios/evidential.hpp"
#include "uios/losses.hpp"
#include "uios/metrics.hpp"
#include "uios/numerics.hpp"
#include "uios/random.hpp"
#include "uios/serialization.hpp"

namespace fs = std::filesystem;
using namespace uios;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;

void Report(const std::string& id, const std::string& title, const Outcome& o) {
  std::printf("[%s] %-4s %s: %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

void Run(const std::string& id, const std::string& title, const std::function<Outcome()>& body) {
  try {
    Report(id, title, body());
  } catch (const std::exception& e) {
    Report(id, title, {false, std::string("exception: ") + e.what()});
  }
}

std::string Fmt(const char* fmt, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome AlgebraicIdentities() {
  const auto start = Clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t k = 2 + rng.index(15);
    std::vector<double> f(k);
    for (double& v : f) v = rng.normal(0.0, 5.0);
    const auto op = opinion_from_features(f);
    double sum = op.uncertainty;
    for (std::size_t j = 0; j < k; ++j) {
      sum += op.beliefs[j];
      worst = std::max(worst, std::abs(op.probs[j] - (op.beliefs[j] + op.uncertainty / static_cast<double>(k))));
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  const double secs = Seconds(start);
  return {worst <= 1e-9 && secs < 1.0, Fmt("max deviation %.2e (<= 1e-9), %.3f s (< 1 s)", worst, secs)};
}

Outcome SpecialFunctions() {
  Rng rng(1002);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(0.1, 50.0);
    worst = std::max(worst, std::abs(numerics::digamma(x + 1) - numerics::digamma(x) - 1.0 / x));
    worst = std::max(worst, std::abs(numerics::trigamma(x) - numerics::trigamma(x + 1) - 1.0 / (x * x)));
    worst = std::max(worst, std::abs(numerics::log_gamma(x + 1) - numerics::log_gamma(x) - std::log(x)));
  }
  const double psi1 = std::abs(numerics::digamma(1.0) - (-0.5772156649));
  return {worst <= 1e-10 && psi1 <= 1e-9,
          Fmt("max recurrence error %.2e (<= 1e-10), |psi(1) + 0.5772156649| = %.2e (<= 1e-9)", worst, psi1)};
}

Outcome Gradients() {
  const auto start = Clock::now();
  const std::vector<int> labels{0, 1, 2, 3, 1, 0, 2, 3};
  double worst = 0.0;
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    MlpConfig cfg{.input_dim = 4, .hidden_dims = {8, 6}, .output_dim = 4, .seed = seed};
    const MlpParams params = init_params(cfg);
    Rng rng(seed * 7);
    Matrix batch(labels.size(), 4);
    for (double& v : batch.data()) v = rng.normal(0.0, 1.5);
    for (LossKind kind : {LossKind::kCe, LossKind::kUnce, LossKind::kKl, LossKind::kTce, LossKind::kTun}) {
      const ScheduleState schedule = ScheduleState::at(5, 10);
      auto loss = [&](const Matrix& out) { return batch_loss(kind, out, labels, schedule); };
      worst = std::max(worst, finite_diff_check(params, batch, loss, 1e-5));
    }
  }
  const double secs = Seconds(start);
  return {worst < 1e-4 && secs < 30.0, Fmt("max relative error %.2e (< 1e-4), %.2f s (< 30 s)", worst, secs)};
}

Outcome LossFixedPoints() {
  double kl = 0.0;
  for (std::size_t k = 2; k <= 16; ++k) {
    kl = std::max(kl, std::abs(kl_loss(dirichlet_from_alpha(std::vector<double>(k, 1.0)))));
  }
  const double unce = unce_loss(dirichlet_from_alpha({1.0, 1.0}), OneHotLabel(0, 2));
  Rng rng(1004);
  double min_unce = 1e300;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t k = 2 + rng.index(15);
    std::vector<double> a(k);
    for (double& v : a) v = 1.0 + numerics::softplus(rng.normal(0.0, 4.0));
    min_unce = std::min(min_unce, unce_loss(dirichlet_from_alpha(std::move(a)), OneHotLabel(rng.index(k), k)));
  }
  const bool ok = kl <= 1e-12 && std::abs(unce - 1.0) <= 1e-10 && min_unce >= 0.0;
  return {ok, Fmt("|KL(1)| = %.1e, UNCE([1,1]) - 1 = %.1e, min UNCE over 1e4 = %.3e", kl, unce - 1.0, min_unce)};
}

Outcome CalibrationOracle() {
  Rng rng(1005);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.index(49);
    std::vector<double> u(n);
    std::vector<int> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = static_cast<double>(rng.index(20)) / 19.0;
      w[i] = rng.uniform() < 0.35 ? 1 : 0;
    }
    w[0] = 1;
    w[1] = 0;
    std::set<double> cands(u.begin(), u.end());
    cands.insert(std::nextafter(*cands.rbegin(), 2.0));
    long long n_pos = std::count(w.begin(), w.end(), 1);
    long long n_neg = static_cast<long long>(n) - n_pos;
    double best_theta = 0.0;
    long long best = 0;
    bool first = true;
    for (double t : cands) {
      long long tp = 0, fp = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (u[i] >= t) (w[i] ? tp : fp) += 1;
      }
      const long long obj = 2 * tp * n_neg - fp * n_pos;
      if (first || obj >= best) {
        best = obj;
        best_theta = t;
      }
      first = false;
    }
    if (select_threshold(roc_sweep(u, w)).theta != best_theta) ++mismatches;
  }
  const auto crafted = select_threshold(
      roc_sweep(std::vector<double>{0.1, 0.2, 0.6, 0.8}, std::vector<int>{0, 0, 1, 1}));
  const bool ok = mismatches == 0 && crafted.theta == 0.6 && crafted.objective_at_theta() == 2.0;
  return {ok, Fmt("%.0f/1000 brute-force mismatches, crafted case theta = %.3g, objective = %.3g", mismatches,
                  crafted.theta, crafted.objective_at_theta())};
}

struct Bench {
  fs::path dir;
  fs::path Data(const std::string& f) const { return dir / "data" / f; }
};

fs::path TrainArm(const Bench& b, Objective obj, const std::string& name, double dropout = 0.0) {
  TrainOptions tr;
  tr.train_csv = b.Data("train.csv");
  tr.val_csv = b.Data("val.csv");
  tr.out = b.dir / name;
  tr.config.objective = obj;
  tr.config.dropout_rate = dropout;
  std::ostringstream sink;
  cmd_train(tr, sink);
  return tr.out;
}

double WrongPredictionAuroc(const fs::path& ckpt_path, const fs::path& csv) {
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const Dataset ds = load_csv(csv);
  const auto recs = to_records(uios_predict(ckpt.model, ds.features), ds);
  std::vector<double> u;
  for (const auto& r : recs) u.push_back(r.uncertainty);
  const auto auc = binary_auc(u, wrong_labels(recs));
  return auc ? *auc : 0.0;
}

}  // namespace

int main() {
  std::printf("uios acceptance suite\n");
  Run("1", "algebraic identities", AlgebraicIdentities);
  Run("2", "special functions", SpecialFunctions);
  Run("3", "analytic gradients vs finite differences", Gradients);
  Run("4", "loss fixed points", LossFixedPoints);
  Run("5", "threshold selection oracle", CalibrationOracle);

  Bench bench{fs::temp_directory_path() / "uios_acceptance"};
  fs::remove_all(bench.dir);
  std::ostringstream sink;

  // Benchmark: default data, tun objective, default training config.
  const auto bench_start = Clock::now();
  fs::path tun, un, ce;
  nlohmann::json eval_report, ood_report;
  double val_auroc = 0.0;
  bool bench_ok = false;
  try {
    GenDataOptions gen;
    gen.out_dir = bench.dir / "data";
    cmd_gen_data(gen, sink);
    tun = TrainArm(bench, Objective::kTun, "tun.json");
    CalibrateOptions cal;
    cal.checkpoint = tun;
    cal.val_csv = bench.Data("val.csv");
    cmd_calibrate(cal, sink);
    EvalOptions ev;
    ev.checkpoint = tun;
    ev.test_csv = bench.Data("test.csv");
    ev.thresholded = true;
    eval_report = cmd_eval(ev, sink);
    OodEvalOptions oe;
    oe.checkpoint = tun;
    oe.ood_csvs = {bench.Data("ood_far_cluster.csv"), bench.Data("ood_ring.csv")};
    oe.id_csv = bench.Data("test.csv");
    ood_report = cmd_ood_eval(oe, sink);
    val_auroc = WrongPredictionAuroc(tun, bench.Data("val.csv"));
    bench_ok = true;
  } catch (const std::exception& e) {
    Report("6", "synthetic benchmark", {false, std::string("exception: ") + e.what()});
  }
  const double bench_secs = Seconds(bench_start);

  if (bench_ok) {
    const double acc = eval_report["unthresholded"]["accuracy"].get<double>();
    const double f1_full = eval_report["unthresholded"]["macro"]["f1"].get<double>();
    const bool kept_available = eval_report["thresholded"]["available"].get<bool>();
    const double f1_kept = kept_available ? eval_report["thresholded"]["macro"]["f1"].get<double>() : 0.0;
    const double far = ood_report["ood"][0]["detection_rate"].get<double>();
    const double ring = ood_report["ood"][1]["detection_rate"].get<double>();
    const double u_far = ood_report["ood"][0]["mean_uncertainty"].get<double>();
    const double u_ring = ood_report["ood"][1]["mean_uncertainty"].get<double>();
    const double u_id = ood_report["reference"]["mean_uncertainty"].get<double>();
    Report("6a", "benchmark test accuracy", {acc >= 0.85, Fmt("%.4f (>= 0.85)", acc)});
    Report("6b", "AUROC of u for wrong predictions on validation",
           {val_auroc >= 0.70, Fmt("%.4f (>= 0.70)", val_auroc)});
    Report("6c", "thresholded macro-F1 vs unthresholded",
           {kept_available && f1_kept >= f1_full, Fmt("%.4f vs %.4f (theta %.4f)", f1_kept, f1_full,
                                                      eval_report["theta"].get<double>())});
    Report("6d", "OOD detection at calibrated theta",
           {far >= 0.90 && ring >= 0.80, Fmt("far_cluster %.4f (>= 0.90), ring %.4f (>= 0.80)", far, ring)});
    Report("6e", "mean u on OOD above mean u on ID test",
           {u_far > u_id && u_ring > u_id,
            Fmt("far_cluster %.4f, ring %.4f, ID test %.4f", u_far, u_ring, u_id)});
    Report("6t", "benchmark runtime", {bench_secs < 120.0, Fmt("%.1f s (< 120 s)", bench_secs)});
  }

  // Ablation arms.
  Run("7", "ablation: tun vs un vs standard_ce", [&]() -> Outcome {
    if (!bench_ok) return {false, "benchmark unavailable"};
    un = TrainArm(bench, Objective::kUn, "un.json");
    ce = TrainArm(bench, Objective::kStandardCe, "ce.json", 0.1);
    const double auroc_un = WrongPredictionAuroc(un, bench.Data("val.csv"));
    const Dataset test = load_csv(bench.Data("test.csv"));
    const double acc_tun = accuracy(load_checkpoint(tun).model, test);
    const double acc_un = accuracy(load_checkpoint(un).model, test);
    const double acc_ce = accuracy(load_checkpoint(ce).model, test);
    const bool ok = val_auroc >= auroc_un && acc_tun >= 0.85 && acc_un >= 0.85;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "AUROC tun %.4f >= un %.4f; accuracy tun %.4f, un %.4f, standard_ce %.4f (>= 0.85)", val_auroc,
                  auroc_un, acc_tun, acc_un, acc_ce);
    return {ok, buf};
  });

  // Baselines on the standard_ce arm.
  nlohmann::json compare_report;
  Run("8", "baseline parity", [&]() -> Outcome {
    if (ce.empty()) return {false, "standard_ce arm unavailable"};
    CalibrateOptions cal;
    cal.checkpoint = ce;
    cal.val_csv = bench.Data("val.csv");
    cal.methods = {"entropy", "mc_drop", "ensemble", "tta"};
    cmd_calibrate(cal, sink);
    const Checkpoint base = load_checkpoint(ce);
    const Dataset test = load_csv(bench.Data("test.csv"));
    bool in_range = true;
    for (const auto& name : cal.methods) {
      const Method m = parse_method(name);
      for (const auto& s : score(m, base.model, test.features, base.calibrations.at(name).scorer)) {
        in_range &= s.uncertainty >= 0.0 && s.uncertainty <= 1.0;
      }
    }
    CompareOptions cmp;
    cmp.checkpoint = tun;
    cmp.baseline_checkpoint = ce;
    cmp.test_csv = bench.Data("test.csv");
    cmp.ood_csvs = {bench.Data("ood_far_cluster.csv"), bench.Data("ood_ring.csv")};
    cmp.timing = true;
    compare_report = cmd_compare(cmp, sink);
    std::set<std::string> listed;
    double ms_uios = 0.0, ms_mc = 0.0;
    for (const auto& row : compare_report["rows"]) {
      listed.insert(row["method"].get<std::string>());
      if (row["method"] == "uios") ms_uios = row["ms_per_sample"].get<double>();
      if (row["method"] == "mc_drop") ms_mc = row["ms_per_sample"].get<double>();
    }
    const bool all_listed = listed.size() == 5;
    const bool ok = in_range && all_listed && ms_uios < ms_mc;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "u in [0,1]: %s, %zu methods compared, ms/sample uios %.5f < mc_drop(T=10) %.5f",
                  in_range ? "yes" : "no", listed.size(), ms_uios, ms_mc);
    return {ok, buf};
  });

  // Determinism: run every command twice and compare bytes.
  Run("9", "byte-identical reruns", [&]() -> Outcome {
    std::vector<std::string> diffs;
    auto same = [&](const fs::path& a, const fs::path& b) {
      if (Slurp(a).empty() || Slurp(a) != Slurp(b)) diffs.push_back(a.filename().string());
    };
    // Same paths both times; each run's outputs are moved aside afterwards.
    const fs::path d = bench.dir / "det";
    const fs::path d1 = bench.dir / "run1", d2 = bench.dir / "run2";
    for (const fs::path& keep : {d1, d2}) {
      GenDataOptions gen;
      gen.out_dir = d / "data";
      cmd_gen_data(gen, sink);
      TrainOptions tr;
      tr.train_csv = d / "data" / "train.csv";
      tr.val_csv = d / "data" / "val.csv";
      tr.out = d / "tun.json";
      cmd_train(tr, sink);
      tr.out = d / "ce.json";
      tr.config.objective = Objective::kStandardCe;
      tr.config.dropout_rate = 0.1;
      cmd_train(tr, sink);
      CalibrateOptions cal;
      cal.checkpoint = d / "tun.json";
      cal.val_csv = d / "data" / "val.csv";
      cmd_calibrate(cal, sink);
      cal.checkpoint = d / "ce.json";
      cal.methods = {"entropy", "mc_drop", "ensemble", "tta"};
      cmd_calibrate(cal, sink);
      EvalOptions ev;
      ev.checkpoint = d / "tun.json";
      ev.test_csv = d / "data" / "test.csv";
      ev.thresholded = true;
      ev.out = d / "eval.json";
      cmd_eval(ev, sink);
      OodEvalOptions oe;
      oe.checkpoint = d / "tun.json";
      oe.ood_csvs = {d / "data" / "ood_far_cluster.csv", d / "data" / "ood_ring.csv"};
      oe.out = d / "ood.json";
      cmd_ood_eval(oe, sink);
      CompareOptions cmp;
      cmp.checkpoint = d / "tun.json";
      cmp.baseline_checkpoint = d / "ce.json";
      cmp.test_csv = d / "data" / "test.csv";
      cmp.ood_csvs = oe.ood_csvs;
      cmp.out = d / "compare.json";
      cmd_compare(cmp, sink);
      fs::rename(d, keep);
    }
    for (const char* f : {"train.csv", "val.csv", "test.csv", "ood_far_cluster.csv", "ood_ring.csv", "manifest.json"}) {
      same(d1 / "data" / f, d2 / "data" / f);
    }
    for (const char* f : {"tun.json", "tun.json.log.jsonl", "ce.json", "eval.json", "ood.json", "compare.json"}) {
      same(d1 / f, d2 / f);
    }
    std::string detail = "12 artifacts compared";
    for (const auto& d : diffs) detail += ", differs: " + d;
    return {diffs.empty(), detail};
  });

  fs::remove_all(bench.dir);
  std::printf("%d checks failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
