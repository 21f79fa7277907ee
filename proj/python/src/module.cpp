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

// Python bindings for the uios core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uios/baselines.hpp"
#include "uios/calibration.hpp"
#include "uios/commands.hpp"
#include "uios/errors.hpp"
#include "uios/evidential.hpp"
#include "uios/losses.hpp"
#include "uios/metrics.hpp"
#include "uios/numerics.hpp"
#include "uios/serialization.hpp"

namespace py = pybind11;
using Path = std::filesystem::path;

namespace {

py::object ToPython(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

py::dict OpinionDict(const uios::SubjectiveOpinion& op) {
  py::dict d;
  d["beliefs"] = op.beliefs;
  d["uncertainty"] = op.uncertainty;
  d["probs"] = op.probs;
  d["predicted_class"] = op.predicted_class;
  return d;
}

uios::Matrix ToMatrix(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  uios::Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw uios::ShapeError("features: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<std::string> DefaultMethods() { return uios::CompareOptions{}.methods; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Evidential Dirichlet classification with uncertainty thresholding";

  auto base = py::register_exception<uios::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<uios::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<uios::ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<uios::DataError>(m, "DataError", base.ptr());
  py::register_exception<uios::NumericError>(m, "NumericError", base.ptr());
  py::register_exception<uios::CalibrationError>(m, "CalibrationError", base.ptr());
  py::register_exception<uios::UsageError>(m, "UsageError", base.ptr());

  // numerics
  m.def("softplus", &uios::numerics::softplus, py::arg("x"));
  m.def("log_gamma", &uios::numerics::log_gamma, py::arg("x"));
  m.def("digamma", &uios::numerics::digamma, py::arg("x"));
  m.def("trigamma", &uios::numerics::trigamma, py::arg("x"));

  // evidential head
  m.def(
      "opinion_from_outputs",
      [](const std::vector<double>& outputs) {
        return OpinionDict(uios::opinion_from_features(outputs));
      },
      py::arg("outputs"), "Belief masses, uncertainty and probabilities from raw network outputs.");
  m.def(
      "opinion_from_alpha",
      [](std::vector<double> alpha) {
        return OpinionDict(uios::opinion_from_alpha(uios::dirichlet_from_alpha(std::move(alpha))));
      },
      py::arg("alpha"));

  // losses
  m.def(
      "schedule_at",
      [](int epoch, int anneal_epochs) {
        const auto s = uios::ScheduleState::at(epoch, anneal_epochs);
        return py::make_tuple(s.lambda, s.tau);
      },
      py::arg("epoch"), py::arg("anneal_epochs") = 10, "(lambda, tau) at the given epoch.");
  m.def(
      "unce_loss",
      [](std::vector<double> alpha, std::size_t label) {
        const auto d = uios::dirichlet_from_alpha(std::move(alpha));
        return uios::unce_loss(d, uios::OneHotLabel(label, d.classes()));
      },
      py::arg("alpha"), py::arg("label"));
  m.def(
      "kl_loss",
      [](std::vector<double> alpha_hat) {
        return uios::kl_loss(uios::dirichlet_from_alpha(std::move(alpha_hat)));
      },
      py::arg("alpha_hat"));
  m.def(
      "tce_loss",
      [](std::vector<double> alpha, std::size_t label, double tau) {
        const auto d = uios::dirichlet_from_alpha(std::move(alpha));
        return uios::tce_loss(uios::opinion_from_alpha(d), uios::OneHotLabel(label, d.classes()),
                              tau);
      },
      py::arg("alpha"), py::arg("label"), py::arg("tau"));
  m.def(
      "tun_loss",
      [](std::vector<double> alpha, std::size_t label, int epoch, int anneal_epochs) {
        const auto d = uios::dirichlet_from_alpha(std::move(alpha));
        return uios::tun_loss(d, uios::opinion_from_alpha(d), uios::OneHotLabel(label, d.classes()),
                              uios::ScheduleState::at(epoch, anneal_epochs));
      },
      py::arg("alpha"), py::arg("label"), py::arg("epoch"), py::arg("anneal_epochs") = 10);

  // calibration and metrics
  m.def(
      "select_threshold",
      [](const std::vector<double>& uncertainty, const std::vector<int>& wrong, double tpr_weight) {
        const auto cal = uios::select_threshold(uios::roc_sweep(uncertainty, wrong), tpr_weight);
        return ToPython(uios::calibration_to_json(cal));
      },
      py::arg("uncertainty"), py::arg("wrong"), py::arg("tpr_weight") = 2.0);
  m.def(
      "binary_auc",
      [](const std::vector<double>& scores, const std::vector<int>& positive) {
        return uios::binary_auc(scores, positive);
      },
      py::arg("scores"), py::arg("positive"));

  // checkpoints
  m.def(
      "predict",
      [](const Path& checkpoint, const std::vector<std::vector<double>>& features,
         const std::string& method) {
        const auto ckpt = uios::load_checkpoint(checkpoint);
        const auto chosen =
            method.empty() ? uios::default_method(ckpt.model) : uios::parse_method(method);
        uios::check_method_compatible(chosen, ckpt.model);
        uios::ScorerParams scorer;
        std::optional<double> theta;
        if (auto it = ckpt.calibrations.find(std::string(uios::to_string(chosen)));
            it != ckpt.calibrations.end()) {
          scorer = it->second.scorer;
          theta = it->second.calibration.theta;
        }
        py::list out;
        for (const auto& s : uios::score(chosen, ckpt.model, ToMatrix(features), scorer)) {
          py::dict d;
          d["probs"] = s.probs;
          d["uncertainty"] = s.uncertainty;
          d["predicted_class"] = s.predicted_class;
          if (theta) {
            d["confidence"] = std::string(uios::to_string(uios::confidence_of(s.uncertainty, *theta)));
          }
          out.append(d);
        }
        return out;
      },
      py::arg("checkpoint"), py::arg("features"), py::arg("method") = "");

  // pipeline commands
  m.def(
      "gen_data",
      [](const Path& out_dir, std::size_t classes, std::size_t dim, std::size_t n_per_class,
         double radius, double sigma, std::size_t n_ood, bool unseen, bool uniform_box,
         std::uint64_t seed) {
        uios::GenDataOptions o;
        o.out_dir = out_dir;
        o.classes = classes;
        o.dim = dim;
        o.n_per_class = n_per_class;
        o.radius = radius;
        o.sigma = sigma;
        o.n_ood = n_ood;
        o.unseen = unseen;
        o.uniform_box = uniform_box;
        o.seed = seed;
        std::ostringstream sink;
        return ToPython(uios::cmd_gen_data(o, sink));
      },
      py::arg("out_dir"), py::arg("classes") = 5, py::arg("dim") = 2,
      py::arg("n_per_class") = 500, py::arg("radius") = 4.0, py::arg("sigma") = 0.9,
      py::arg("n_ood") = 500, py::arg("unseen") = false, py::arg("uniform_box") = false,
      py::arg("seed") = uios::kDefaultSeed);

  m.def(
      "train",
      [](const Path& train_csv, const Path& out, std::optional<Path> val_csv,
         const std::string& objective, int epochs, double lr, double weight_decay,
         std::size_t batch_size, int anneal_epochs, std::vector<std::size_t> hidden,
         double dropout, std::size_t snapshots, std::uint64_t seed) {
        uios::TrainOptions o;
        o.train_csv = train_csv;
        o.out = out;
        o.val_csv = std::move(val_csv);
        o.config.objective = uios::parse_objective(objective);
        o.config.epochs = epochs;
        o.config.learning_rate = lr;
        o.config.weight_decay = weight_decay;
        o.config.batch_size = batch_size;
        o.config.anneal_epochs = anneal_epochs;
        o.config.hidden_dims = std::move(hidden);
        o.config.dropout_rate = dropout;
        o.config.snapshot_count = snapshots;
        o.config.seed = seed;
        std::ostringstream sink;
        return ToPython(uios::cmd_train(o, sink));
      },
      py::arg("train_csv"), py::arg("out"), py::arg("val_csv") = std::nullopt,
      py::arg("objective") = "tun", py::arg("epochs") = 300, py::arg("lr") = 1e-4,
      py::arg("weight_decay") = 1e-4, py::arg("batch_size") = 64, py::arg("anneal_epochs") = 10,
      py::arg("hidden") = std::vector<std::size_t>{32, 32}, py::arg("dropout") = 0.0,
      py::arg("snapshots") = 5, py::arg("seed") = uios::kDefaultSeed);

  m.def(
      "calibrate",
      [](const Path& checkpoint, const Path& val_csv, std::optional<Path> out,
         std::vector<std::string> methods, double tpr_weight, std::size_t passes,
         double dropout_rate, double jitter, std::uint64_t seed) {
        uios::CalibrateOptions o;
        o.checkpoint = checkpoint;
        o.val_csv = val_csv;
        o.out = std::move(out);
        o.methods = std::move(methods);
        o.tpr_weight = tpr_weight;
        o.scorer.passes = passes;
        o.scorer.dropout_rate = dropout_rate;
        o.scorer.jitter_sigma = jitter;
        o.scorer.seed = seed;
        std::ostringstream sink;
        return ToPython(uios::cmd_calibrate(o, sink));
      },
      py::arg("checkpoint"), py::arg("val_csv"), py::arg("out") = std::nullopt,
      py::arg("methods") = std::vector<std::string>{}, py::arg("tpr_weight") = 2.0,
      py::arg("passes") = 10, py::arg("dropout_rate") = 0.0, py::arg("jitter") = 0.1,
      py::arg("seed") = uios::kDefaultSeed);

  m.def(
      "evaluate",
      [](const Path& checkpoint, const Path& test_csv, const std::string& method, bool thresholded,
         std::optional<Path> out) {
        uios::EvalOptions o;
        o.checkpoint = checkpoint;
        o.test_csv = test_csv;
        o.method = method;
        o.thresholded = thresholded;
        o.out = std::move(out);
        std::ostringstream sink;
        return ToPython(uios::cmd_eval(o, sink));
      },
      py::arg("checkpoint"), py::arg("test_csv"), py::arg("method") = "",
      py::arg("thresholded") = false, py::arg("out") = std::nullopt);

  m.def(
      "ood_eval",
      [](const Path& checkpoint, std::vector<Path> ood_csvs, std::optional<Path> id_csv,
         const std::string& method, std::size_t bins, std::optional<Path> out) {
        uios::OodEvalOptions o;
        o.checkpoint = checkpoint;
        o.ood_csvs = std::move(ood_csvs);
        o.id_csv = std::move(id_csv);
        o.method = method;
        o.bins = bins;
        o.out = std::move(out);
        std::ostringstream sink;
        return ToPython(uios::cmd_ood_eval(o, sink));
      },
      py::arg("checkpoint"), py::arg("ood_csvs"), py::arg("id_csv") = std::nullopt,
      py::arg("method") = "", py::arg("bins") = 10, py::arg("out") = std::nullopt);

  m.def(
      "compare",
      [](const Path& test_csv, std::optional<Path> checkpoint,
         std::optional<Path> baseline_checkpoint, std::vector<Path> ood_csvs,
         std::vector<std::string> methods, bool timing, std::optional<Path> out) {
        uios::CompareOptions o;
        o.test_csv = test_csv;
        o.checkpoint = std::move(checkpoint);
        o.baseline_checkpoint = std::move(baseline_checkpoint);
        o.ood_csvs = std::move(ood_csvs);
        o.methods = std::move(methods);
        o.timing = timing;
        o.out = std::move(out);
        std::ostringstream sink;
        return ToPython(uios::cmd_compare(o, sink));
      },
      py::arg("test_csv"), py::arg("checkpoint") = std::nullopt,
      py::arg("baseline_checkpoint") = std::nullopt,
      py::arg("ood_csvs") = std::vector<Path>{}, py::arg("methods") = DefaultMethods(),
      py::arg("timing") = false, py::arg("out") = std::nullopt);
}
