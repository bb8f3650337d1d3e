// Copyright 2026 The FDDH Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "model.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fddh {

namespace {

// Seed-derivation purposes for the training pipeline.
constexpr std::uint64_t kKernel1Stream = 100;
constexpr std::uint64_t kKernel2Stream = 101;
constexpr std::uint64_t kOptimizerStream = 102;

// Every section name a model archive may contain, in write order.
constexpr std::array<const char*, 16> kKnownSections = {
    "BASIS",        "ROTATION_1", "ROTATION_2", "CODES",
    "DRAGGED_LABELS", "CENTER_1",   "CENTER_2",   "PROJ_1",
    "PROJ_2",       "GRAM_1",     "GRAM_2",     "CROSS_1",
    "CROSS_2",      "OBJECTIVE_TRACE", "ANCHORS_1", "ANCHORS_2"};

void check_modality(int modality) {
  require(modality == 1 || modality == 2, Status::kParamError,
          MessageBuilder() << "modality must be 1 or 2, got " << modality);
}

}  // namespace

void apply_preset(const std::string& name, TrainConfig& config) {
  if (name == "pascal-voc") {
    config.hp.mu = 1.0;
    config.hp.theta = 1e-3;
    config.hp.delta = 1e3;
  } else if (name == "mirflickr") {
    config.hp.mu = 1e-2;
    config.hp.theta = 1e-3;
    config.hp.delta = 1e3;
  } else if (name == "nus-wide") {
    config.hp.mu = 1e-3;
    config.hp.theta = 1e-3;
    config.hp.delta = 1e3;
  } else {
    fail(Status::kParamError,
         MessageBuilder() << "unknown preset '" << name
                          << "' (expected pascal-voc, mirflickr, or "
                             "nus-wide)");
  }
}

std::vector<std::string> preset_names() {
  return {"pascal-voc", "mirflickr", "nus-wide"};
}

PreparedInputs prepare_inputs(Matrix x1, Matrix x2, const Matrix& labels,
                              const TrainConfig& config) {
  require(config.gamma > 0.0, Status::kParamError,
          MessageBuilder() << "ridge weight must be > 0, got "
                           << config.gamma);
  require(config.anchors >= 1, Status::kParamError,
          MessageBuilder() << "anchor count must be >= 1, got "
                           << config.anchors);
  require(config.width_samples >= 2, Status::kParamError,
          MessageBuilder() << "width sample count must be >= 2, got "
                           << config.width_samples);

  PreparedInputs prep;
  prep.f1 = make_features(std::move(x1), 1);
  prep.f2 = make_features(std::move(x2), 2);
  check_label_matrix(labels, "label matrix");
  const auto n = labels.cols();
  require(prep.f1.values.cols() == n && prep.f2.values.cols() == n,
          Status::kShapeError,
          MessageBuilder() << "sample counts disagree: modality 1 has "
                           << prep.f1.values.cols() << ", modality 2 has "
                           << prep.f2.values.cols() << ", labels have " << n);
  zero_center(prep.f1);
  zero_center(prep.f2);

  RandomGenerator root(config.seed);
  prep.optimizer_seed = root.derive(kOptimizerStream).seed();
  if (config.variant == TrainVariant::kNoRelaxNoKernel) {
    const int q = config.hp.code_length;
    require(prep.f1.values.rows() >= q && prep.f2.values.rows() >= q,
            Status::kParamError,
            MessageBuilder()
                << "no-kernel variant needs feature dimensions >= code "
                   "length "
                << q << ", got " << prep.f1.values.rows() << " and "
                << prep.f2.values.rows());
    prep.phi1 = prep.f1.values;
    prep.phi2 = prep.f2.values;
  } else {
    const int k = std::min<int>(config.anchors, static_cast<int>(n));
    const int m = std::min<int>(config.width_samples, static_cast<int>(n));
    prep.kernel1 =
        fit_kernel(prep.f1, k, m, root.derive(kKernel1Stream).seed());
    prep.kernel2 =
        fit_kernel(prep.f2, k, m, root.derive(kKernel2Stream).seed());
    prep.phi1 = apply_kernel(prep.kernel1, prep.f1.values);
    prep.phi2 = apply_kernel(prep.kernel2, prep.f2.values);
  }
  return prep;
}

Model train_model(Matrix x1, Matrix x2, Matrix labels,
                  const TrainConfig& config,
                  const IterationObserver& observer) {
  PreparedInputs prep =
      prepare_inputs(std::move(x1), std::move(x2), labels, config);

  Model model;
  model.config = config;
  model.label_count = static_cast<int>(labels.rows());
  model.train_count = static_cast<int>(labels.cols());
  model.center1 = prep.f1.center;
  model.center2 = prep.f2.center;
  model.kernel1 = std::move(prep.kernel1);
  model.kernel2 = std::move(prep.kernel2);
  const Matrix phi1 = std::move(prep.phi1);
  const Matrix phi2 = std::move(prep.phi2);

  TrainState state =
      run_alternating(labels, phi1, phi2, config.hp, prep.optimizer_seed,
                      config.variant, observer);
  model.basis = std::move(state.C);
  model.r1 = std::move(state.R1);
  model.r2 = std::move(state.R2);
  model.codes = std::move(state.H);
  model.dragged_labels = std::move(state.Ybar);
  model.objective_trace = std::move(state.objective_trace);
  model.converged = state.converged;
  model.iterations = state.iterations;

  model.proj1 = fit_projection(model.codes, phi1, config.gamma);
  model.proj2 = fit_projection(model.codes, phi2, config.gamma);
  model.has_caches = true;
  return model;
}

Matrix map_queries(const Model& model, int modality, const Matrix& raw) {
  check_modality(modality);
  const Vector& center = modality == 1 ? model.center1 : model.center2;
  require(raw.rows() == center.size(), Status::kShapeError,
          MessageBuilder() << "modality " << modality << " expects "
                           << center.size() << "-dimensional features, got "
                           << raw.rows());
  require(raw.allFinite(), Status::kNumericError,
          MessageBuilder() << "modality " << modality
                           << ": query features have non-finite entries");
  Matrix centered = raw;
  centered.colwise() -= center;
  if (!model.uses_kernel()) return centered;
  const KernelMap& km = modality == 1 ? model.kernel1 : model.kernel2;
  return apply_kernel(km, centered);
}

Matrix encode_queries(const Model& model, int modality, const Matrix& raw) {
  const Matrix phi = map_queries(model, modality, raw);
  const Projection& proj = modality == 1 ? model.proj1 : model.proj2;
  return project_signs(proj.p, phi);
}

OnlineResult update_model(Model& model, int modality, const Matrix& raw,
                          int max_rounds) {
  check_modality(modality);
  require(model.has_caches, Status::kStateError,
          "model archive carries no online caches; retrain with this "
          "version to enable online updates");
  const Matrix phi = map_queries(model, modality, raw);
  Projection& proj = modality == 1 ? model.proj1 : model.proj2;
  return online_update(proj, phi, max_rounds);
}

io::ModelArchive to_archive(const Model& model) {
  io::ModelArchive a;
  a.add_section("BASIS", model.basis);
  a.add_section("ROTATION_1", model.r1);
  a.add_section("ROTATION_2", model.r2);
  a.add_section("CODES", model.codes);
  a.add_section("DRAGGED_LABELS", model.dragged_labels);
  a.add_section("CENTER_1", model.center1);
  a.add_section("CENTER_2", model.center2);
  a.add_section("PROJ_1", model.proj1.p);
  a.add_section("PROJ_2", model.proj2.p);
  if (model.has_caches) {
    a.add_section("GRAM_1", model.proj1.gram);
    a.add_section("GRAM_2", model.proj2.gram);
    a.add_section("CROSS_1", model.proj1.cross);
    a.add_section("CROSS_2", model.proj2.cross);
  }
  if (!model.objective_trace.empty()) {
    Matrix trace(1, model.objective_trace.size());
    for (std::size_t i = 0; i < model.objective_trace.size(); ++i)
      trace(0, static_cast<int>(i)) = model.objective_trace[i];
    a.add_section("OBJECTIVE_TRACE", std::move(trace));
  }
  if (model.uses_kernel()) {
    a.add_section("ANCHORS_1", model.kernel1.anchors);
    a.add_section("ANCHORS_2", model.kernel2.anchors);
    a.set_meta_f64("kernel_width_1", model.kernel1.width);
    a.set_meta_f64("kernel_width_2", model.kernel2.width);
    a.set_meta_u64("kernel_seed_1", model.kernel1.seed);
    a.set_meta_u64("kernel_seed_2", model.kernel2.seed);
  }
  a.set_meta_i64("code_length", model.code_length());
  a.set_meta_i64("label_count", model.label_count);
  a.set_meta_i64("train_count", model.train_count);
  a.set_meta_f64("mu", model.config.hp.mu);
  a.set_meta_f64("theta", model.config.hp.theta);
  a.set_meta_f64("delta", model.config.hp.delta);
  a.set_meta_f64("gamma", model.config.gamma);
  a.set_meta_f64("tol", model.config.hp.tol);
  a.set_meta_i64("max_iters", model.config.hp.max_iters);
  a.set_meta_i64("anchors", model.config.anchors);
  a.set_meta_i64("width_samples", model.config.width_samples);
  a.set_meta_u64("seed", model.config.seed);
  a.set_meta("variant", variant_name(model.config.variant));
  a.set_meta_i64("iterations", model.iterations);
  a.set_meta_i64("converged", model.converged ? 1 : 0);
  return a;
}

Model from_archive(const io::ModelArchive& archive) {
  for (const auto& [name, m] : archive.sections) {
    const bool known =
        std::find_if(kKnownSections.begin(), kKnownSections.end(),
                     [&name](const char* k) { return name == k; }) !=
        kKnownSections.end();
    require(known, Status::kParseError,
            MessageBuilder() << "model archive: unknown section '" << name
                             << "'");
  }

  Model model;
  model.config.variant = variant_from_name(archive.meta("variant"));
  model.config.hp.mu = archive.meta_f64("mu");
  model.config.hp.theta = archive.meta_f64("theta");
  model.config.hp.delta = archive.meta_f64("delta");
  model.config.gamma = archive.meta_f64("gamma");
  model.config.hp.tol = archive.meta_f64("tol");
  model.config.hp.max_iters =
      static_cast<int>(archive.meta_i64("max_iters"));
  model.config.hp.code_length =
      static_cast<int>(archive.meta_i64("code_length"));
  model.config.anchors = static_cast<int>(archive.meta_i64("anchors"));
  model.config.width_samples =
      static_cast<int>(archive.meta_i64("width_samples"));
  model.config.seed = archive.meta_u64("seed");
  model.label_count = static_cast<int>(archive.meta_i64("label_count"));
  model.train_count = static_cast<int>(archive.meta_i64("train_count"));
  model.iterations = static_cast<int>(archive.meta_i64("iterations"));
  model.converged = archive.meta_i64("converged") != 0;

  model.basis = archive.section("BASIS");
  model.r1 = archive.section("ROTATION_1");
  model.r2 = archive.section("ROTATION_2");
  model.codes = archive.section("CODES");
  model.dragged_labels = archive.section("DRAGGED_LABELS");
  require(archive.section("CENTER_1").cols() == 1 &&
              archive.section("CENTER_2").cols() == 1,
          Status::kParseError,
          "model archive: centers must be single-column matrices");
  model.center1 = archive.section("CENTER_1");
  model.center2 = archive.section("CENTER_2");
  model.proj1.p = archive.section("PROJ_1");
  model.proj2.p = archive.section("PROJ_2");
  model.proj1.gamma = model.config.gamma;
  model.proj2.gamma = model.config.gamma;

  const bool any_cache =
      archive.has_section("GRAM_1") || archive.has_section("GRAM_2") ||
      archive.has_section("CROSS_1") || archive.has_section("CROSS_2");
  const bool all_caches =
      archive.has_section("GRAM_1") && archive.has_section("GRAM_2") &&
      archive.has_section("CROSS_1") && archive.has_section("CROSS_2");
  require(!any_cache || all_caches, Status::kParseError,
          "model archive: online caches are incomplete");
  model.has_caches = all_caches;
  if (all_caches) {
    model.proj1.gram = archive.section("GRAM_1");
    model.proj2.gram = archive.section("GRAM_2");
    model.proj1.cross = archive.section("CROSS_1");
    model.proj2.cross = archive.section("CROSS_2");
  }
  if (archive.has_section("OBJECTIVE_TRACE")) {
    const Matrix& trace = archive.section("OBJECTIVE_TRACE");
    require(trace.rows() == 1, Status::kParseError,
            "model archive: objective trace must be a single row");
    model.objective_trace.assign(trace.data(),
                                 trace.data() + trace.cols());
  }
  if (model.uses_kernel()) {
    model.kernel1.anchors = archive.section("ANCHORS_1");
    model.kernel2.anchors = archive.section("ANCHORS_2");
    model.kernel1.width = archive.meta_f64("kernel_width_1");
    model.kernel2.width = archive.meta_f64("kernel_width_2");
    model.kernel1.seed = archive.meta_u64("kernel_seed_1");
    model.kernel2.seed = archive.meta_u64("kernel_seed_2");
    model.kernel1.modality_id = 1;
    model.kernel2.modality_id = 2;
  }

  // Cross-check the load so a tampered or mismatched archive fails here
  // rather than deep inside a later computation.
  const int q = model.config.hp.code_length;
  const int c = model.label_count;
  const auto shape_ok = [](const Matrix& m, Eigen::Index rows,
                           Eigen::Index cols) {
    return m.rows() == rows && m.cols() == cols;
  };
  require(shape_ok(model.basis, q, c), Status::kParseError,
          "model archive: basis shape disagrees with metadata");
  require(model.r1.cols() == q && model.r2.cols() == q, Status::kParseError,
          "model archive: rotation shapes disagree with metadata");
  require(shape_ok(model.codes, q, model.train_count), Status::kParseError,
          "model archive: code shape disagrees with metadata");
  require(shape_ok(model.dragged_labels, c, model.train_count),
          Status::kParseError,
          "model archive: dragged-label shape disagrees with metadata");
  require(model.proj1.p.rows() == q &&
              model.proj1.p.cols() == model.r1.rows() &&
              model.proj2.p.rows() == q &&
              model.proj2.p.cols() == model.r2.rows(),
          Status::kParseError,
          "model archive: projection shapes disagree with rotations");
  if (model.uses_kernel()) {
    require(model.kernel1.anchors.cols() == model.r1.rows() &&
                model.kernel2.anchors.cols() == model.r2.rows(),
            Status::kParseError,
            "model archive: anchor counts disagree with rotations");
    require(model.kernel1.anchors.rows() == model.center1.size() &&
                model.kernel2.anchors.rows() == model.center2.size(),
            Status::kParseError,
            "model archive: anchor dimensions disagree with centers");
  }
  if (model.has_caches) {
    require(model.proj1.gram.rows() == model.proj1.p.cols() &&
                model.proj1.gram.cols() == model.proj1.p.cols() &&
                model.proj2.gram.rows() == model.proj2.p.cols() &&
                model.proj2.gram.cols() == model.proj2.p.cols(),
            Status::kParseError,
            "model archive: cache shapes disagree with projections");
    require(model.proj1.cross.rows() == q && model.proj2.cross.rows() == q &&
                model.proj1.cross.cols() == model.proj1.p.cols() &&
                model.proj2.cross.cols() == model.proj2.p.cols(),
            Status::kParseError,
            "model archive: cache shapes disagree with projections");
  }
  return model;
}

Matrix model_section_copy(const Model& model, const std::string& name) {
  if (name == "BASIS") return model.basis;
  if (name == "ROTATION_1") return model.r1;
  if (name == "ROTATION_2") return model.r2;
  if (name == "CODES") return model.codes;
  if (name == "DRAGGED_LABELS") return model.dragged_labels;
  if (name == "CENTER_1") return model.center1;
  if (name == "CENTER_2") return model.center2;
  if (name == "PROJ_1") return model.proj1.p;
  if (name == "PROJ_2") return model.proj2.p;
  if (model.has_caches) {
    if (name == "GRAM_1") return model.proj1.gram;
    if (name == "GRAM_2") return model.proj2.gram;
    if (name == "CROSS_1") return model.proj1.cross;
    if (name == "CROSS_2") return model.proj2.cross;
  }
  if (name == "OBJECTIVE_TRACE" && !model.objective_trace.empty()) {
    Matrix trace(1, model.objective_trace.size());
    for (std::size_t i = 0; i < model.objective_trace.size(); ++i)
      trace(0, static_cast<int>(i)) = model.objective_trace[i];
    return trace;
  }
  if (model.uses_kernel()) {
    if (name == "ANCHORS_1") return model.kernel1.anchors;
    if (name == "ANCHORS_2") return model.kernel2.anchors;
  }
  fail(Status::kParamError,
       MessageBuilder() << "model has no section '" << name << "'");
}

void save_model(const Model& model, const std::string& path) {
  io::save_archive(to_archive(model), path);
}

Model load_model(const std::string& path) {
  return from_archive(io::load_archive(path));
}

}  // namespace fddh
