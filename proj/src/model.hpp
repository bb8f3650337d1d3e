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

#pragma once

#include <string>
#include <vector>

#include "common.hpp"
#include "dataset.hpp"
#include "kernel_map.hpp"
#include "matrix_io.hpp"
#include "projector.hpp"
#include "trainer.hpp"

namespace fddh {

struct TrainConfig {
  Hyperparams hp;
  double gamma = 1e-2;    // ridge weight for the out-of-sample projections
  int anchors = 500;      // per-modality anchor count (capped at n)
  int width_samples = 500;  // columns sampled for the kernel width (capped)
  std::uint64_t seed = 0;
  TrainVariant variant = TrainVariant::kFull;
};

// Named hyperparameter presets ("pascal-voc", "mirflickr", "nus-wide").
void apply_preset(const std::string& name, TrainConfig& config);
std::vector<std::string> preset_names();

/// A trained two-modality hashing model: shared basis and codes, the
/// per-modality kernel maps and centering vectors, and the out-of-sample
/// projections with their online-update caches.
struct Model {
  TrainConfig config;
  int label_count = 0;
  int train_count = 0;
  Matrix basis;   // q x c
  Matrix r1, r2;  // k_t x q
  Matrix codes;   // q x n, {-1, +1}
  Matrix dragged_labels;
  KernelMap kernel1, kernel2;  // unused for the no-kernel variant
  Vector center1, center2;
  Projection proj1, proj2;
  bool has_caches = true;
  std::vector<double> objective_trace;
  bool converged = false;
  int iterations = 0;

  int code_length() const { return static_cast<int>(basis.rows()); }
  bool uses_kernel() const {
    return config.variant != TrainVariant::kNoRelaxNoKernel;
  }
};

/// Validated and centered training inputs with their feature maps; the
/// stage shared by full training and the per-iteration diagnostics.
struct PreparedInputs {
  FeatureMatrix f1, f2;
  KernelMap kernel1, kernel2;  // empty for the no-kernel variant
  Matrix phi1, phi2;           // k_t x n feature maps
  std::uint64_t optimizer_seed = 0;
};

PreparedInputs prepare_inputs(Matrix x1, Matrix x2, const Matrix& labels,
                              const TrainConfig& config);

/// Full training pipeline: validates inputs, zero-centers both
/// modalities, fits the kernel maps (anchor and width-sample counts are
/// capped at the training size), runs the alternating optimization and
/// fits both out-of-sample projections.
Model train_model(Matrix x1, Matrix x2, Matrix labels,
                  const TrainConfig& config,
                  const IterationObserver& observer = {});

// Centers raw queries with the stored shift, applies the modality's
// feature map and signs the projection. Accepts an empty batch.
Matrix encode_queries(const Model& model, int modality, const Matrix& raw);

// Feature map step alone (centered + kernelized, or centered raw
// features for the no-kernel variant).
Matrix map_queries(const Model& model, int modality, const Matrix& raw);

// Online refresh of one modality's projection from raw new samples.
OnlineResult update_model(Model& model, int modality, const Matrix& raw,
                          int max_rounds);

io::ModelArchive to_archive(const Model& model);
Model from_archive(const io::ModelArchive& archive);

// Copy of a single archive section without materializing the rest.
Matrix model_section_copy(const Model& model, const std::string& name);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace fddh
