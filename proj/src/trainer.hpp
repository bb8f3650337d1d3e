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

#include <functional>
#include <vector>

#include "common.hpp"

namespace fddh {

struct Hyperparams {
  double mu = 1e-2;     // modality-1 embedding weight
  double theta = 1e-3;  // modality-2 embedding weight
  double delta = 1e3;   // dragged-label shrinkage
  int code_length = 32;
  int max_iters = 50;
  double tol = 1e-5;  // relative objective-change stop threshold
};

enum class TrainVariant {
  kFull = 0,
  kNoRelax = 1,          // labels stay fixed at Y (no dragging)
  kNoRelaxNoKernel = 2,  // additionally uses raw centered features
};

const char* variant_name(TrainVariant v);
TrainVariant variant_from_name(const std::string& name);

/// Everything the alternating loop mutates. Shapes: C is q x c with
/// orthonormal columns, R1/R2 are k_t x q with orthonormal columns, Ybar
/// is c x n, H is q x n in {-1, +1}, B holds the per-entry dragging
/// directions.
struct TrainState {
  Matrix C, R1, R2, Ybar, H, B;
  std::vector<double> objective_trace;  // entry 0 is the initial state
  int iterations = 0;
  bool converged = false;
};

/// Orthonormal-column maximizer of trace(M * X) over X with X^T X = I:
/// X = V U^T from the rank-r thin SVD of M (a x b, r <= min(a, b)).
/// An all-zero M degenerates to the first r columns of the identity
/// embedded in b x a.
Matrix procrustes_max(const Matrix& m, int rank);

// One exact block update each; callers pass the current state plus the
// fixed kernelized features (k_t x n).
Matrix update_basis(const TrainState& s, const Matrix& phi1,
                    const Matrix& phi2, const Hyperparams& hp);
Matrix update_rotation(const Matrix& c_mat, const Matrix& ybar,
                       const Matrix& phi);
Matrix update_codes(const Matrix& c_mat, const Matrix& ybar);
Matrix update_dragged_labels(const TrainState& s, const Matrix& labels,
                             const Matrix& phi1, const Matrix& phi2,
                             const Hyperparams& hp);

// Weighted least-squares objective the loop minimizes; delta_eff is the
// shrinkage weight actually in force (0 when dragging is disabled).
double objective_value(const TrainState& s, const Matrix& phi1,
                       const Matrix& phi2, const Hyperparams& hp,
                       double delta_eff);

using IterationObserver =
    std::function<void(int iteration, const TrainState& state)>;

/// Runs the alternating optimization from a seeded random start until the
/// relative objective change drops below tol or max_iters is hit. The
/// observer (if any) fires after every full sweep.
TrainState run_alternating(const Matrix& labels, const Matrix& phi1,
                           const Matrix& phi2, const Hyperparams& hp,
                           std::uint64_t seed, TrainVariant variant,
                           const IterationObserver& observer = {});

}  // namespace fddh
