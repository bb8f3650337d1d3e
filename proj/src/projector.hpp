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

#include "common.hpp"

namespace fddh {

/// Ridge projection for one modality together with the running sums that
/// let later batches refine it without revisiting old samples:
///   P = cross * (gram + gamma I)^-1,  gram = sum phi phi^T,
///   cross = sum h phi^T.
struct Projection {
  Matrix p;      // q x k
  Matrix gram;   // k x k
  Matrix cross;  // q x k
  double gamma = 1e-2;
};

// Solves H Phi^T (Phi Phi^T + gamma I)^-1 through a Cholesky factor (the
// regularized Gram matrix is symmetric positive definite, so the inverse
// is never formed) and stores the caches for online refinement.
Projection fit_projection(const Matrix& codes, const Matrix& phi,
                          double gamma);

// sgn(P phi), zero mapping to +1.
Matrix project_signs(const Matrix& p, const Matrix& phi);

struct OnlineResult {
  Matrix codes;  // q x batch, codes assigned to the new samples
  int rounds = 0;
};

/// Folds a feature-mapped batch (k x m) into the projection: alternates
/// the closed-form P refresh with re-signing the batch codes until the
/// codes stop changing or max_rounds passes, then absorbs the batch into
/// the caches.
OnlineResult online_update(Projection& proj, const Matrix& phi_batch,
                           int max_rounds);

}  // namespace fddh
