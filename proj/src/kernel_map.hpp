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

#include <vector>

#include "common.hpp"
#include "dataset.hpp"

namespace fddh {

/// Anchor RBF feature map: phi(x)_j = exp(-||x - a_j||^2 / (2 sigma^2)).
/// Anchors are k distinct training columns; sigma is the mean pairwise
/// distance over m sampled training columns.
struct KernelMap {
  Matrix anchors;  // d x k, one anchor per column
  double width = 0.0;
  int modality_id = 1;
  std::uint64_t seed = 0;
  std::vector<int> anchor_indices;  // training columns the anchors came from
};

KernelMap fit_kernel(const FeatureMatrix& x, int anchor_count,
                     int width_samples, std::uint64_t seed);

// k x p map of the given columns; clamps squared distances at zero so the
// expanded-form computation cannot go negative.
Matrix apply_kernel(const KernelMap& km, const Matrix& x);

}  // namespace fddh
