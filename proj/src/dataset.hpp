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

/// One modality's training features, samples in columns (d x n).
/// `center` records the row means subtracted so far so queries can be
/// shifted into the same frame later.
struct FeatureMatrix {
  Matrix values;
  int modality_id = 1;
  bool centered = false;
  Vector center;
};

FeatureMatrix make_features(Matrix values, int modality_id);

// Subtracts row means in place and accumulates them into `center`, so
// repeated calls still track the total shift.
void zero_center(FeatureMatrix& x);

/// c x n zero/one label matrix; every sample carries at least one label.
struct LabelMatrix {
  Matrix values;
};

LabelMatrix make_labels(Matrix values);

// Validation shared with evaluation inputs; `what` names the offending
// matrix in error messages.
void check_label_matrix(const Matrix& values, const std::string& what);

// Per-entry dragging directions: +1 where the label is set, -1 elsewhere.
Matrix dragging_directions(const Matrix& labels);

}  // namespace fddh
