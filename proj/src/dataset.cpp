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

#include "dataset.hpp"

#include <cmath>

namespace fddh {

FeatureMatrix make_features(Matrix values, int modality_id) {
  require(modality_id == 1 || modality_id == 2, Status::kParamError,
          MessageBuilder() << "modality id must be 1 or 2, got "
                           << modality_id);
  require(values.rows() >= 1, Status::kShapeError,
          MessageBuilder() << "modality " << modality_id
                           << ": feature matrix needs at least one row");
  require(values.cols() >= 1, Status::kShapeError,
          MessageBuilder() << "modality " << modality_id
                           << ": feature matrix needs at least one sample");
  require(values.allFinite(), Status::kNumericError,
          MessageBuilder() << "modality " << modality_id
                           << ": feature matrix has non-finite entries");
  FeatureMatrix x;
  x.values = std::move(values);
  x.modality_id = modality_id;
  x.center = Vector::Zero(x.values.rows());
  return x;
}

void zero_center(FeatureMatrix& x) {
  const Vector means = x.values.rowwise().mean();
  x.values.colwise() -= means;
  x.center += means;
  x.centered = true;
}

void check_label_matrix(const Matrix& values, const std::string& what) {
  require(values.rows() >= 1, Status::kShapeError,
          MessageBuilder() << what << ": needs at least one label class");
  require(values.cols() >= 1, Status::kShapeError,
          MessageBuilder() << what << ": needs at least one sample");
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    bool any = false;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      const double v = values(i, j);
      if (v != 0.0 && v != 1.0) {
        fail(Status::kParamError,
             MessageBuilder() << what << ": entry (" << i << ", " << j
                              << ") is " << v << ", labels must be 0 or 1");
      }
      any = any || v == 1.0;
    }
    require(any, Status::kParamError,
            MessageBuilder() << what << ": sample " << j << " has no label");
  }
}

LabelMatrix make_labels(Matrix values) {
  check_label_matrix(values, "label matrix");
  return LabelMatrix{std::move(values)};
}

Matrix dragging_directions(const Matrix& labels) {
  return labels.unaryExpr([](double v) { return v == 1.0 ? 1.0 : -1.0; });
}

}  // namespace fddh
