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

#include "kernel_map.hpp"

#include <cmath>

namespace fddh {

namespace {
// Independent draw purposes; keeps anchor choice unaffected by how many
// draws the width estimate consumes.
constexpr std::uint64_t kAnchorStream = 0;
constexpr std::uint64_t kWidthStream = 1;
}  // namespace

KernelMap fit_kernel(const FeatureMatrix& x, int anchor_count,
                     int width_samples, std::uint64_t seed) {
  const int n = static_cast<int>(x.values.cols());
  require(anchor_count >= 1, Status::kParamError,
          MessageBuilder() << "anchor count must be >= 1, got "
                           << anchor_count);
  require(anchor_count <= n, Status::kParamError,
          MessageBuilder() << "anchor count " << anchor_count
                           << " exceeds training size " << n);
  require(width_samples >= 2, Status::kParamError,
          MessageBuilder() << "width estimation needs >= 2 samples, got "
                           << width_samples);
  require(width_samples <= n, Status::kParamError,
          MessageBuilder() << "width sample count " << width_samples
                           << " exceeds training size " << n);

  RandomGenerator root(seed);
  RandomGenerator anchor_rng = root.derive(kAnchorStream);
  RandomGenerator width_rng = root.derive(kWidthStream);

  KernelMap km;
  km.modality_id = x.modality_id;
  km.seed = seed;
  km.anchor_indices = anchor_rng.sample_without_replacement(n, anchor_count);
  km.anchors.resize(x.values.rows(), anchor_count);
  for (int j = 0; j < anchor_count; ++j)
    km.anchors.col(j) = x.values.col(km.anchor_indices[j]);

  const std::vector<int> width_idx =
      width_rng.sample_without_replacement(n, width_samples);
  double total = 0.0;
  for (int a = 0; a < width_samples; ++a) {
    for (int b = a + 1; b < width_samples; ++b) {
      total += (x.values.col(width_idx[a]) - x.values.col(width_idx[b])).norm();
    }
  }
  const double pair_count =
      static_cast<double>(width_samples) * (width_samples - 1) / 2.0;
  km.width = total / pair_count;
  require(km.width > 0.0, Status::kNumericError,
          MessageBuilder() << "modality " << x.modality_id
                           << ": degenerate kernel width 0 (sampled training "
                              "columns are identical)");
  return km;
}

Matrix apply_kernel(const KernelMap& km, const Matrix& x) {
  require(km.width > 0.0, Status::kStateError,
          "kernel map has not been fitted");
  require(x.rows() == km.anchors.rows(), Status::kShapeError,
          MessageBuilder() << "modality " << km.modality_id
                           << ": feature dimension " << x.rows()
                           << " does not match anchor dimension "
                           << km.anchors.rows());
  // ||x - a||^2 expanded so one matrix product covers all pairs; clamp
  // guards against small negative round-off.
  const Eigen::RowVectorXd anchor_sq = km.anchors.colwise().squaredNorm();
  const Eigen::RowVectorXd x_sq = x.colwise().squaredNorm();
  Matrix d2 = -2.0 * (km.anchors.transpose() * x);
  d2.colwise() += anchor_sq.transpose();
  d2.rowwise() += x_sq;
  d2 = d2.cwiseMax(0.0);
  const double scale = -1.0 / (2.0 * km.width * km.width);
  return (d2 * scale).array().exp();
}

}  // namespace fddh
