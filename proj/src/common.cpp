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

#include "common.hpp"

#include <cmath>
#include <numeric>

namespace fddh {

const char* status_name(Status s) {
  switch (s) {
    case Status::kOk: return "ok";
    case Status::kIoError: return "io error";
    case Status::kParseError: return "parse error";
    case Status::kShapeError: return "shape error";
    case Status::kParamError: return "parameter error";
    case Status::kStateError: return "state error";
    case Status::kNumericError: return "numeric error";
    case Status::kInternalError: return "internal error";
  }
  return "unknown";
}

std::uint64_t RandomGenerator::uniform_below(std::uint64_t bound) {
  if (bound == 0) fail(Status::kInternalError, "uniform_below: zero bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

double RandomGenerator::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 is kept away from zero so the log stays finite.
  double u1;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<int> RandomGenerator::sample_without_replacement(int n, int k) {
  require(n >= 0 && k >= 0 && k <= n, Status::kInternalError,
          "sample_without_replacement: bad arguments");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(uniform_below(
                          static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

namespace {

// splitmix64 finalizer; decorrelates derived seeds from the parent seed.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomGenerator RandomGenerator::derive(std::uint64_t stream) const {
  return RandomGenerator(mix64(seed_ ^ mix64(stream + 1)));
}

Matrix gaussian_matrix(int rows, int cols, RandomGenerator& rng) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
  return m;
}

Matrix random_orthonormal(int rows, int cols, RandomGenerator& rng) {
  require(rows >= cols, Status::kInternalError,
          "random_orthonormal: rows < cols");
  const Matrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

}  // namespace fddh
