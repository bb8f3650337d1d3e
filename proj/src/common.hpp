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

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fddh {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Status {
  kOk = 0,
  kIoError = 1,
  kParseError = 2,
  kShapeError = 3,
  kParamError = 4,
  kStateError = 5,
  kNumericError = 6,
  kInternalError = 7,
};

const char* status_name(Status s);

/// Exception type carried across the whole core; the C boundary maps it
/// to a status code plus a thread-local message.
class Error : public std::runtime_error {
 public:
  Error(Status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}

  Status status() const { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void fail(Status status, const std::string& message) {
  throw Error(status, message);
}

inline void require(bool cond, Status status, const std::string& message) {
  if (!cond) fail(status, message);
}

// Small helper for building error strings without dragging in a formatting
// library.
class MessageBuilder {
 public:
  template <typename T>
  MessageBuilder& operator<<(const T& v) {
    stream_ << v;
    return *this;
  }
  std::string str() const { return stream_.str(); }
  operator std::string() const { return str(); }

 private:
  std::ostringstream stream_;
};

/// Deterministic random source. All stochastic choices in the library go
/// through this class so that a fixed seed reproduces a run bit for bit.
/// Gaussians use Box-Muller instead of std::normal_distribution to stay
/// independent of the standard library implementation.
class RandomGenerator {
 public:
  explicit RandomGenerator(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound), bound > 0. Rejection keeps it unbiased.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double gaussian();

  double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  // First k entries of a seeded partial Fisher-Yates shuffle of 0..n-1.
  std::vector<int> sample_without_replacement(int n, int k);

  /// Independent substream for a fixed purpose id. Deriving instead of
  /// sharing one stream keeps unrelated stages (kernel sampling, matrix
  /// init, ...) insensitive to each other's draw counts.
  RandomGenerator derive(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Gaussian matrix with a fixed fill order (column by column).
Matrix gaussian_matrix(int rows, int cols, RandomGenerator& rng);

// Orthonormal-column matrix (rows >= cols) via Householder QR of a seeded
// Gaussian draw.
Matrix random_orthonormal(int rows, int cols, RandomGenerator& rng);

}  // namespace fddh
