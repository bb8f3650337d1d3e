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
#include "model.hpp"

namespace fddh {

/// Per-sample residuals of the code/label embedding:
///   forward[i]  = h_i - C y_i   (code minus embedded label)
///   backward[i] = y_i - C^T h_i (label minus back-projected code)
/// kappa = ||C||_F = sqrt(c) links the two spaces' distances.
struct ErrorTerms {
  Matrix forward;   // q x n
  Matrix backward;  // c x n
  double kappa = 0.0;
};

ErrorTerms error_terms(const Matrix& basis, const Matrix& labels,
                       const Matrix& codes);

struct Histogram {
  double bin_width = 0.0;
  std::vector<double> centers;
  std::vector<std::uint64_t> counts;
};

Histogram make_histogram(const std::vector<double>& values, int bins);

/// Sampled two-sided check that code distances track label distances:
///   (1/kappa) ||dy|| - eps2 <= ||dh|| <= kappa ||dy|| + eps1
/// with eps1 = ||e_i - e_j|| and eps2 = ||e'_i - e'_j||. Pairs with equal
/// label vectors are still checked but excluded from the normalized
/// error statistics.
struct PairwiseBoundStats {
  std::uint64_t pairs = 0;
  std::uint64_t pairs_same_label = 0;
  std::uint64_t upper_violations = 0;
  std::uint64_t lower_violations = 0;
  double kappa = 0.0;
  // eps1 / (kappa ||dy||) and kappa eps2 / ||dy|| over distinct-label pairs.
  Histogram upper_error_hist;
  Histogram lower_error_hist;
  double upper_frac_within_tenth = 0.0;
  double lower_frac_within_tenth = 0.0;
};

PairwiseBoundStats pairwise_bound_check(const ErrorTerms& terms,
                                        const Matrix& labels,
                                        const Matrix& codes,
                                        std::uint64_t pair_count,
                                        std::uint64_t seed);

/// Labeled two-modality synthetic data: class prototypes per modality,
/// each sample is the mean of its label prototypes plus Gaussian noise.
/// Primary labels rotate round-robin; a second label joins with
/// probability one half when more than one class exists.
struct SynthDataset {
  Matrix x1;  // d1 x n
  Matrix x2;  // d2 x n
  Matrix labels;
};

SynthDataset synth_dataset(int n, int classes, int d1, int d2, double noise,
                           std::uint64_t seed);

/// Perturbation experiment: for growing training sizes, train once, then
/// run the online update twice (a fresh batch vs the same batch with one
/// sample swapped for an iid redraw) and record how far the two resulting
/// projections drift apart. The ridge weight scales with (n + m) so the
/// drift follows the predicted 1/(n + m) decay; the CSV-facing slope is
/// fit on log-log points.
struct StabilityConfig {
  std::vector<int> sizes = {256, 512, 1024, 2048, 4096, 8192};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int classes = 4;
  int d1 = 16;
  int d2 = 12;
  double noise = 0.1;
  int code_length = 16;
  int anchors = 64;
  int width_samples = 64;
  int train_iters = 5;
  int batch = 64;
  double gamma = 1e-2;  // weight per normalized objective; rescaled inside
  int modality = 1;
  double mu = 1e-2;
  double theta = 1e-3;
  double delta = 1e3;
};

struct StabilityPoint {
  int train_size = 0;
  int total_size = 0;  // train + batch
  double mean_drift = 0.0;
  double bound = 0.0;  // theoretical 2 d^2 M / (gamma (n + m))
  std::vector<double> per_seed;
};

struct StabilityReport {
  std::vector<StabilityPoint> points;
  double slope = 0.0;      // log drift vs log size
  double intercept = 0.0;
  int excluded_points = 0;  // zero-drift points left out of the fit
};

StabilityReport stability_experiment(const StabilityConfig& config);

/// Objective and retrieval quality per training sweep on a held-out
/// query split; row 0 is the random initial state.
struct ConvergenceRow {
  int iteration = 0;
  double objective = 0.0;
  double map_1_to_2 = 0.0;
  double map_2_to_1 = 0.0;
};

std::vector<ConvergenceRow> convergence_run(const Matrix& x1,
                                            const Matrix& x2,
                                            const Matrix& labels,
                                            const TrainConfig& config,
                                            double query_fraction);

}  // namespace fddh
