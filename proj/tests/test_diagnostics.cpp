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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "common.hpp"
#include "diagnostics.hpp"
#include "doctest.h"
#include "model.hpp"
#include "test_support.hpp"

using fddh::Matrix;

TEST_CASE("error terms match their definitions and kappa equals sqrt(c)") {
  fddh::RandomGenerator rng(1);
  const int q = 8, c = 4, n = 15;
  const Matrix basis = fddh::random_orthonormal(q, c, rng);
  const Matrix labels = testsup::random_labels(c, n, rng);
  const Matrix codes = testsup::random_signs(q, n, rng);
  const auto terms = fddh::error_terms(basis, labels, codes);
  CHECK((terms.forward - (codes - basis * labels)).norm() == 0.0);
  CHECK((terms.backward - (labels - basis.transpose() * codes)).norm() == 0.0);
  // Frobenius norm of an orthonormal-column basis is sqrt(c).
  CHECK(terms.kappa == doctest::Approx(std::sqrt(4.0)).epsilon(1e-12));
}

TEST_CASE("the two-sided pairwise bound is a tautology, so zero violations") {
  // The bound follows from the triangle inequality alone, so it must hold
  // for arbitrary (not just trained) basis/codes/labels.
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    fddh::RandomGenerator rng(seed);
    const int q = 12, c = 5, n = 40;
    const Matrix basis = fddh::random_orthonormal(q, c, rng);
    const Matrix labels = testsup::random_labels(c, n, rng);
    const Matrix codes = testsup::random_signs(q, n, rng);
    const auto terms = fddh::error_terms(basis, labels, codes);
    const auto stats =
        fddh::pairwise_bound_check(terms, labels, codes, 3000, seed);
    CHECK(stats.pairs == 3000);
    CHECK(stats.upper_violations == 0);
    CHECK(stats.lower_violations == 0);
    CHECK(stats.kappa == doctest::Approx(std::sqrt(5.0)));
    // Histograms only cover distinct-label pairs.
    const auto total_binned = [](const fddh::Histogram& h) {
      return std::accumulate(h.counts.begin(), h.counts.end(),
                             std::uint64_t{0});
    };
    CHECK(total_binned(stats.upper_error_hist) ==
          stats.pairs - stats.pairs_same_label);
    CHECK(total_binned(stats.lower_error_hist) ==
          stats.pairs - stats.pairs_same_label);
  }
}

TEST_CASE("pairwise sampling is deterministic in the seed") {
  fddh::RandomGenerator rng(9);
  const Matrix basis = fddh::random_orthonormal(8, 3, rng);
  const Matrix labels = testsup::random_labels(3, 25, rng);
  const Matrix codes = testsup::random_signs(8, 25, rng);
  const auto terms = fddh::error_terms(basis, labels, codes);
  const auto a = fddh::pairwise_bound_check(terms, labels, codes, 500, 7);
  const auto b = fddh::pairwise_bound_check(terms, labels, codes, 500, 7);
  CHECK(a.pairs_same_label == b.pairs_same_label);
  CHECK(a.upper_frac_within_tenth == b.upper_frac_within_tenth);
  CHECK(a.upper_error_hist.counts == b.upper_error_hist.counts);
}

TEST_CASE("histogram bins cover the value range") {
  const std::vector<double> values = {0.0, 0.5, 1.0, 1.5, 2.0};
  const auto h = fddh::make_histogram(values, 4);
  REQUIRE(h.counts.size() == 4);
  REQUIRE(h.centers.size() == 4);
  CHECK(h.bin_width == doctest::Approx(0.5));
  CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}) ==
        values.size());
  // Centers sit mid-bin.
  CHECK(h.centers[0] == doctest::Approx(0.25));
  CHECK(h.centers[3] == doctest::Approx(1.75));
  // The max value lands in the last bin via clamping.
  CHECK(h.counts[3] >= 1);
}

TEST_CASE("synthetic data has the documented shape and label pattern") {
  const auto ds = fddh::synth_dataset(40, 4, 6, 5, 0.1, 3);
  REQUIRE(ds.x1.rows() == 6);
  REQUIRE(ds.x1.cols() == 40);
  REQUIRE(ds.x2.rows() == 5);
  REQUIRE(ds.x2.cols() == 40);
  REQUIRE(ds.labels.rows() == 4);
  REQUIRE(ds.labels.cols() == 40);
  for (int j = 0; j < 40; ++j) {
    CHECK(ds.labels(j % 4, j) == 1.0);  // round-robin primary label
    const double count = ds.labels.col(j).sum();
    CHECK(count >= 1.0);
    CHECK(count <= 2.0);
  }
  CHECK(ds.x1.allFinite());
  CHECK(ds.x2.allFinite());
}

TEST_CASE("growing a synthetic set only appends samples") {
  // The generator draws prototypes first and then per-sample values in
  // order, so a larger set extends a smaller one without disturbing it.
  const auto small = fddh::synth_dataset(30, 3, 5, 4, 0.2, 11);
  const auto big = fddh::synth_dataset(31, 3, 5, 4, 0.2, 11);
  CHECK(big.x1.leftCols(30) == small.x1);
  CHECK(big.x2.leftCols(30) == small.x2);
  CHECK(big.labels.leftCols(30) == small.labels);
}

TEST_CASE("zero noise collapses samples onto prototype means") {
  const auto ds = fddh::synth_dataset(12, 3, 4, 4, 0.0, 5);
  // Samples with identical label sets must coincide exactly.
  for (int a = 0; a < 12; ++a)
    for (int b = a + 1; b < 12; ++b) {
      if (ds.labels.col(a) == ds.labels.col(b)) {
        CHECK(ds.x1.col(a) == ds.x1.col(b));
        CHECK(ds.x2.col(a) == ds.x2.col(b));
      }
    }
}

TEST_CASE("convergence run reports one row per sweep plus the start") {
  const auto ds = fddh::synth_dataset(120, 3, 8, 7, 0.15, 2);
  fddh::TrainConfig tc;
  tc.hp.code_length = 8;
  tc.hp.max_iters = 4;
  tc.hp.tol = 1e-12;  // force all sweeps to run
  tc.anchors = 32;
  tc.width_samples = 32;
  tc.seed = 5;
  const auto rows = fddh::convergence_run(ds.x1, ds.x2, ds.labels, tc, 0.2);
  REQUIRE(rows.size() == 5);  // initial state + 4 sweeps
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].iteration == static_cast<int>(i));
    CHECK(std::isfinite(rows[i].objective));
    CHECK(rows[i].map_1_to_2 >= 0.0);
    CHECK(rows[i].map_1_to_2 <= 1.0);
    CHECK(rows[i].map_2_to_1 >= 0.0);
    CHECK(rows[i].map_2_to_1 <= 1.0);
  }
  // The recorded objective decreases monotonically (small slack).
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].objective <=
          rows[i - 1].objective + 1e-9 * std::max(rows[i - 1].objective, 1.0));
  }
}

TEST_CASE("stability experiment produces decaying drift on a tiny ladder") {
  fddh::StabilityConfig cfg;
  cfg.sizes = {128, 256, 512};
  cfg.seeds = {1, 2};
  cfg.classes = 3;
  cfg.d1 = 8;
  cfg.d2 = 6;
  cfg.code_length = 8;
  cfg.anchors = 24;
  cfg.width_samples = 24;
  cfg.train_iters = 3;
  cfg.batch = 32;
  const auto report = fddh::stability_experiment(cfg);
  REQUIRE(report.points.size() == 3);
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& p = report.points[i];
    CHECK(p.train_size == cfg.sizes[i]);
    CHECK(p.total_size == cfg.sizes[i] + cfg.batch);
    CHECK(p.mean_drift >= 0.0);
    CHECK(std::isfinite(p.bound));
    CHECK(p.bound > 0.0);
    REQUIRE(p.per_seed.size() == 2);
    // Drift stays below the theoretical ceiling.
    CHECK(p.mean_drift <= p.bound);
  }
  // Drift shrinks as the training set grows (allow slack for tiny sizes).
  CHECK(report.points.back().mean_drift <
        report.points.front().mean_drift + 1e-12);
  CHECK(report.slope < 0.0);
}
