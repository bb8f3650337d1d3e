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

#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "retrieval.hpp"

namespace fddh {

namespace {

// Seed-derivation purposes for the synthetic generator.
constexpr std::uint64_t kPrototype1Stream = 0;
constexpr std::uint64_t kPrototype2Stream = 1;
constexpr std::uint64_t kLabelStream = 2;
constexpr std::uint64_t kNoise1Stream = 3;
constexpr std::uint64_t kNoise2Stream = 4;

// Slack for the pairwise bound comparisons; the inequalities hold exactly
// in real arithmetic, this only absorbs rounding in the norms.
constexpr double kBoundSlack = 1e-9;

}  // namespace

ErrorTerms error_terms(const Matrix& basis, const Matrix& labels,
                       const Matrix& codes) {
  require(basis.rows() == codes.rows(), Status::kShapeError,
          MessageBuilder() << "basis emits " << basis.rows()
                           << "-bit codes but codes have " << codes.rows()
                           << " rows");
  require(basis.cols() == labels.rows(), Status::kShapeError,
          MessageBuilder() << "basis expects " << basis.cols()
                           << " label classes, labels have " << labels.rows());
  require(labels.cols() == codes.cols(), Status::kShapeError,
          MessageBuilder() << labels.cols() << " labels for " << codes.cols()
                           << " codes");
  ErrorTerms terms;
  terms.forward = codes - basis * labels;
  terms.backward = labels - basis.transpose() * codes;
  terms.kappa = basis.norm();
  return terms;
}

Histogram make_histogram(const std::vector<double>& values, int bins) {
  require(bins >= 1, Status::kParamError, "histogram needs >= 1 bin");
  Histogram h;
  if (values.empty()) return h;
  double max_value = 0.0;
  for (double v : values) max_value = std::max(max_value, v);
  if (max_value <= 0.0) max_value = 1e-12;
  h.bin_width = max_value / bins;
  h.counts.assign(bins, 0);
  h.centers.resize(bins);
  for (int b = 0; b < bins; ++b) h.centers[b] = (b + 0.5) * h.bin_width;
  for (double v : values) {
    int b = static_cast<int>(v / h.bin_width);
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

PairwiseBoundStats pairwise_bound_check(const ErrorTerms& terms,
                                        const Matrix& labels,
                                        const Matrix& codes,
                                        std::uint64_t pair_count,
                                        std::uint64_t seed) {
  const auto n = labels.cols();
  require(n >= 2, Status::kParamError,
          "pairwise check needs at least two samples");
  require(pair_count >= 1, Status::kParamError,
          "pairwise check needs at least one pair");
  require(terms.forward.cols() == n && terms.backward.cols() == n,
          Status::kShapeError, "error terms do not cover the sample set");

  RandomGenerator rng(seed);
  PairwiseBoundStats stats;
  stats.kappa = terms.kappa;
  std::vector<double> upper_errors;
  std::vector<double> lower_errors;
  std::uint64_t upper_small = 0;
  std::uint64_t lower_small = 0;

  for (std::uint64_t p = 0; p < pair_count; ++p) {
    const auto i = static_cast<Eigen::Index>(
        rng.uniform_below(static_cast<std::uint64_t>(n)));
    auto j = static_cast<Eigen::Index>(
        rng.uniform_below(static_cast<std::uint64_t>(n - 1)));
    if (j >= i) ++j;  // uniform over distinct pairs

    const double dy = (labels.col(i) - labels.col(j)).norm();
    const double dh = (codes.col(i) - codes.col(j)).norm();
    const double eps1 = (terms.forward.col(i) - terms.forward.col(j)).norm();
    const double eps2 =
        (terms.backward.col(i) - terms.backward.col(j)).norm();

    ++stats.pairs;
    const double slack = kBoundSlack * (1.0 + dh);
    if (dh > terms.kappa * dy + eps1 + slack) ++stats.upper_violations;
    if (dy / terms.kappa - eps2 > dh + slack) ++stats.lower_violations;

    const bool same_label =
        (labels.col(i).array() == labels.col(j).array()).all();
    if (same_label) {
      ++stats.pairs_same_label;
      continue;
    }
    const double upper_err = eps1 / (terms.kappa * dy);
    const double lower_err = terms.kappa * eps2 / dy;
    upper_errors.push_back(upper_err);
    lower_errors.push_back(lower_err);
    if (upper_err <= 0.1) ++upper_small;
    if (lower_err <= 0.1) ++lower_small;
  }

  stats.upper_error_hist = make_histogram(upper_errors, 50);
  stats.lower_error_hist = make_histogram(lower_errors, 50);
  const double distinct =
      static_cast<double>(stats.pairs - stats.pairs_same_label);
  if (distinct > 0) {
    stats.upper_frac_within_tenth = upper_small / distinct;
    stats.lower_frac_within_tenth = lower_small / distinct;
  }
  return stats;
}

SynthDataset synth_dataset(int n, int classes, int d1, int d2, double noise,
                           std::uint64_t seed) {
  require(n >= 1, Status::kParamError, "synthetic data needs >= 1 sample");
  require(classes >= 1, Status::kParamError,
          "synthetic data needs >= 1 class");
  require(d1 >= 1 && d2 >= 1, Status::kParamError,
          "synthetic data needs positive feature dimensions");
  require(noise >= 0.0, Status::kParamError, "noise level must be >= 0");

  RandomGenerator root(seed);
  RandomGenerator proto1_rng = root.derive(kPrototype1Stream);
  RandomGenerator proto2_rng = root.derive(kPrototype2Stream);
  RandomGenerator label_rng = root.derive(kLabelStream);
  RandomGenerator noise1_rng = root.derive(kNoise1Stream);
  RandomGenerator noise2_rng = root.derive(kNoise2Stream);

  // Prototypes are drawn up front and every per-sample draw happens in
  // sample order, so generating n + 1 samples reproduces the first n
  // exactly plus one fresh independent sample.
  const Matrix proto1 = gaussian_matrix(d1, classes, proto1_rng);
  const Matrix proto2 = gaussian_matrix(d2, classes, proto2_rng);

  SynthDataset ds;
  ds.x1.resize(d1, n);
  ds.x2.resize(d2, n);
  ds.labels = Matrix::Zero(classes, n);
  for (int i = 0; i < n; ++i) {
    const int primary = i % classes;
    ds.labels(primary, i) = 1.0;
    if (classes >= 2 && label_rng.uniform01() < 0.5) {
      int second = static_cast<int>(label_rng.uniform_below(
          static_cast<std::uint64_t>(classes - 1)));
      if (second >= primary) ++second;
      ds.labels(second, i) = 1.0;
    }
    Vector mean1 = Vector::Zero(d1);
    Vector mean2 = Vector::Zero(d2);
    double member_count = 0.0;
    for (int cls = 0; cls < classes; ++cls) {
      if (ds.labels(cls, i) == 1.0) {
        mean1 += proto1.col(cls);
        mean2 += proto2.col(cls);
        member_count += 1.0;
      }
    }
    mean1 /= member_count;
    mean2 /= member_count;
    for (int r = 0; r < d1; ++r)
      ds.x1(r, i) = mean1(r) + noise * noise1_rng.gaussian();
    for (int r = 0; r < d2; ++r)
      ds.x2(r, i) = mean2(r) + noise * noise2_rng.gaussian();
  }
  return ds;
}

StabilityReport stability_experiment(const StabilityConfig& config) {
  require(!config.sizes.empty(), Status::kParamError,
          "stability experiment needs at least one training size");
  require(!config.seeds.empty(), Status::kParamError,
          "stability experiment needs at least one seed");
  require(config.batch >= 1, Status::kParamError,
          "stability experiment needs a positive batch size");
  require(config.modality == 1 || config.modality == 2, Status::kParamError,
          MessageBuilder() << "modality must be 1 or 2, got "
                           << config.modality);
  require(config.gamma > 0.0, Status::kParamError,
          "ridge weight must be > 0");

  StabilityReport report;
  for (int size : config.sizes) {
    require(size >= 2, Status::kParamError,
            MessageBuilder() << "training size must be >= 2, got " << size);
    StabilityPoint point;
    point.train_size = size;
    point.total_size = size + config.batch;
    double bound_sum = 0.0;
    for (std::uint64_t seed : config.seeds) {
      // One extra sample: the iid replacement for the perturbed batch.
      const SynthDataset ds =
          synth_dataset(point.total_size + 1, config.classes, config.d1,
                        config.d2, config.noise, seed);
      const Matrix x = config.modality == 1 ? ds.x1 : ds.x2;

      TrainConfig tc;
      tc.hp.code_length = config.code_length;
      tc.hp.mu = config.mu;
      tc.hp.theta = config.theta;
      tc.hp.delta = config.delta;
      tc.hp.max_iters = config.train_iters;
      tc.hp.tol = 1e-12;  // run the full sweep budget at every size
      tc.anchors = std::min(config.anchors, size);
      tc.width_samples = std::min(config.width_samples, size);
      tc.seed = seed;
      // The decay bound is stated for the sample-normalized objective;
      // in unnormalized form the ridge weight grows with (n + m) / k.
      tc.gamma = config.gamma * point.total_size / tc.anchors;
      const Model trained = train_model(
          ds.x1.leftCols(size), ds.x2.leftCols(size),
          ds.labels.leftCols(size), tc);

      const Matrix batch_a = x.middleCols(size, config.batch);
      Matrix batch_b = batch_a;
      batch_b.col(config.batch - 1) = x.col(point.total_size);

      Model run_a = trained;
      Model run_b = trained;
      update_model(run_a, config.modality, batch_a, 20);
      update_model(run_b, config.modality, batch_b, 20);
      const Matrix& pa = config.modality == 1 ? run_a.proj1.p : run_a.proj2.p;
      const Matrix& pb = config.modality == 1 ? run_b.proj1.p : run_b.proj2.p;
      const double drift = (pa - pb).norm();
      point.per_seed.push_back(drift);

      // Empirical stand-in for the bound's residual ceiling M: the worst
      // training-sample residual under the offline projection.
      const Matrix phi_train =
          map_queries(trained, config.modality, x.leftCols(size));
      const Projection& proj =
          config.modality == 1 ? trained.proj1 : trained.proj2;
      const double m_est = (trained.codes - proj.p * phi_train)
                               .colwise()
                               .norm()
                               .maxCoeff();
      const double dim = tc.anchors;
      bound_sum +=
          2.0 * dim * dim * m_est / (config.gamma * point.total_size);
    }
    double drift_sum = 0.0;
    for (double d : point.per_seed) drift_sum += d;
    point.mean_drift = drift_sum / point.per_seed.size();
    point.bound = bound_sum / point.per_seed.size();
    report.points.push_back(std::move(point));
  }

  // Log-log least squares through the non-degenerate points.
  std::vector<double> xs, ys;
  for (const StabilityPoint& p : report.points) {
    if (p.mean_drift > 0.0) {
      xs.push_back(std::log(static_cast<double>(p.total_size)));
      ys.push_back(std::log(p.mean_drift));
    } else {
      ++report.excluded_points;
    }
  }
  if (xs.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    report.slope = sxy / sxx;
    report.intercept = my - report.slope * mx;
  }
  return report;
}

std::vector<ConvergenceRow> convergence_run(const Matrix& x1,
                                            const Matrix& x2,
                                            const Matrix& labels,
                                            const TrainConfig& config,
                                            double query_fraction) {
  require(query_fraction > 0.0 && query_fraction < 1.0, Status::kParamError,
          MessageBuilder() << "query fraction must lie in (0, 1), got "
                           << query_fraction);
  const auto n = labels.cols();
  const auto n_query = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::llround(query_fraction * n)));
  const auto n_train = n - n_query;
  require(n_train >= 2, Status::kParamError,
          MessageBuilder() << "query fraction " << query_fraction
                           << " leaves only " << n_train
                           << " training samples");
  require(x1.cols() == n && x2.cols() == n, Status::kShapeError,
          "feature and label sample counts disagree");

  const Matrix train_labels = labels.leftCols(n_train);
  const Matrix query_labels = labels.rightCols(n_query);

  PreparedInputs prep = prepare_inputs(x1.leftCols(n_train),
                                       x2.leftCols(n_train), train_labels,
                                       config);
  // Queries go through the same centering and feature maps as training.
  Matrix q1_raw = x1.rightCols(n_query);
  Matrix q2_raw = x2.rightCols(n_query);
  q1_raw.colwise() -= prep.f1.center;
  q2_raw.colwise() -= prep.f2.center;
  const Matrix qphi1 = config.variant == TrainVariant::kNoRelaxNoKernel
                           ? q1_raw
                           : apply_kernel(prep.kernel1, q1_raw);
  const Matrix qphi2 = config.variant == TrainVariant::kNoRelaxNoKernel
                           ? q2_raw
                           : apply_kernel(prep.kernel2, q2_raw);

  std::vector<ConvergenceRow> rows;
  const IterationObserver observer = [&](int iteration,
                                         const TrainState& state) {
    ConvergenceRow row;
    row.iteration = iteration;
    row.objective = state.objective_trace.back();
    // Projection snapshot for this sweep's codes; queries are scored
    // against the in-sample codes as the database.
    const Matrix p1 = fit_projection(state.H, prep.phi1, config.gamma).p;
    const Matrix p2 = fit_projection(state.H, prep.phi2, config.gamma).p;
    row.map_1_to_2 = mean_average_precision(
        project_signs(p1, qphi1), query_labels, state.H, train_labels);
    row.map_2_to_1 = mean_average_precision(
        project_signs(p2, qphi2), query_labels, state.H, train_labels);
    rows.push_back(row);
  };
  run_alternating(train_labels, prep.phi1, prep.phi2, config.hp,
                  prep.optimizer_seed, config.variant, observer);
  return rows;
}

}  // namespace fddh
