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

#include "trainer.hpp"

#include <cmath>

#include "dataset.hpp"

namespace fddh {

namespace {

constexpr double kOrthoTol = 1e-10;
constexpr double kDraggingTol = -1e-12;

// Seed-derivation purposes for the random start.
constexpr std::uint64_t kBasisStream = 0;
constexpr std::uint64_t kRotation1Stream = 1;
constexpr std::uint64_t kRotation2Stream = 2;
constexpr std::uint64_t kCodesStream = 3;

double sign_of(double v) { return v >= 0.0 ? 1.0 : -1.0; }

void check_state(const TrainState& s, const Matrix& labels, int iteration) {
  const auto c = labels.rows();
  const auto q = s.C.rows();
  const auto ortho_err = [](const Matrix& m) {
    return (m.transpose() * m -
            Matrix::Identity(m.cols(), m.cols()))
        .cwiseAbs()
        .maxCoeff();
  };
  const auto bad = [iteration](const std::string& what) {
    fail(Status::kStateError,
         MessageBuilder() << "internal consistency failure at iteration "
                          << iteration << ": " << what);
  };
  if (ortho_err(s.C) >= kOrthoTol) bad("basis columns lost orthonormality");
  if (ortho_err(s.R1) >= kOrthoTol)
    bad("modality-1 rotation lost orthonormality");
  if (ortho_err(s.R2) >= kOrthoTol)
    bad("modality-2 rotation lost orthonormality");
  if (std::abs(s.C.norm() - std::sqrt(static_cast<double>(c))) >= kOrthoTol)
    bad("basis Frobenius norm drifted from sqrt(c)");
  for (Eigen::Index j = 0; j < s.H.cols(); ++j)
    for (Eigen::Index i = 0; i < q; ++i)
      if (s.H(i, j) != 1.0 && s.H(i, j) != -1.0) bad("codes left {-1, +1}");
  if (((s.Ybar - labels).cwiseProduct(s.B)).minCoeff() < kDraggingTol)
    bad("dragged labels moved against their direction");
}

}  // namespace

const char* variant_name(TrainVariant v) {
  switch (v) {
    case TrainVariant::kFull: return "full";
    case TrainVariant::kNoRelax: return "no_relax";
    case TrainVariant::kNoRelaxNoKernel: return "no_relax_no_kernel";
  }
  return "unknown";
}

TrainVariant variant_from_name(const std::string& name) {
  if (name == "full") return TrainVariant::kFull;
  if (name == "no_relax") return TrainVariant::kNoRelax;
  if (name == "no_relax_no_kernel") return TrainVariant::kNoRelaxNoKernel;
  fail(Status::kParamError,
       MessageBuilder() << "unknown training variant '" << name
                        << "' (expected full, no_relax, or "
                           "no_relax_no_kernel)");
}

Matrix procrustes_max(const Matrix& m, int rank) {
  require(m.rows() >= 1 && m.cols() >= 1, Status::kShapeError,
          "orthonormal factor: empty input");
  require(rank >= 1 && rank <= std::min(m.rows(), m.cols()),
          Status::kParamError,
          MessageBuilder() << "orthonormal factor: rank " << rank
                           << " out of range for " << m.rows() << " x "
                           << m.cols() << " input");
  require(m.allFinite(), Status::kNumericError,
          "orthonormal factor: non-finite input");
  if ((m.array() == 0.0).all()) {
    Matrix out = Matrix::Zero(m.cols(), m.rows());
    for (int i = 0; i < rank; ++i) out(i, i) = 1.0;
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  require(svd.info() == Eigen::Success, Status::kNumericError,
          "orthonormal factor: SVD did not converge");
  return svd.matrixV().leftCols(rank) * svd.matrixU().leftCols(rank).transpose();
}

Matrix update_basis(const TrainState& s, const Matrix& phi1,
                    const Matrix& phi2, const Hyperparams& hp) {
  // q x c maximizer of trace(Ybar (H^T + mu Phi1^T R1 + theta Phi2^T R2) C).
  Matrix inner = s.H.transpose();
  if (hp.mu != 0.0) inner.noalias() += hp.mu * (phi1.transpose() * s.R1);
  if (hp.theta != 0.0) inner.noalias() += hp.theta * (phi2.transpose() * s.R2);
  const Matrix target = s.Ybar * inner;  // c x q
  return procrustes_max(target, static_cast<int>(target.rows()));
}

Matrix update_rotation(const Matrix& c_mat, const Matrix& ybar,
                       const Matrix& phi) {
  const Matrix target = (c_mat * ybar) * phi.transpose();  // q x k
  return procrustes_max(target, static_cast<int>(target.rows()));
}

Matrix update_codes(const Matrix& c_mat, const Matrix& ybar) {
  return (c_mat * ybar).unaryExpr(&sign_of);
}

Matrix update_dragged_labels(const TrainState& s, const Matrix& labels,
                             const Matrix& phi1, const Matrix& phi2,
                             const Hyperparams& hp) {
  Matrix inner = s.H;
  if (hp.mu != 0.0) inner.noalias() += hp.mu * (s.R1.transpose() * phi1);
  if (hp.theta != 0.0) inner.noalias() += hp.theta * (s.R2.transpose() * phi2);
  Matrix ybar = (s.C.transpose() * inner) /
                (1.0 + hp.mu + hp.theta + hp.delta);
  // Exact minimizer under the dragging constraint: entries may only move
  // up from 1 where the label is set and down from 0 where it is not.
  for (Eigen::Index j = 0; j < ybar.cols(); ++j) {
    for (Eigen::Index i = 0; i < ybar.rows(); ++i) {
      if (labels(i, j) == 1.0) {
        ybar(i, j) = std::max(ybar(i, j), 1.0);
      } else {
        ybar(i, j) = std::min(ybar(i, j), 0.0);
      }
    }
  }
  return ybar;
}

double objective_value(const TrainState& s, const Matrix& phi1,
                       const Matrix& phi2, const Hyperparams& hp,
                       double delta_eff) {
  const Matrix embedded = s.C * s.Ybar;
  double value = (s.H - embedded).squaredNorm();
  if (hp.mu != 0.0) value += hp.mu * (phi1 - s.R1 * embedded).squaredNorm();
  if (hp.theta != 0.0)
    value += hp.theta * (phi2 - s.R2 * embedded).squaredNorm();
  if (delta_eff != 0.0) value += delta_eff * s.Ybar.squaredNorm();
  require(std::isfinite(value), Status::kNumericError,
          "objective value is not finite");
  return value;
}

TrainState run_alternating(const Matrix& labels, const Matrix& phi1,
                           const Matrix& phi2, const Hyperparams& hp,
                           std::uint64_t seed, TrainVariant variant,
                           const IterationObserver& observer) {
  check_label_matrix(labels, "label matrix");
  const auto n = labels.cols();
  const auto c = labels.rows();
  const int q = hp.code_length;
  require(phi1.cols() == n && phi2.cols() == n, Status::kShapeError,
          MessageBuilder() << "feature maps cover " << phi1.cols() << " and "
                           << phi2.cols() << " samples but labels cover " << n);
  require(q >= c, Status::kParamError,
          MessageBuilder() << "code length " << q
                           << " must be at least the label class count " << c);
  require(q <= phi1.rows() && q <= phi2.rows(), Status::kParamError,
          MessageBuilder() << "code length " << q
                           << " exceeds a feature map dimension ("
                           << phi1.rows() << ", " << phi2.rows() << ")");
  require(hp.mu >= 0.0 && hp.theta >= 0.0 && hp.delta >= 0.0,
          Status::kParamError, "weights mu, theta, delta must be >= 0");
  require(hp.tol > 0.0, Status::kParamError, "tolerance must be > 0");
  require(hp.max_iters >= 0, Status::kParamError,
          "iteration cap must be >= 0");
  require(phi1.allFinite() && phi2.allFinite(), Status::kNumericError,
          "feature maps contain non-finite entries");

  const bool drag = variant == TrainVariant::kFull;
  const double delta_eff = drag ? hp.delta : 0.0;

  RandomGenerator root(seed);
  RandomGenerator basis_rng = root.derive(kBasisStream);
  RandomGenerator rot1_rng = root.derive(kRotation1Stream);
  RandomGenerator rot2_rng = root.derive(kRotation2Stream);
  RandomGenerator codes_rng = root.derive(kCodesStream);

  TrainState s;
  s.C = random_orthonormal(q, static_cast<int>(c), basis_rng);
  s.R1 = random_orthonormal(static_cast<int>(phi1.rows()), q, rot1_rng);
  s.R2 = random_orthonormal(static_cast<int>(phi2.rows()), q, rot2_rng);
  s.H.resize(q, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (int i = 0; i < q; ++i) s.H(i, j) = codes_rng.sign();
  s.Ybar = labels;
  s.B = dragging_directions(labels);
  s.objective_trace.push_back(
      objective_value(s, phi1, phi2, hp, delta_eff));
  if (observer) observer(0, s);

  for (int iter = 1; iter <= hp.max_iters; ++iter) {
    s.C = update_basis(s, phi1, phi2, hp);
    s.R1 = update_rotation(s.C, s.Ybar, phi1);
    s.R2 = update_rotation(s.C, s.Ybar, phi2);
    s.H = update_codes(s.C, s.Ybar);
    if (drag) s.Ybar = update_dragged_labels(s, labels, phi1, phi2, hp);
    check_state(s, labels, iter);
    const double value = objective_value(s, phi1, phi2, hp, delta_eff);
    const double prev = s.objective_trace.back();
    s.objective_trace.push_back(value);
    s.iterations = iter;
    if (observer) observer(iter, s);
    if (std::abs(value - prev) / std::max(prev, 1e-12) < hp.tol) {
      s.converged = true;
      break;
    }
  }
  // Codes are re-emitted from the final basis and labels so they reflect
  // the state every other block settled on.
  if (s.iterations > 0) s.H = update_codes(s.C, s.Ybar);
  return s;
}

}  // namespace fddh
