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

#include "projector.hpp"

#include <Eigen/Cholesky>

namespace fddh {

namespace {

// Symmetric rank update keeps the cached Gram matrix exactly symmetric.
Matrix gram_of(const Matrix& phi) {
  Matrix gram = Matrix::Zero(phi.rows(), phi.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(phi);
  gram.triangularView<Eigen::StrictlyUpper>() =
      gram.transpose().triangularView<Eigen::StrictlyUpper>();
  return gram;
}

// P = cross * A^-1 with A = base + gamma I, via Cholesky of the SPD A.
Matrix ridge_solve(const Matrix& cross, const Matrix& base, double gamma) {
  Matrix a = base;
  a.diagonal().array() += gamma;
  Eigen::LLT<Matrix> llt(a);
  require(llt.info() == Eigen::Success, Status::kNumericError,
          "projection solve: regularized Gram matrix is not positive "
          "definite");
  return llt.solve(cross.transpose()).transpose();
}

}  // namespace

Projection fit_projection(const Matrix& codes, const Matrix& phi,
                          double gamma) {
  require(gamma > 0.0, Status::kParamError,
          MessageBuilder() << "ridge weight must be > 0, got " << gamma);
  require(codes.cols() == phi.cols(), Status::kShapeError,
          MessageBuilder() << "projection fit: " << codes.cols()
                           << " codes vs " << phi.cols()
                           << " feature-mapped samples");
  require(codes.cols() >= 1, Status::kShapeError,
          "projection fit: no samples");
  Projection proj;
  proj.gamma = gamma;
  proj.gram = gram_of(phi);
  proj.cross = codes * phi.transpose();
  proj.p = ridge_solve(proj.cross, proj.gram, gamma);
  return proj;
}

Matrix project_signs(const Matrix& p, const Matrix& phi) {
  require(p.cols() == phi.rows(), Status::kShapeError,
          MessageBuilder() << "projection expects " << p.cols()
                           << "-dimensional inputs, got " << phi.rows());
  return (p * phi).unaryExpr(
      [](double v) { return v >= 0.0 ? 1.0 : -1.0; });
}

OnlineResult online_update(Projection& proj, const Matrix& phi_batch,
                           int max_rounds) {
  require(proj.gram.rows() > 0, Status::kStateError,
          "online update: projection has no cached statistics");
  require(phi_batch.rows() == proj.gram.rows(), Status::kShapeError,
          MessageBuilder() << "online update: batch dimension "
                           << phi_batch.rows() << " does not match cache "
                           << proj.gram.rows());
  require(phi_batch.cols() >= 1, Status::kParamError,
          "online update: empty batch");
  require(max_rounds >= 1, Status::kParamError,
          "online update: round cap must be >= 1");

  // The refreshed system matrix is fixed across rounds (codes only enter
  // the right-hand side), so factor once up front.
  const Matrix batch_gram = gram_of(phi_batch);
  Matrix a = proj.gram + batch_gram;
  a.diagonal().array() += proj.gamma;
  Eigen::LLT<Matrix> llt(a);
  require(llt.info() == Eigen::Success, Status::kNumericError,
          "online update: regularized Gram matrix is not positive definite");

  OnlineResult result;
  result.codes = project_signs(proj.p, phi_batch);
  Matrix p = proj.p;
  for (int round = 1; round <= max_rounds; ++round) {
    const Matrix rhs = proj.cross + result.codes * phi_batch.transpose();
    p = llt.solve(rhs.transpose()).transpose();
    const Matrix refreshed = project_signs(p, phi_batch);
    result.rounds = round;
    if ((refreshed.array() == result.codes.array()).all()) break;
    result.codes = refreshed;
  }
  proj.p = std::move(p);
  proj.cross.noalias() += result.codes * phi_batch.transpose();
  proj.gram += batch_gram;
  return result;
}

}  // namespace fddh
