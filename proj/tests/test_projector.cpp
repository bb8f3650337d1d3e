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

#include <cmath>
#include <string>

#include "common.hpp"
#include "doctest.h"
#include "projector.hpp"
#include "test_support.hpp"

using fddh::Error;
using fddh::Matrix;
using fddh::Projection;

TEST_CASE("fit_projection satisfies the normal equations") {
  fddh::RandomGenerator rng(1);
  const int q = 8, k = 12, n = 40;
  const Matrix h = testsup::random_signs(q, n, rng);
  const Matrix phi = fddh::gaussian_matrix(k, n, rng);
  const double gamma = 0.05;
  const Projection proj = fddh::fit_projection(h, phi, gamma);

  REQUIRE(proj.p.rows() == q);
  REQUIRE(proj.p.cols() == k);
  // Residual of P (Phi Phi^T + gamma I) = H Phi^T, checked directly.
  const Matrix lhs =
      proj.p * (phi * phi.transpose() + gamma * Matrix::Identity(k, k));
  const Matrix rhs = h * phi.transpose();
  CHECK((lhs - rhs).norm() / rhs.norm() < 1e-10);

  // Caches are exactly the sufficient statistics.
  CHECK((proj.gram - phi * phi.transpose()).norm() < 1e-10);
  CHECK((proj.cross - rhs).norm() == 0.0);
  CHECK(proj.gamma == gamma);
  // Gram is exactly symmetric by construction.
  CHECK(proj.gram == Matrix(proj.gram.transpose()));
}

TEST_CASE("fit_projection matches an explicit dense solve") {
  fddh::RandomGenerator rng(2);
  const Matrix h = testsup::random_signs(6, 30, rng);
  const Matrix phi = fddh::gaussian_matrix(9, 30, rng);
  const double gamma = 1e-2;
  const Projection proj = fddh::fit_projection(h, phi, gamma);
  const Matrix a = phi * phi.transpose() + gamma * Matrix::Identity(9, 9);
  const Matrix direct = h * phi.transpose() * a.inverse();
  CHECK((proj.p - direct).norm() < 1e-8);
}

TEST_CASE("project_signs emits plus-minus one with ties going positive") {
  Matrix p(2, 2);
  p << 1, 0, 0, 1;
  Matrix phi(2, 3);
  phi << 0.5, -0.5, 0.0,
         -2.0, 3.0, -0.0;
  const Matrix s = fddh::project_signs(p, phi);
  Matrix expected(2, 3);
  expected << 1, -1, 1,
              -1, 1, 1;  // both zeros resolve to +1
  CHECK(s == expected);
}

TEST_CASE("fit_projection validates its inputs") {
  fddh::RandomGenerator rng(3);
  const Matrix h = testsup::random_signs(4, 10, rng);
  const Matrix phi = fddh::gaussian_matrix(6, 10, rng);
  CHECK_THROWS_AS(fddh::fit_projection(h, phi, 0.0), Error);
  CHECK_THROWS_AS(fddh::fit_projection(h, phi, -1.0), Error);
  CHECK_THROWS_AS(
      fddh::fit_projection(h, fddh::gaussian_matrix(6, 11, rng), 1e-2), Error);
}

TEST_CASE("online update converges and assigns sign codes") {
  fddh::RandomGenerator rng(4);
  const Matrix h = testsup::random_signs(6, 50, rng);
  const Matrix phi = fddh::gaussian_matrix(10, 50, rng);
  Projection proj = fddh::fit_projection(h, phi, 1e-2);
  const Matrix batch = fddh::gaussian_matrix(10, 7, rng);
  const auto result = fddh::online_update(proj, batch, 20);
  REQUIRE(result.codes.rows() == 6);
  REQUIRE(result.codes.cols() == 7);
  CHECK((result.codes.array().abs() == 1.0).all());
  CHECK(result.rounds >= 1);
  // Terminating below the cap means a genuine fixed point was reached.
  REQUIRE(result.rounds < 20);
  // At the fixed point the final P re-signs the batch to the same codes.
  CHECK(fddh::project_signs(proj.p, batch) == result.codes);
}

TEST_CASE("online update folds the batch into the caches exactly") {
  fddh::RandomGenerator rng(5);
  const Matrix h = testsup::random_signs(5, 40, rng);
  const Matrix phi = fddh::gaussian_matrix(8, 40, rng);
  Projection proj = fddh::fit_projection(h, phi, 1e-2);
  const Matrix gram_before = proj.gram;
  const Matrix cross_before = proj.cross;
  const Matrix batch = fddh::gaussian_matrix(8, 6, rng);
  const auto result = fddh::online_update(proj, batch, 20);
  REQUIRE(result.rounds < 20);  // reached a fixed point
  CHECK((proj.gram - (gram_before + batch * batch.transpose())).norm() <
        1e-10);
  CHECK((proj.cross -
         (cross_before + result.codes * batch.transpose())).norm() == 0.0);
  // The refreshed P solves the normal equations of the grown caches.
  const int k = 8;
  const Matrix lhs =
      proj.p * (proj.gram + proj.gamma * Matrix::Identity(k, k));
  CHECK((lhs - proj.cross).norm() / proj.cross.norm() < 1e-10);
}

TEST_CASE("sequential online updates equal one batched refit of the caches") {
  fddh::RandomGenerator rng(6);
  const Matrix h = testsup::random_signs(5, 30, rng);
  const Matrix phi = fddh::gaussian_matrix(7, 30, rng);
  Projection seq = fddh::fit_projection(h, phi, 1e-2);
  const Matrix b1 = fddh::gaussian_matrix(7, 4, rng);
  const Matrix b2 = fddh::gaussian_matrix(7, 5, rng);
  const auto r1 = fddh::online_update(seq, b1, 20);
  const auto r2 = fddh::online_update(seq, b2, 20);
  REQUIRE(r1.rounds < 20);
  REQUIRE(r2.rounds < 20);

  // Rebuild from scratch with the accumulated samples and codes: the
  // sufficient statistics must coincide.
  Matrix all_phi(7, 39);
  all_phi << phi, b1, b2;
  Matrix all_h(5, 39);
  all_h << h, r1.codes, r2.codes;
  const Projection batch = fddh::fit_projection(all_h, all_phi, 1e-2);
  CHECK((seq.gram - batch.gram).norm() < 1e-9);
  CHECK((seq.cross - batch.cross).norm() < 1e-9);
  CHECK((seq.p - batch.p).norm() < 1e-9);
}

TEST_CASE("online update error paths") {
  fddh::RandomGenerator rng(7);
  const Matrix h = testsup::random_signs(4, 20, rng);
  const Matrix phi = fddh::gaussian_matrix(6, 20, rng);

  SUBCASE("empty batch") {
    Projection proj = fddh::fit_projection(h, phi, 1e-2);
    CHECK_THROWS_AS(fddh::online_update(proj, Matrix(6, 0), 20), Error);
  }
  SUBCASE("wrong feature dimension") {
    Projection proj = fddh::fit_projection(h, phi, 1e-2);
    CHECK_THROWS_AS(fddh::online_update(proj, Matrix::Ones(5, 2), 20), Error);
  }
  SUBCASE("bad round limit") {
    Projection proj = fddh::fit_projection(h, phi, 1e-2);
    CHECK_THROWS_AS(fddh::online_update(proj, Matrix::Ones(6, 2), 0), Error);
  }
  SUBCASE("missing caches") {
    Projection bare;
    bare.p = Matrix::Ones(4, 6);
    bare.gamma = 1e-2;
    try {
      fddh::online_update(bare, Matrix::Ones(6, 2), 20);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.status() == fddh::Status::kStateError);
      CHECK(std::string(e.what()).find("cached") != std::string::npos);
    }
  }
}

TEST_CASE("online updates are deterministic") {
  fddh::RandomGenerator rng(8);
  const Matrix h = testsup::random_signs(5, 25, rng);
  const Matrix phi = fddh::gaussian_matrix(7, 25, rng);
  const Matrix batch = fddh::gaussian_matrix(7, 3, rng);
  Projection a = fddh::fit_projection(h, phi, 1e-2);
  Projection b = fddh::fit_projection(h, phi, 1e-2);
  const auto ra = fddh::online_update(a, batch, 20);
  const auto rb = fddh::online_update(b, batch, 20);
  CHECK(ra.codes == rb.codes);
  CHECK(ra.rounds == rb.rounds);
  CHECK(a.p == b.p);
  CHECK(a.gram == b.gram);
}
