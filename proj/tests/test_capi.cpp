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

// Exercises the shared-library C interface the way an external consumer
// would: through handles and status codes only, with the C++ core used
// just to build fixtures.

#include <cstring>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "doctest.h"
#include "fddh/fddh.h"
#include "test_support.hpp"

namespace {

// Creates a C matrix handle from an Eigen matrix (row-major copy).
fddh_matrix* to_handle(const fddh::Matrix& m) {
  std::vector<double> data(static_cast<std::size_t>(m.rows()) *
                           static_cast<std::size_t>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      data[static_cast<std::size_t>(i) * m.cols() + j] = m(i, j);
  fddh_matrix* out = nullptr;
  REQUIRE(fddh_matrix_create(m.rows(), m.cols(), data.data(), &out) ==
          FDDH_OK);
  return out;
}

fddh::Matrix from_handle(const fddh_matrix* m) {
  const auto rows = fddh_matrix_rows(m);
  const auto cols = fddh_matrix_cols(m);
  std::vector<double> data(static_cast<std::size_t>(rows * cols));
  REQUIRE(fddh_matrix_copy_data(m, data.data()) == FDDH_OK);
  fddh::Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out(i, j) = data[static_cast<std::size_t>(i) * cols + j];
  return out;
}

struct Handles {
  fddh_matrix* x1 = nullptr;
  fddh_matrix* x2 = nullptr;
  fddh_matrix* labels = nullptr;
  ~Handles() {
    fddh_matrix_destroy(x1);
    fddh_matrix_destroy(x2);
    fddh_matrix_destroy(labels);
  }
};

// Small synthetic training trio shared by the model tests.
void make_dataset(Handles* h, int n = 160, std::uint64_t seed = 3) {
  const auto ds = fddh::synth_dataset(n, 4, 10, 8, 0.15, seed);
  h->x1 = to_handle(ds.x1);
  h->x2 = to_handle(ds.x2);
  h->labels = to_handle(ds.labels);
}

fddh_train_options small_options() {
  fddh_train_options opts;
  fddh_train_options_init(&opts);
  opts.code_length = 8;
  opts.max_iters = 6;
  opts.anchors = 32;
  opts.width_samples = 32;
  return opts;
}

}  // namespace

TEST_CASE("matrix handles store row-major data faithfully") {
  const double data[6] = {1, 2, 3, 4, 5, 6};
  fddh_matrix* m = nullptr;
  REQUIRE(fddh_matrix_create(2, 3, data, &m) == FDDH_OK);
  CHECK(fddh_matrix_rows(m) == 2);
  CHECK(fddh_matrix_cols(m) == 3);
  double v = 0.0;
  REQUIRE(fddh_matrix_get(m, 0, 1, &v) == FDDH_OK);
  CHECK(v == 2.0);
  REQUIRE(fddh_matrix_get(m, 1, 0, &v) == FDDH_OK);
  CHECK(v == 4.0);
  double out[6] = {0};
  REQUIRE(fddh_matrix_copy_data(m, out) == FDDH_OK);
  CHECK(std::memcmp(out, data, sizeof(data)) == 0);

  // Out-of-range access is a parameter error, not a crash.
  CHECK(fddh_matrix_get(m, 2, 0, &v) == FDDH_ERR_PARAM);
  CHECK(fddh_matrix_get(m, 0, 3, &v) == FDDH_ERR_PARAM);
  fddh_matrix_destroy(m);
}

TEST_CASE("null data gives zeros; invalid shapes are rejected") {
  fddh_matrix* m = nullptr;
  REQUIRE(fddh_matrix_create(2, 2, nullptr, &m) == FDDH_OK);
  double v = 1.0;
  REQUIRE(fddh_matrix_get(m, 1, 1, &v) == FDDH_OK);
  CHECK(v == 0.0);
  fddh_matrix_destroy(m);

  CHECK(fddh_matrix_create(0, 2, nullptr, &m) == FDDH_ERR_PARAM);
  CHECK(fddh_matrix_create(-1, 2, nullptr, &m) == FDDH_ERR_PARAM);
  // Zero columns are legal (empty batches).
  REQUIRE(fddh_matrix_create(3, 0, nullptr, &m) == FDDH_OK);
  CHECK(fddh_matrix_cols(m) == 0);
  fddh_matrix_destroy(m);
}

TEST_CASE("matrix slice and equality") {
  fddh::Matrix src(2, 4);
  src << 1, 2, 3, 4,
         5, 6, 7, 8;
  fddh_matrix* m = to_handle(src);
  fddh_matrix* slice = nullptr;
  REQUIRE(fddh_matrix_slice_cols(m, 1, 2, &slice) == FDDH_OK);
  CHECK(from_handle(slice) == src.middleCols(1, 2));

  fddh_matrix* same = to_handle(src.middleCols(1, 2));
  int eq = 0;
  REQUIRE(fddh_matrix_equal(slice, same, &eq) == FDDH_OK);
  CHECK(eq == 1);
  REQUIRE(fddh_matrix_equal(slice, m, &eq) == FDDH_OK);
  CHECK(eq == 0);

  CHECK(fddh_matrix_slice_cols(m, 3, 2, &slice) == FDDH_ERR_PARAM);
  fddh_matrix_destroy(same);
  fddh_matrix_destroy(slice);
  fddh_matrix_destroy(m);
}

TEST_CASE("matrix save and load round trip through the C surface") {
  testsup::TempDir tmp;
  fddh::RandomGenerator rng(1);
  fddh_matrix* m = to_handle(fddh::gaussian_matrix(4, 5, rng));
  const std::string bin = tmp.file("m.fdh");
  const std::string csv = tmp.file("m.csv");
  REQUIRE(fddh_matrix_save(m, bin.c_str(), 0) == FDDH_OK);
  REQUIRE(fddh_matrix_save(m, csv.c_str(), 1) == FDDH_OK);
  for (const auto& path : {bin, csv}) {
    fddh_matrix* back = nullptr;
    REQUIRE(fddh_matrix_load(path.c_str(), &back) == FDDH_OK);
    int eq = 0;
    REQUIRE(fddh_matrix_equal(m, back, &eq) == FDDH_OK);
    CHECK(eq == 1);
    fddh_matrix_destroy(back);
  }
  fddh_matrix_destroy(m);
}

TEST_CASE("status codes and messages surface through the boundary") {
  fddh_matrix* out = nullptr;
  CHECK(fddh_matrix_load("/nonexistent/bogus.fdh", &out) == FDDH_ERR_IO);
  const std::string msg = fddh_last_error();
  CHECK(msg.find("bogus.fdh") != std::string::npos);

  CHECK(fddh_matrix_load(nullptr, &out) == FDDH_ERR_PARAM);
  CHECK(std::string(fddh_last_error()).find("null") != std::string::npos);

  CHECK(std::string(fddh_status_name(FDDH_OK)) == "ok");
  CHECK(std::string(fddh_status_name(FDDH_ERR_IO)).size() > 0);
  CHECK(std::string(fddh_version()).size() > 0);
}

TEST_CASE("train options init and presets") {
  fddh_train_options opts;
  fddh_train_options_init(&opts);
  CHECK(opts.mu == 1e-2);
  CHECK(opts.theta == 1e-3);
  CHECK(opts.delta == 1e3);
  CHECK(opts.gamma == 1e-2);
  CHECK(opts.tol == 1e-5);
  CHECK(opts.code_length == 32);
  CHECK(opts.max_iters == 50);
  CHECK(opts.anchors == 500);
  CHECK(opts.width_samples == 500);
  CHECK(opts.seed == 0);
  CHECK(opts.variant == FDDH_VARIANT_FULL);

  REQUIRE(fddh_train_options_preset("pascal-voc", &opts) == FDDH_OK);
  CHECK(opts.mu == 1.0);
  CHECK(opts.theta == 1e-3);
  CHECK(opts.delta == 1e3);
  REQUIRE(fddh_train_options_preset("nus-wide", &opts) == FDDH_OK);
  CHECK(opts.mu == 1e-3);
  REQUIRE(fddh_train_options_preset("mirflickr", &opts) == FDDH_OK);
  CHECK(opts.mu == 1e-2);
  CHECK(fddh_train_options_preset("unknown", &opts) == FDDH_ERR_PARAM);
}

TEST_CASE("full train / encode / evaluate / save / load cycle") {
  testsup::TempDir tmp;
  Handles h;
  make_dataset(&h);
  const auto opts = small_options();

  fddh_model* model = nullptr;
  REQUIRE(fddh_train(h.x1, h.x2, h.labels, &opts, &model) == FDDH_OK);
  CHECK(fddh_model_code_length(model) == 8);
  CHECK(fddh_model_label_count(model) == 4);
  CHECK(fddh_model_train_count(model) == 160);
  CHECK(fddh_model_variant(model) == FDDH_VARIANT_FULL);
  CHECK(fddh_model_iterations(model) >= 1);

  // Encoding the training features reproduces reasonable codes.
  fddh_matrix* codes1 = nullptr;
  fddh_matrix* codes2 = nullptr;
  REQUIRE(fddh_encode(model, 1, h.x1, &codes1) == FDDH_OK);
  REQUIRE(fddh_encode(model, 2, h.x2, &codes2) == FDDH_OK);
  CHECK(fddh_matrix_rows(codes1) == 8);
  CHECK(fddh_matrix_cols(codes1) == 160);

  fddh_eval_report* report = nullptr;
  REQUIRE(fddh_evaluate(codes1, h.labels, codes2, h.labels, nullptr,
                        &report) == FDDH_OK);
  const double map = fddh_eval_mean_ap(report);
  CHECK(map > 0.5);  // self-retrieval on easy synthetic data
  CHECK(map <= 1.0);
  CHECK(fddh_eval_top_k_count(report) == 1);  // default top-50
  int32_t req = 0, eff = 0;
  double prec = 0.0;
  REQUIRE(fddh_eval_top_k(report, 0, &req, &eff, &prec) == FDDH_OK);
  CHECK(req == 50);
  CHECK(eff == 50);
  CHECK(prec > 0.0);
  fddh_matrix* pq = nullptr;
  REQUIRE(fddh_eval_per_query_ap(report, &pq) == FDDH_OK);
  CHECK(fddh_matrix_rows(pq) == 1);
  CHECK(fddh_matrix_cols(pq) == 160);
  fddh_matrix* pr = nullptr;
  REQUIRE(fddh_eval_pr_curve(report, &pr) == FDDH_OK);
  CHECK(fddh_matrix_rows(pr) == 9);  // radii 0..8
  CHECK(fddh_matrix_cols(pr) == 3);
  fddh_matrix_destroy(pr);
  fddh_matrix_destroy(pq);
  fddh_eval_report_destroy(report);

  // Save, reload, and compare every stored section bit for bit.
  const std::string path = tmp.file("model.fdhm");
  REQUIRE(fddh_model_save(model, path.c_str()) == FDDH_OK);
  fddh_model* loaded = nullptr;
  REQUIRE(fddh_model_load(path.c_str(), &loaded) == FDDH_OK);
  CHECK(fddh_model_code_length(loaded) == 8);
  CHECK(fddh_model_iterations(loaded) == fddh_model_iterations(model));
  CHECK(fddh_model_converged(loaded) == fddh_model_converged(model));
  for (const char* name :
       {"BASIS", "ROTATION_1", "ROTATION_2", "CODES", "DRAGGED_LABELS",
        "CENTER_1", "CENTER_2", "PROJ_1", "PROJ_2", "GRAM_1", "GRAM_2",
        "CROSS_1", "CROSS_2", "ANCHORS_1", "ANCHORS_2"}) {
    fddh_matrix* a = nullptr;
    fddh_matrix* b = nullptr;
    REQUIRE(fddh_model_section(model, name, &a) == FDDH_OK);
    REQUIRE(fddh_model_section(loaded, name, &b) == FDDH_OK);
    int eq = 0;
    REQUIRE(fddh_matrix_equal(a, b, &eq) == FDDH_OK);
    CHECK(eq == 1);
    fddh_matrix_destroy(a);
    fddh_matrix_destroy(b);
  }
  fddh_matrix* a = nullptr;
  CHECK(fddh_model_section(model, "NOPE", &a) == FDDH_ERR_PARAM);

  // The reloaded model encodes identically.
  fddh_matrix* codes1b = nullptr;
  REQUIRE(fddh_encode(loaded, 1, h.x1, &codes1b) == FDDH_OK);
  int eq = 0;
  REQUIRE(fddh_matrix_equal(codes1, codes1b, &eq) == FDDH_OK);
  CHECK(eq == 1);

  // Objective trace: 1 x (iterations + 1), strictly finite.
  fddh_matrix* trace = nullptr;
  REQUIRE(fddh_model_trace(model, &trace) == FDDH_OK);
  CHECK(fddh_matrix_rows(trace) == 1);
  CHECK(fddh_matrix_cols(trace) == fddh_model_iterations(model) + 1);
  fddh_matrix_destroy(trace);

  fddh_matrix_destroy(codes1b);
  fddh_matrix_destroy(codes2);
  fddh_matrix_destroy(codes1);
  fddh_model_destroy(loaded);
  fddh_model_destroy(model);
}

TEST_CASE("training is deterministic through the C surface") {
  Handles h;
  make_dataset(&h, 120, 5);
  const auto opts = small_options();
  fddh_model* m1 = nullptr;
  fddh_model* m2 = nullptr;
  REQUIRE(fddh_train(h.x1, h.x2, h.labels, &opts, &m1) == FDDH_OK);
  REQUIRE(fddh_train(h.x1, h.x2, h.labels, &opts, &m2) == FDDH_OK);
  for (const char* name : {"BASIS", "CODES", "PROJ_1", "PROJ_2"}) {
    fddh_matrix* a = nullptr;
    fddh_matrix* b = nullptr;
    REQUIRE(fddh_model_section(m1, name, &a) == FDDH_OK);
    REQUIRE(fddh_model_section(m2, name, &b) == FDDH_OK);
    int eq = 0;
    REQUIRE(fddh_matrix_equal(a, b, &eq) == FDDH_OK);
    CHECK(eq == 1);
    fddh_matrix_destroy(a);
    fddh_matrix_destroy(b);
  }
  fddh_model_destroy(m2);
  fddh_model_destroy(m1);
}

TEST_CASE("online update refreshes the projection and reports codes") {
  Handles h;
  make_dataset(&h, 140, 7);
  const auto opts = small_options();
  fddh_model* model = nullptr;
  REQUIRE(fddh_train(h.x1, h.x2, h.labels, &opts, &model) == FDDH_OK);

  const auto batch_ds = fddh::synth_dataset(150, 4, 10, 8, 0.15, 99);
  fddh_matrix* batch = to_handle(batch_ds.x1.rightCols(10));

  fddh_matrix* new_codes = nullptr;
  int32_t rounds = 0;
  REQUIRE(fddh_online_update(model, 1, batch, 20, &new_codes, &rounds) ==
          FDDH_OK);
  CHECK(rounds >= 1);
  CHECK(fddh_matrix_rows(new_codes) == 8);
  CHECK(fddh_matrix_cols(new_codes) == 10);
  const fddh::Matrix nc = from_handle(new_codes);
  CHECK((nc.array().abs() == 1.0).all());

  // Null out-params are allowed.
  REQUIRE(fddh_online_update(model, 1, batch, 20, nullptr, nullptr) ==
          FDDH_OK);
  // Bad modality is rejected.
  CHECK(fddh_online_update(model, 3, batch, 20, nullptr, nullptr) ==
        FDDH_ERR_PARAM);

  fddh_matrix_destroy(new_codes);
  fddh_matrix_destroy(batch);
  fddh_model_destroy(model);
}

TEST_CASE("error check reports the bound statistics") {
  Handles h;
  make_dataset(&h, 100, 9);
  const auto opts = small_options();
  fddh_model* model = nullptr;
  REQUIRE(fddh_train(h.x1, h.x2, h.labels, &opts, &model) == FDDH_OK);

  for (int use_dragged : {0, 1}) {
    fddh_error_report* rep = nullptr;
    const fddh_matrix* labels = use_dragged ? nullptr : h.labels;
    REQUIRE(fddh_error_check(model, labels, use_dragged, 2000, 1, &rep) ==
            FDDH_OK);
    CHECK(fddh_error_pairs(rep) == 2000);
    CHECK(fddh_error_upper_violations(rep) == 0);
    CHECK(fddh_error_lower_violations(rep) == 0);
    CHECK(fddh_error_kappa(rep) == doctest::Approx(2.0));  // sqrt(4 classes)
    CHECK(fddh_error_upper_frac(rep) >= 0.0);
    CHECK(fddh_error_lower_frac(rep) <= 1.0);
    fddh_matrix* hist = nullptr;
    REQUIRE(fddh_error_histogram(rep, 0, &hist) == FDDH_OK);
    CHECK(fddh_matrix_cols(hist) == 2);
    CHECK(fddh_matrix_rows(hist) >= 1);
    fddh_matrix_destroy(hist);
    CHECK(fddh_error_histogram(rep, 2, &hist) == FDDH_ERR_PARAM);
    fddh_error_report_destroy(rep);
  }
  // Plain-label mode requires labels.
  fddh_error_report* rep = nullptr;
  CHECK(fddh_error_check(model, nullptr, 0, 100, 1, &rep) == FDDH_ERR_PARAM);
  fddh_model_destroy(model);
}

TEST_CASE("synthetic generation through the C surface") {
  fddh_matrix* x1 = nullptr;
  fddh_matrix* x2 = nullptr;
  fddh_matrix* labels = nullptr;
  REQUIRE(fddh_synth(50, 3, 6, 5, 0.1, 4, &x1, &x2, &labels) == FDDH_OK);
  CHECK(fddh_matrix_rows(x1) == 6);
  CHECK(fddh_matrix_cols(x1) == 50);
  CHECK(fddh_matrix_rows(labels) == 3);
  // Identical to the core generator.
  const auto ds = fddh::synth_dataset(50, 3, 6, 5, 0.1, 4);
  CHECK(from_handle(x1) == ds.x1);
  CHECK(from_handle(x2) == ds.x2);
  CHECK(from_handle(labels) == ds.labels);
  fddh_matrix_destroy(labels);
  fddh_matrix_destroy(x2);
  fddh_matrix_destroy(x1);
  CHECK(fddh_synth(0, 3, 6, 5, 0.1, 4, &x1, &x2, &labels) ==
        FDDH_ERR_PARAM);
}

TEST_CASE("stability run through the C surface") {
  fddh_stability_options opts;
  fddh_stability_options_init(&opts);
  const int32_t sizes[2] = {128, 256};
  const uint64_t seeds[1] = {1};
  opts.sizes = sizes;
  opts.size_count = 2;
  opts.seeds = seeds;
  opts.seed_count = 1;
  opts.classes = 3;
  opts.d1 = 8;
  opts.d2 = 6;
  opts.code_length = 8;
  opts.anchors = 24;
  opts.width_samples = 24;
  opts.train_iters = 2;
  opts.batch = 32;
  fddh_stability_report* rep = nullptr;
  REQUIRE(fddh_stability_run(&opts, &rep) == FDDH_OK);
  fddh_matrix* points = nullptr;
  REQUIRE(fddh_stability_points(rep, &points) == FDDH_OK);
  CHECK(fddh_matrix_rows(points) == 2);
  CHECK(fddh_matrix_cols(points) == 4);
  double v = 0.0;
  REQUIRE(fddh_matrix_get(points, 0, 0, &v) == FDDH_OK);
  CHECK(v == 128.0);
  REQUIRE(fddh_matrix_get(points, 1, 1, &v) == FDDH_OK);
  CHECK(v == 256.0 + 32.0);
  fddh_matrix_destroy(points);
  fddh_stability_report_destroy(rep);
}

TEST_CASE("convergence run through the C surface") {
  Handles h;
  make_dataset(&h, 120, 13);
  auto opts = small_options();
  opts.max_iters = 3;
  opts.tol = 1e-12;
  fddh_matrix* rows = nullptr;
  REQUIRE(fddh_convergence_run(h.x1, h.x2, h.labels, &opts, 0.2, &rows) ==
          FDDH_OK);
  CHECK(fddh_matrix_rows(rows) == 4);  // initial + 3 sweeps
  CHECK(fddh_matrix_cols(rows) == 4);
  fddh_matrix_destroy(rows);
  CHECK(fddh_convergence_run(h.x1, h.x2, h.labels, &opts, 1.5, &rows) ==
        FDDH_ERR_PARAM);
}

TEST_CASE("null handles are parameter errors, not crashes") {
  CHECK(fddh_matrix_create(2, 2, nullptr, nullptr) == FDDH_ERR_PARAM);
  CHECK(fddh_matrix_rows(nullptr) == 0);
  CHECK(fddh_matrix_cols(nullptr) == 0);
  fddh_matrix_destroy(nullptr);  // must be a no-op
  fddh_model_destroy(nullptr);
  fddh_eval_report_destroy(nullptr);
  fddh_error_report_destroy(nullptr);
  fddh_stability_report_destroy(nullptr);

  fddh_model* model = nullptr;
  CHECK(fddh_train(nullptr, nullptr, nullptr, nullptr, &model) ==
        FDDH_ERR_PARAM);
  CHECK(fddh_model_load(nullptr, &model) == FDDH_ERR_PARAM);
  CHECK(fddh_model_code_length(nullptr) == 0);
  fddh_matrix* out = nullptr;
  CHECK(fddh_encode(nullptr, 1, nullptr, &out) == FDDH_ERR_PARAM);

  double d = 0.0;
  CHECK(fddh_eval_mean_ap(nullptr) == 0.0);
  (void)d;
}

TEST_CASE("train rejects invalid option combinations") {
  Handles h;
  make_dataset(&h, 60, 21);
  fddh_model* model = nullptr;

  auto opts = small_options();
  opts.code_length = 2;  // below the class count
  CHECK(fddh_train(h.x1, h.x2, h.labels, &opts, &model) == FDDH_ERR_PARAM);

  opts = small_options();
  opts.variant = 7;
  CHECK(fddh_train(h.x1, h.x2, h.labels, &opts, &model) == FDDH_ERR_PARAM);

  opts = small_options();
  opts.gamma = 0.0;
  CHECK(fddh_train(h.x1, h.x2, h.labels, &opts, &model) == FDDH_ERR_PARAM);

  // The no-kernel variant needs feature dimension >= code length.
  opts = small_options();
  opts.variant = FDDH_VARIANT_NO_RELAX_NO_KERNEL;
  opts.code_length = 16;  // d1 = 10 < 16
  CHECK(fddh_train(h.x1, h.x2, h.labels, &opts, &model) == FDDH_ERR_PARAM);
}

TEST_CASE("no-kernel variant trains and encodes through the C surface") {
  Handles h;
  make_dataset(&h, 80, 31);
  auto opts = small_options();
  opts.variant = FDDH_VARIANT_NO_RELAX_NO_KERNEL;
  opts.code_length = 6;  // below both feature dimensions (10 and 8)
  fddh_model* model = nullptr;
  REQUIRE(fddh_train(h.x1, h.x2, h.labels, &opts, &model) == FDDH_OK);
  CHECK(fddh_model_variant(model) == FDDH_VARIANT_NO_RELAX_NO_KERNEL);
  fddh_matrix* codes = nullptr;
  REQUIRE(fddh_encode(model, 2, h.x2, &codes) == FDDH_OK);
  CHECK(fddh_matrix_rows(codes) == 6);
  // Anchor sections do not exist for the raw-feature variant.
  fddh_matrix* anchors = nullptr;
  CHECK(fddh_model_section(model, "ANCHORS_1", &anchors) != FDDH_OK);
  fddh_matrix_destroy(codes);
  fddh_model_destroy(model);
}

TEST_CASE("hamming distance endpoint validates and computes") {
  fddh::Matrix a(4, 2);
  a.col(0) << 1, 1, -1, -1;
  a.col(1) << 1, -1, 1, -1;
  fddh_matrix* m = to_handle(a);
  int32_t d = -1;
  REQUIRE(fddh_hamming_distance(m, 0, m, 1, &d) == FDDH_OK);
  CHECK(d == 2);
  REQUIRE(fddh_hamming_distance(m, 0, m, 0, &d) == FDDH_OK);
  CHECK(d == 0);
  CHECK(fddh_hamming_distance(m, 0, m, 5, &d) == FDDH_ERR_PARAM);
  fddh_matrix_destroy(m);
}
