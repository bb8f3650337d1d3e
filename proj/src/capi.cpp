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

#include "fddh/fddh.h"

#include <new>
#include <string>

#include "common.hpp"
#include "diagnostics.hpp"
#include "model.hpp"
#include "retrieval.hpp"

struct fddh_matrix {
  fddh::Matrix m;
};

struct fddh_model {
  fddh::Model m;
};

struct fddh_eval_report {
  fddh::EvalReport r;
};

struct fddh_error_report {
  fddh::PairwiseBoundStats s;
};

struct fddh_stability_report {
  fddh::StabilityReport r;
};

namespace {

thread_local std::string g_last_error;

fddh_status to_status(fddh::Status s) {
  switch (s) {
    case fddh::Status::kOk: return FDDH_OK;
    case fddh::Status::kIoError: return FDDH_ERR_IO;
    case fddh::Status::kParseError: return FDDH_ERR_PARSE;
    case fddh::Status::kShapeError: return FDDH_ERR_SHAPE;
    case fddh::Status::kParamError: return FDDH_ERR_PARAM;
    case fddh::Status::kStateError: return FDDH_ERR_STATE;
    case fddh::Status::kNumericError: return FDDH_ERR_NUMERIC;
    case fddh::Status::kInternalError: return FDDH_ERR_INTERNAL;
  }
  return FDDH_ERR_INTERNAL;
}

template <typename F>
fddh_status guarded(F&& f) noexcept {
  try {
    f();
    return FDDH_OK;
  } catch (const fddh::Error& e) {
    g_last_error = e.what();
    return to_status(e.status());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FDDH_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FDDH_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  fddh::require(p != nullptr, fddh::Status::kParamError,
                fddh::MessageBuilder() << what << " must not be null");
}

fddh_matrix* wrap(fddh::Matrix m) {
  auto* out = new fddh_matrix;
  out->m = std::move(m);
  return out;
}

fddh::TrainConfig to_config(const fddh_train_options& opts) {
  fddh::require(opts.variant >= 0 && opts.variant <= 2,
                fddh::Status::kParamError,
                fddh::MessageBuilder()
                    << "variant must be 0, 1 or 2, got " << opts.variant);
  fddh::require(opts.code_length >= 1, fddh::Status::kParamError,
                fddh::MessageBuilder() << "code length must be >= 1, got "
                                       << opts.code_length);
  fddh::TrainConfig config;
  config.hp.mu = opts.mu;
  config.hp.theta = opts.theta;
  config.hp.delta = opts.delta;
  config.hp.code_length = opts.code_length;
  config.hp.max_iters = opts.max_iters;
  config.hp.tol = opts.tol;
  config.gamma = opts.gamma;
  config.anchors = opts.anchors;
  config.width_samples = opts.width_samples;
  config.seed = opts.seed;
  config.variant = static_cast<fddh::TrainVariant>(opts.variant);
  return config;
}

}  // namespace

extern "C" {

const char* fddh_status_name(fddh_status status) {
  switch (status) {
    case FDDH_OK: return "ok";
    case FDDH_ERR_IO: return "io error";
    case FDDH_ERR_PARSE: return "parse error";
    case FDDH_ERR_SHAPE: return "shape error";
    case FDDH_ERR_PARAM: return "parameter error";
    case FDDH_ERR_STATE: return "state error";
    case FDDH_ERR_NUMERIC: return "numeric error";
    case FDDH_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* fddh_last_error(void) { return g_last_error.c_str(); }

const char* fddh_version(void) { return "0.1.0"; }

/* ---- matrices ---- */

fddh_status fddh_matrix_create(int64_t rows, int64_t cols,
                               const double* data, fddh_matrix** out) {
  return guarded([&] {
    need(out, "out");
    fddh::require(rows >= 1, fddh::Status::kParamError,
                  "matrix needs at least one row");
    fddh::require(cols >= 0, fddh::Status::kParamError,
                  "column count must be >= 0");
    fddh::Matrix m = fddh::Matrix::Zero(rows, cols);
    if (data != nullptr) {
      for (int64_t i = 0; i < rows; ++i)
        for (int64_t j = 0; j < cols; ++j) m(i, j) = data[i * cols + j];
    }
    *out = wrap(std::move(m));
  });
}

void fddh_matrix_destroy(fddh_matrix* m) { delete m; }

int64_t fddh_matrix_rows(const fddh_matrix* m) {
  return m == nullptr ? 0 : m->m.rows();
}

int64_t fddh_matrix_cols(const fddh_matrix* m) {
  return m == nullptr ? 0 : m->m.cols();
}

fddh_status fddh_matrix_get(const fddh_matrix* m, int64_t row, int64_t col,
                            double* out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    fddh::require(row >= 0 && row < m->m.rows() && col >= 0 &&
                      col < m->m.cols(),
                  fddh::Status::kParamError,
                  fddh::MessageBuilder()
                      << "index (" << row << ", " << col
                      << ") out of range for " << m->m.rows() << " x "
                      << m->m.cols());
    *out = m->m(row, col);
  });
}

fddh_status fddh_matrix_copy_data(const fddh_matrix* m, double* out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    for (int64_t i = 0; i < m->m.rows(); ++i)
      for (int64_t j = 0; j < m->m.cols(); ++j)
        out[i * m->m.cols() + j] = m->m(i, j);
  });
}

fddh_status fddh_matrix_slice_cols(const fddh_matrix* m, int64_t first,
                                   int64_t count, fddh_matrix** out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    fddh::require(first >= 0 && count >= 0 && first + count <= m->m.cols(),
                  fddh::Status::kParamError,
                  fddh::MessageBuilder()
                      << "column slice [" << first << ", " << first + count
                      << ") out of range for " << m->m.cols() << " columns");
    *out = wrap(m->m.middleCols(first, count));
  });
}

fddh_status fddh_matrix_equal(const fddh_matrix* a, const fddh_matrix* b,
                              int* out) {
  return guarded([&] {
    need(a, "first matrix");
    need(b, "second matrix");
    need(out, "out");
    const bool same = a->m.rows() == b->m.rows() &&
                      a->m.cols() == b->m.cols() &&
                      (a->m.array() == b->m.array()).all();
    *out = same ? 1 : 0;
  });
}

fddh_status fddh_matrix_load(const char* path, fddh_matrix** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap(fddh::io::load_matrix(path));
  });
}

fddh_status fddh_matrix_save(const fddh_matrix* m, const char* path,
                             int as_csv) {
  return guarded([&] {
    need(m, "matrix");
    need(path, "path");
    fddh::io::save_matrix(m->m, path,
                          as_csv != 0 ? fddh::io::MatrixFormat::kCsv
                                      : fddh::io::MatrixFormat::kBinary);
  });
}

/* ---- training ---- */

void fddh_train_options_init(fddh_train_options* opts) {
  if (opts == nullptr) return;
  const fddh::TrainConfig defaults;
  opts->mu = defaults.hp.mu;
  opts->theta = defaults.hp.theta;
  opts->delta = defaults.hp.delta;
  opts->gamma = defaults.gamma;
  opts->tol = defaults.hp.tol;
  opts->code_length = defaults.hp.code_length;
  opts->max_iters = defaults.hp.max_iters;
  opts->anchors = defaults.anchors;
  opts->width_samples = defaults.width_samples;
  opts->seed = defaults.seed;
  opts->variant = FDDH_VARIANT_FULL;
}

fddh_status fddh_train_options_preset(const char* name,
                                      fddh_train_options* opts) {
  return guarded([&] {
    need(name, "preset name");
    need(opts, "options");
    fddh::TrainConfig config = to_config(*opts);
    fddh::apply_preset(name, config);
    opts->mu = config.hp.mu;
    opts->theta = config.hp.theta;
    opts->delta = config.hp.delta;
  });
}

fddh_status fddh_train(const fddh_matrix* x1, const fddh_matrix* x2,
                       const fddh_matrix* labels,
                       const fddh_train_options* opts, fddh_model** out) {
  return guarded([&] {
    need(x1, "modality-1 features");
    need(x2, "modality-2 features");
    need(labels, "labels");
    need(opts, "options");
    need(out, "out");
    auto* model = new fddh_model;
    try {
      model->m = fddh::train_model(x1->m, x2->m, labels->m,
                                   to_config(*opts));
    } catch (...) {
      delete model;
      throw;
    }
    *out = model;
  });
}

void fddh_model_destroy(fddh_model* model) { delete model; }

fddh_status fddh_model_save(const fddh_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    fddh::save_model(model->m, path);
  });
}

fddh_status fddh_model_load(const char* path, fddh_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto* model = new fddh_model;
    try {
      model->m = fddh::load_model(path);
    } catch (...) {
      delete model;
      throw;
    }
    *out = model;
  });
}

int32_t fddh_model_code_length(const fddh_model* model) {
  return model == nullptr ? 0 : model->m.code_length();
}

int32_t fddh_model_label_count(const fddh_model* model) {
  return model == nullptr ? 0 : model->m.label_count;
}

int64_t fddh_model_train_count(const fddh_model* model) {
  return model == nullptr ? 0 : model->m.train_count;
}

int32_t fddh_model_variant(const fddh_model* model) {
  return model == nullptr ? -1
                          : static_cast<int32_t>(model->m.config.variant);
}

int fddh_model_converged(const fddh_model* model) {
  return model != nullptr && model->m.converged ? 1 : 0;
}

int32_t fddh_model_iterations(const fddh_model* model) {
  return model == nullptr ? 0 : model->m.iterations;
}

fddh_status fddh_model_section(const fddh_model* model, const char* name,
                               fddh_matrix** out) {
  return guarded([&] {
    need(model, "model");
    need(name, "section name");
    need(out, "out");
    *out = wrap(fddh::model_section_copy(model->m, name));
  });
}

fddh_status fddh_model_trace(const fddh_model* model, fddh_matrix** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = wrap(fddh::model_section_copy(model->m, "OBJECTIVE_TRACE"));
  });
}

fddh_status fddh_encode(const fddh_model* model, int32_t modality,
                        const fddh_matrix* raw_features,
                        fddh_matrix** out_codes) {
  return guarded([&] {
    need(model, "model");
    need(raw_features, "features");
    need(out_codes, "out");
    *out_codes =
        wrap(fddh::encode_queries(model->m, modality, raw_features->m));
  });
}

fddh_status fddh_online_update(fddh_model* model, int32_t modality,
                               const fddh_matrix* raw_features,
                               int32_t max_rounds, fddh_matrix** out_codes,
                               int32_t* out_rounds) {
  return guarded([&] {
    need(model, "model");
    need(raw_features, "features");
    fddh::OnlineResult result =
        fddh::update_model(model->m, modality, raw_features->m, max_rounds);
    if (out_codes != nullptr) *out_codes = wrap(std::move(result.codes));
    if (out_rounds != nullptr) *out_rounds = result.rounds;
  });
}

/* ---- retrieval evaluation ---- */

fddh_status fddh_evaluate(const fddh_matrix* query_codes,
                          const fddh_matrix* query_labels,
                          const fddh_matrix* db_codes,
                          const fddh_matrix* db_labels,
                          const fddh_eval_options* options,
                          fddh_eval_report** out) {
  return guarded([&] {
    need(query_codes, "query codes");
    need(query_labels, "query labels");
    need(db_codes, "database codes");
    need(db_labels, "database labels");
    need(out, "out");
    fddh::EvalOptions opts;
    if (options != nullptr) {
      opts.top_k.clear();
      if (options->top_k_count > 0) {
        need(options->top_k, "top_k array");
        opts.top_k.assign(options->top_k,
                          options->top_k + options->top_k_count);
      }
      opts.map_cutoff = options->map_cutoff;
    }
    auto* report = new fddh_eval_report;
    try {
      report->r = fddh::evaluate(query_codes->m, query_labels->m,
                                 db_codes->m, db_labels->m, opts);
    } catch (...) {
      delete report;
      throw;
    }
    *out = report;
  });
}

void fddh_eval_report_destroy(fddh_eval_report* report) { delete report; }

double fddh_eval_mean_ap(const fddh_eval_report* report) {
  return report == nullptr ? 0.0 : report->r.mean_ap;
}

fddh_status fddh_eval_per_query_ap(const fddh_eval_report* report,
                                   fddh_matrix** out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    fddh::Matrix row(1, report->r.per_query_ap.size());
    for (std::size_t i = 0; i < report->r.per_query_ap.size(); ++i)
      row(0, static_cast<int>(i)) = report->r.per_query_ap[i];
    *out = wrap(std::move(row));
  });
}

int32_t fddh_eval_top_k_count(const fddh_eval_report* report) {
  return report == nullptr
             ? 0
             : static_cast<int32_t>(report->r.requested_k.size());
}

fddh_status fddh_eval_top_k(const fddh_eval_report* report, int32_t index,
                            int32_t* requested_k, int32_t* effective_k,
                            double* precision) {
  return guarded([&] {
    need(report, "report");
    fddh::require(index >= 0 &&
                      index < static_cast<int32_t>(
                                  report->r.requested_k.size()),
                  fddh::Status::kParamError, "top-k index out of range");
    if (requested_k != nullptr) *requested_k = report->r.requested_k[index];
    if (effective_k != nullptr) *effective_k = report->r.effective_k[index];
    if (precision != nullptr)
      *precision = report->r.top_k_precision[index];
  });
}

int fddh_eval_k_clamped(const fddh_eval_report* report) {
  return report != nullptr && report->r.k_clamped ? 1 : 0;
}

fddh_status fddh_eval_pr_curve(const fddh_eval_report* report,
                               fddh_matrix** out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    fddh::Matrix curve(report->r.pr_curve.size(), 3);
    for (std::size_t i = 0; i < report->r.pr_curve.size(); ++i) {
      curve(static_cast<int>(i), 0) = report->r.pr_curve[i].radius;
      curve(static_cast<int>(i), 1) = report->r.pr_curve[i].precision;
      curve(static_cast<int>(i), 2) = report->r.pr_curve[i].recall;
    }
    *out = wrap(std::move(curve));
  });
}

fddh_status fddh_hamming_distance(const fddh_matrix* a, int64_t col_a,
                                  const fddh_matrix* b, int64_t col_b,
                                  int32_t* out) {
  return guarded([&] {
    need(a, "first codes");
    need(b, "second codes");
    need(out, "out");
    fddh::require(col_a >= 0 && col_a < a->m.cols() && col_b >= 0 &&
                      col_b < b->m.cols(),
                  fddh::Status::kParamError, "code column out of range");
    *out = fddh::hamming_distance(fddh::Vector(a->m.col(col_a)),
                                  fddh::Vector(b->m.col(col_b)));
  });
}

/* ---- diagnostics ---- */

fddh_status fddh_error_check(const fddh_model* model,
                             const fddh_matrix* labels, int use_dragged,
                             uint64_t pairs, uint64_t seed,
                             fddh_error_report** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    const fddh::Model& m = model->m;
    const fddh::Matrix* label_matrix;
    if (use_dragged != 0) {
      label_matrix = &m.dragged_labels;
    } else {
      need(labels, "labels");
      fddh::check_label_matrix(labels->m, "label matrix");
      fddh::require(labels->m.rows() == m.label_count &&
                        labels->m.cols() == m.train_count,
                    fddh::Status::kShapeError,
                    fddh::MessageBuilder()
                        << "label matrix is " << labels->m.rows() << " x "
                        << labels->m.cols() << " but the model was trained "
                        << "on " << m.label_count << " x " << m.train_count);
      label_matrix = &labels->m;
    }
    const fddh::ErrorTerms terms =
        fddh::error_terms(m.basis, *label_matrix, m.codes);
    auto* report = new fddh_error_report;
    try {
      report->s = fddh::pairwise_bound_check(terms, *label_matrix, m.codes,
                                             pairs, seed);
    } catch (...) {
      delete report;
      throw;
    }
    *out = report;
  });
}

void fddh_error_report_destroy(fddh_error_report* report) { delete report; }

double fddh_error_kappa(const fddh_error_report* report) {
  return report == nullptr ? 0.0 : report->s.kappa;
}

uint64_t fddh_error_pairs(const fddh_error_report* report) {
  return report == nullptr ? 0 : report->s.pairs;
}

uint64_t fddh_error_pairs_same_label(const fddh_error_report* report) {
  return report == nullptr ? 0 : report->s.pairs_same_label;
}

uint64_t fddh_error_upper_violations(const fddh_error_report* report) {
  return report == nullptr ? 0 : report->s.upper_violations;
}

uint64_t fddh_error_lower_violations(const fddh_error_report* report) {
  return report == nullptr ? 0 : report->s.lower_violations;
}

double fddh_error_upper_frac(const fddh_error_report* report) {
  return report == nullptr ? 0.0 : report->s.upper_frac_within_tenth;
}

double fddh_error_lower_frac(const fddh_error_report* report) {
  return report == nullptr ? 0.0 : report->s.lower_frac_within_tenth;
}

fddh_status fddh_error_histogram(const fddh_error_report* report, int which,
                                 fddh_matrix** out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    fddh::require(which == 0 || which == 1, fddh::Status::kParamError,
                  "histogram selector must be 0 (upper) or 1 (lower)");
    const fddh::Histogram& h = which == 0 ? report->s.upper_error_hist
                                          : report->s.lower_error_hist;
    fddh::Matrix rows(std::max<std::size_t>(h.centers.size(), 1), 2);
    rows.setZero();
    for (std::size_t i = 0; i < h.centers.size(); ++i) {
      rows(static_cast<int>(i), 0) = h.centers[i];
      rows(static_cast<int>(i), 1) = static_cast<double>(h.counts[i]);
    }
    *out = wrap(std::move(rows));
  });
}

fddh_status fddh_synth(int64_t n, int32_t classes, int32_t d1, int32_t d2,
                       double noise, uint64_t seed, fddh_matrix** out_x1,
                       fddh_matrix** out_x2, fddh_matrix** out_labels) {
  return guarded([&] {
    need(out_x1, "out_x1");
    need(out_x2, "out_x2");
    need(out_labels, "out_labels");
    fddh::SynthDataset ds = fddh::synth_dataset(
        static_cast<int>(n), classes, d1, d2, noise, seed);
    *out_x1 = wrap(std::move(ds.x1));
    *out_x2 = wrap(std::move(ds.x2));
    *out_labels = wrap(std::move(ds.labels));
  });
}

void fddh_stability_options_init(fddh_stability_options* opts) {
  if (opts == nullptr) return;
  const fddh::StabilityConfig defaults;
  opts->sizes = nullptr;
  opts->size_count = 0;
  opts->seeds = nullptr;
  opts->seed_count = 0;
  opts->classes = defaults.classes;
  opts->d1 = defaults.d1;
  opts->d2 = defaults.d2;
  opts->noise = defaults.noise;
  opts->code_length = defaults.code_length;
  opts->anchors = defaults.anchors;
  opts->width_samples = defaults.width_samples;
  opts->train_iters = defaults.train_iters;
  opts->batch = defaults.batch;
  opts->modality = defaults.modality;
  opts->gamma = defaults.gamma;
  opts->mu = defaults.mu;
  opts->theta = defaults.theta;
  opts->delta = defaults.delta;
}

fddh_status fddh_stability_run(const fddh_stability_options* opts,
                               fddh_stability_report** out) {
  return guarded([&] {
    need(opts, "options");
    need(out, "out");
    fddh::StabilityConfig config;
    if (opts->size_count > 0) {
      need(opts->sizes, "sizes array");
      config.sizes.assign(opts->sizes, opts->sizes + opts->size_count);
    }
    if (opts->seed_count > 0) {
      need(opts->seeds, "seeds array");
      config.seeds.assign(opts->seeds, opts->seeds + opts->seed_count);
    }
    config.classes = opts->classes;
    config.d1 = opts->d1;
    config.d2 = opts->d2;
    config.noise = opts->noise;
    config.code_length = opts->code_length;
    config.anchors = opts->anchors;
    config.width_samples = opts->width_samples;
    config.train_iters = opts->train_iters;
    config.batch = opts->batch;
    config.modality = opts->modality;
    config.gamma = opts->gamma;
    config.mu = opts->mu;
    config.theta = opts->theta;
    config.delta = opts->delta;
    auto* report = new fddh_stability_report;
    try {
      report->r = fddh::stability_experiment(config);
    } catch (...) {
      delete report;
      throw;
    }
    *out = report;
  });
}

void fddh_stability_report_destroy(fddh_stability_report* report) {
  delete report;
}

double fddh_stability_slope(const fddh_stability_report* report) {
  return report == nullptr ? 0.0 : report->r.slope;
}

double fddh_stability_intercept(const fddh_stability_report* report) {
  return report == nullptr ? 0.0 : report->r.intercept;
}

int32_t fddh_stability_excluded(const fddh_stability_report* report) {
  return report == nullptr ? 0 : report->r.excluded_points;
}

fddh_status fddh_stability_points(const fddh_stability_report* report,
                                  fddh_matrix** out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    fddh::Matrix points(report->r.points.size(), 4);
    for (std::size_t i = 0; i < report->r.points.size(); ++i) {
      const fddh::StabilityPoint& p = report->r.points[i];
      points(static_cast<int>(i), 0) = p.train_size;
      points(static_cast<int>(i), 1) = p.total_size;
      points(static_cast<int>(i), 2) = p.mean_drift;
      points(static_cast<int>(i), 3) = p.bound;
    }
    *out = wrap(std::move(points));
  });
}

fddh_status fddh_convergence_run(const fddh_matrix* x1,
                                 const fddh_matrix* x2,
                                 const fddh_matrix* labels,
                                 const fddh_train_options* opts,
                                 double query_fraction, fddh_matrix** out) {
  return guarded([&] {
    need(x1, "modality-1 features");
    need(x2, "modality-2 features");
    need(labels, "labels");
    need(opts, "options");
    need(out, "out");
    const std::vector<fddh::ConvergenceRow> rows = fddh::convergence_run(
        x1->m, x2->m, labels->m, to_config(*opts), query_fraction);
    fddh::Matrix table(rows.size(), 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      table(static_cast<int>(i), 0) = rows[i].iteration;
      table(static_cast<int>(i), 1) = rows[i].objective;
      table(static_cast<int>(i), 2) = rows[i].map_1_to_2;
      table(static_cast<int>(i), 3) = rows[i].map_2_to_1;
    }
    *out = wrap(std::move(table));
  });
}

}  // extern "C"
