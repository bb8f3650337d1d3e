/* Copyright 2026 The FDDH Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the fddh cross-modal hashing library.
 *
 * Every function that can fail returns an fddh_status; FDDH_OK means
 * success and anything else leaves a human-readable explanation in
 * fddh_last_error() (thread-local). Out-parameters are only written on
 * success. Objects returned through ** out-parameters are owned by the
 * caller and released with the matching *_destroy function.
 *
 * Matrices are dense doubles. Feature matrices hold one sample per
 * column; label matrices are zero/one with one class per row; code
 * matrices hold one {-1, +1} code per column.
 */

#ifndef FDDH_FDDH_H_
#define FDDH_FDDH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FDDH_BUILD_SHARED)
#define FDDH_API __declspec(dllexport)
#else
#define FDDH_API __declspec(dllimport)
#endif
#else
#define FDDH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fddh_status {
  FDDH_OK = 0,
  FDDH_ERR_IO = 1,      /* file missing / unreadable / unwritable */
  FDDH_ERR_PARSE = 2,   /* malformed matrix file or model archive */
  FDDH_ERR_SHAPE = 3,   /* dimension mismatch between inputs */
  FDDH_ERR_PARAM = 4,   /* argument outside its documented range */
  FDDH_ERR_STATE = 5,   /* operation not valid for this object's state */
  FDDH_ERR_NUMERIC = 6, /* non-finite values or a failed factorization */
  FDDH_ERR_INTERNAL = 7 /* invariant breach inside the library */
} fddh_status;

FDDH_API const char* fddh_status_name(fddh_status status);

/* Message describing the most recent failure on this thread; empty
 * string if nothing failed yet. The pointer stays valid until the next
 * failing call on the same thread. */
FDDH_API const char* fddh_last_error(void);

FDDH_API const char* fddh_version(void);

/* ---------------------------------------------------------------- *
 * Matrices                                                          *
 * ---------------------------------------------------------------- */

typedef struct fddh_matrix fddh_matrix;

/* data may be NULL for an all-zero matrix, otherwise rows*cols doubles
 * in row-major order. */
FDDH_API fddh_status fddh_matrix_create(int64_t rows, int64_t cols,
                                        const double* data,
                                        fddh_matrix** out);
FDDH_API void fddh_matrix_destroy(fddh_matrix* m);
FDDH_API int64_t fddh_matrix_rows(const fddh_matrix* m);
FDDH_API int64_t fddh_matrix_cols(const fddh_matrix* m);
FDDH_API fddh_status fddh_matrix_get(const fddh_matrix* m, int64_t row,
                                     int64_t col, double* out);
/* Copies all entries into out (rows*cols doubles, row-major). */
FDDH_API fddh_status fddh_matrix_copy_data(const fddh_matrix* m,
                                           double* out);
/* Columns [first, first + count) as a new matrix. */
FDDH_API fddh_status fddh_matrix_slice_cols(const fddh_matrix* m,
                                            int64_t first, int64_t count,
                                            fddh_matrix** out);
/* Sets *out to 1 when shapes and every entry match exactly. */
FDDH_API fddh_status fddh_matrix_equal(const fddh_matrix* a,
                                       const fddh_matrix* b, int* out);

/* Reads the binary container (magic "FDH1") or, failing the magic
 * check, comma-separated text with '.' decimals and no header. */
FDDH_API fddh_status fddh_matrix_load(const char* path, fddh_matrix** out);
/* as_csv nonzero writes text; zero writes the binary container, which
 * round-trips doubles bit for bit. */
FDDH_API fddh_status fddh_matrix_save(const fddh_matrix* m,
                                      const char* path, int as_csv);

/* ---------------------------------------------------------------- *
 * Training                                                          *
 * ---------------------------------------------------------------- */

typedef enum fddh_variant {
  FDDH_VARIANT_FULL = 0,
  FDDH_VARIANT_NO_RELAX = 1,          /* labels stay fixed, no dragging */
  FDDH_VARIANT_NO_RELAX_NO_KERNEL = 2 /* raw centered features as well */
} fddh_variant;

typedef struct fddh_train_options {
  double mu;     /* modality-1 embedding weight, >= 0 */
  double theta;  /* modality-2 embedding weight, >= 0 */
  double delta;  /* dragged-label shrinkage, >= 0 */
  double gamma;  /* out-of-sample ridge weight, > 0 */
  double tol;    /* relative objective-change stop threshold, > 0 */
  int32_t code_length;
  int32_t max_iters;
  int32_t anchors;       /* capped at the training size */
  int32_t width_samples; /* capped at the training size */
  uint64_t seed;
  int32_t variant; /* one of fddh_variant */
} fddh_train_options;

FDDH_API void fddh_train_options_init(fddh_train_options* opts);
/* Overwrites mu/theta/delta with a named preset: "pascal-voc",
 * "mirflickr" or "nus-wide". */
FDDH_API fddh_status fddh_train_options_preset(const char* name,
                                               fddh_train_options* opts);

typedef struct fddh_model fddh_model;

FDDH_API fddh_status fddh_train(const fddh_matrix* x1, const fddh_matrix* x2,
                                const fddh_matrix* labels,
                                const fddh_train_options* opts,
                                fddh_model** out);
FDDH_API void fddh_model_destroy(fddh_model* model);

FDDH_API fddh_status fddh_model_save(const fddh_model* model,
                                     const char* path);
FDDH_API fddh_status fddh_model_load(const char* path, fddh_model** out);

FDDH_API int32_t fddh_model_code_length(const fddh_model* model);
FDDH_API int32_t fddh_model_label_count(const fddh_model* model);
FDDH_API int64_t fddh_model_train_count(const fddh_model* model);
FDDH_API int32_t fddh_model_variant(const fddh_model* model);
FDDH_API int fddh_model_converged(const fddh_model* model);
FDDH_API int32_t fddh_model_iterations(const fddh_model* model);

/* Copy of a stored section ("BASIS", "CODES", "PROJ_1", ...). */
FDDH_API fddh_status fddh_model_section(const fddh_model* model,
                                        const char* name,
                                        fddh_matrix** out);
/* Objective value per sweep as a 1 x (iterations + 1) row. */
FDDH_API fddh_status fddh_model_trace(const fddh_model* model,
                                      fddh_matrix** out);

/* Centers raw query features (one sample per column), applies the
 * modality's feature map and signs the projection. An empty batch
 * yields a code_length x 0 result. */
FDDH_API fddh_status fddh_encode(const fddh_model* model, int32_t modality,
                                 const fddh_matrix* raw_features,
                                 fddh_matrix** out_codes);

/* Folds new raw samples into one modality's projection using the cached
 * statistics; fails with FDDH_ERR_STATE when the model was stored
 * without caches. out_codes (codes assigned to the new samples) and
 * out_rounds may be NULL if not wanted. */
FDDH_API fddh_status fddh_online_update(fddh_model* model, int32_t modality,
                                        const fddh_matrix* raw_features,
                                        int32_t max_rounds,
                                        fddh_matrix** out_codes,
                                        int32_t* out_rounds);

/* ---------------------------------------------------------------- *
 * Retrieval evaluation                                              *
 * ---------------------------------------------------------------- */

typedef struct fddh_eval_options {
  const int32_t* top_k; /* NULL with top_k_count 0 for none */
  int32_t top_k_count;
  int32_t map_cutoff; /* 0 evaluates the full ranking */
} fddh_eval_options;

typedef struct fddh_eval_report fddh_eval_report;

/* Ranks every query against the database by Hamming distance (ties by
 * index) and scores label agreement: an item is relevant when it shares
 * at least one label with the query. options may be NULL for defaults
 * (top-50 precision, full-ranking mean AP). */
FDDH_API fddh_status fddh_evaluate(const fddh_matrix* query_codes,
                                   const fddh_matrix* query_labels,
                                   const fddh_matrix* db_codes,
                                   const fddh_matrix* db_labels,
                                   const fddh_eval_options* options,
                                   fddh_eval_report** out);
FDDH_API void fddh_eval_report_destroy(fddh_eval_report* report);

FDDH_API double fddh_eval_mean_ap(const fddh_eval_report* report);
/* Per-query average precision as a 1 x query_count row. */
FDDH_API fddh_status fddh_eval_per_query_ap(const fddh_eval_report* report,
                                            fddh_matrix** out);
FDDH_API int32_t fddh_eval_top_k_count(const fddh_eval_report* report);
/* Any of the out-pointers may be NULL. effective_k is the requested
 * cutoff clamped to the database size. */
FDDH_API fddh_status fddh_eval_top_k(const fddh_eval_report* report,
                                     int32_t index, int32_t* requested_k,
                                     int32_t* effective_k,
                                     double* precision);
FDDH_API int fddh_eval_k_clamped(const fddh_eval_report* report);
/* Micro-averaged Hamming-radius sweep as a (code_length + 1) x 3 matrix
 * with columns radius, precision, recall. Radii that retrieve nothing
 * report precision 1. */
FDDH_API fddh_status fddh_eval_pr_curve(const fddh_eval_report* report,
                                        fddh_matrix** out);

/* Hamming distance between column col_a of a and column col_b of b;
 * both columns must be {-1, +1} codes of equal length. */
FDDH_API fddh_status fddh_hamming_distance(const fddh_matrix* a,
                                           int64_t col_a,
                                           const fddh_matrix* b,
                                           int64_t col_b, int32_t* out);

/* ---------------------------------------------------------------- *
 * Diagnostics                                                       *
 * ---------------------------------------------------------------- */

typedef struct fddh_error_report fddh_error_report;

/* Samples `pairs` random sample pairs and checks the two-sided bound
 * tying code distances to label distances through the per-sample
 * residuals. use_dragged nonzero analyses the model's stored dragged
 * labels (labels may then be NULL); otherwise labels must be the
 * training label matrix. */
FDDH_API fddh_status fddh_error_check(const fddh_model* model,
                                      const fddh_matrix* labels,
                                      int use_dragged, uint64_t pairs,
                                      uint64_t seed,
                                      fddh_error_report** out);
FDDH_API void fddh_error_report_destroy(fddh_error_report* report);

FDDH_API double fddh_error_kappa(const fddh_error_report* report);
FDDH_API uint64_t fddh_error_pairs(const fddh_error_report* report);
FDDH_API uint64_t fddh_error_pairs_same_label(
    const fddh_error_report* report);
FDDH_API uint64_t fddh_error_upper_violations(
    const fddh_error_report* report);
FDDH_API uint64_t fddh_error_lower_violations(
    const fddh_error_report* report);
/* Fraction of distinct-label pairs whose normalized relative error is
 * at most 0.1 (upper/lower bound respectively). */
FDDH_API double fddh_error_upper_frac(const fddh_error_report* report);
FDDH_API double fddh_error_lower_frac(const fddh_error_report* report);
/* Histogram of normalized relative errors as a bins x 2 matrix with
 * columns bin center and count. which: 0 = upper bound, 1 = lower. */
FDDH_API fddh_status fddh_error_histogram(const fddh_error_report* report,
                                          int which, fddh_matrix** out);

/* Two-modality labeled synthetic data. Primary labels rotate through
 * the classes; a second label joins with probability one half. */
FDDH_API fddh_status fddh_synth(int64_t n, int32_t classes, int32_t d1,
                                int32_t d2, double noise, uint64_t seed,
                                fddh_matrix** out_x1, fddh_matrix** out_x2,
                                fddh_matrix** out_labels);

typedef struct fddh_stability_options {
  const int32_t* sizes; /* NULL for the default ladder */
  int32_t size_count;
  const uint64_t* seeds; /* NULL for {1, 2, 3} */
  int32_t seed_count;
  int32_t classes;
  int32_t d1;
  int32_t d2;
  double noise;
  int32_t code_length;
  int32_t anchors;
  int32_t width_samples;
  int32_t train_iters;
  int32_t batch;
  int32_t modality;
  double gamma;
  double mu;
  double theta;
  double delta;
} fddh_stability_options;

FDDH_API void fddh_stability_options_init(fddh_stability_options* opts);

typedef struct fddh_stability_report fddh_stability_report;

/* For each training size: train, run the online update on a fresh batch
 * and on the same batch with one sample replaced by an iid redraw, and
 * record the Frobenius drift between the two refreshed projections.
 * The slope is fit on log drift vs log(train + batch). */
FDDH_API fddh_status fddh_stability_run(const fddh_stability_options* opts,
                                        fddh_stability_report** out);
FDDH_API void fddh_stability_report_destroy(fddh_stability_report* report);

FDDH_API double fddh_stability_slope(const fddh_stability_report* report);
FDDH_API double fddh_stability_intercept(
    const fddh_stability_report* report);
FDDH_API int32_t fddh_stability_excluded(
    const fddh_stability_report* report);
/* size_count x 4 matrix: train size, train + batch, mean drift,
 * theoretical decay bound. */
FDDH_API fddh_status fddh_stability_points(
    const fddh_stability_report* report, fddh_matrix** out);

/* Trains on all but a held-out query split and reports per-sweep
 * progress as a rows x 4 matrix: iteration, objective, mean AP for
 * modality-1 queries, mean AP for modality-2 queries. Row 0 is the
 * random initial state. */
FDDH_API fddh_status fddh_convergence_run(const fddh_matrix* x1,
                                          const fddh_matrix* x2,
                                          const fddh_matrix* labels,
                                          const fddh_train_options* opts,
                                          double query_fraction,
                                          fddh_matrix** out);

#ifdef __cplusplus
}
#endif

#endif /* FDDH_FDDH_H_ */
