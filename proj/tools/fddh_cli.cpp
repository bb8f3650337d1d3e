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

// Command-line front end for the fddh library. Talks to the core purely
// through the C API in fddh/fddh.h.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fddh/fddh.h"

namespace {

[[noreturn]] void die(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(1);
}

// Aborts with the library's explanation when a C API call fails.
void check(fddh_status status) {
  if (status != FDDH_OK) die(fddh_last_error());
}

struct MatrixHandle {
  fddh_matrix* m = nullptr;
  MatrixHandle() = default;
  explicit MatrixHandle(fddh_matrix* p) : m(p) {}
  MatrixHandle(MatrixHandle&& other) noexcept : m(other.m) {
    other.m = nullptr;
  }
  MatrixHandle& operator=(MatrixHandle&& other) noexcept {
    if (this != &other) {
      fddh_matrix_destroy(m);
      m = other.m;
      other.m = nullptr;
    }
    return *this;
  }
  MatrixHandle(const MatrixHandle&) = delete;
  MatrixHandle& operator=(const MatrixHandle&) = delete;
  ~MatrixHandle() { fddh_matrix_destroy(m); }
  fddh_matrix* get() const { return m; }
  explicit operator bool() const { return m != nullptr; }
};

MatrixHandle load_matrix(const std::string& path) {
  fddh_matrix* m = nullptr;
  check(fddh_matrix_load(path.c_str(), &m));
  return MatrixHandle(m);
}

struct ModelHandle {
  fddh_model* m = nullptr;
  ModelHandle() = default;
  explicit ModelHandle(fddh_model* p) : m(p) {}
  ModelHandle(const ModelHandle&) = delete;
  ModelHandle& operator=(const ModelHandle&) = delete;
  ~ModelHandle() { fddh_model_destroy(m); }
  fddh_model* get() const { return m; }
};

ModelHandle load_model(const std::string& path) {
  fddh_model* m = nullptr;
  check(fddh_model_load(path.c_str(), &m));
  return ModelHandle(m);
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double cell(const fddh_matrix* m, int64_t row, int64_t col) {
  double v = 0.0;
  check(fddh_matrix_get(m, row, col, &v));
  return v;
}

// CSV report writer; also used for the per-iteration trace.
class CsvFile {
 public:
  explicit CsvFile(const std::string& path) : path_(path), out_(path) {
    if (!out_.good()) die("cannot open '" + path + "' for writing");
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  ~CsvFile() {
    out_.flush();
    if (!out_.good()) std::cerr << "error: write to '" << path_ << "' failed\n";
  }

 private:
  std::string path_;
  std::ofstream out_;
};

// ---------------------------------------------------------------------
// Flat key=value configuration files ('#' comments, optional quotes).

std::map<std::string, std::string> parse_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) die("cannot open config file '" + path + "'");
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_no = 0;
  const auto trim = [](std::string s) {
    const auto from = s.find_first_not_of(" \t");
    if (from == std::string::npos) return std::string();
    const auto to = s.find_last_not_of(" \t");
    return s.substr(from, to - from + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos || eq == 0) {
      die("config '" + path + "' line " + std::to_string(line_no) +
          ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (values.count(key)) {
      die("config '" + path + "' line " + std::to_string(line_no) +
          ": duplicate key '" + key + "'");
    }
    values[key] = value;
  }
  return values;
}

double parse_double(const std::string& value, const std::string& what) {
  double out = 0.0;
  const auto res =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    die(what + ": invalid number '" + value + "'");
  return out;
}

int64_t parse_int(const std::string& value, const std::string& what) {
  int64_t out = 0;
  const auto res =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    die(what + ": invalid integer '" + value + "'");
  return out;
}

uint64_t parse_uint(const std::string& value, const std::string& what) {
  uint64_t out = 0;
  const auto res =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    die(what + ": invalid unsigned integer '" + value + "'");
  return out;
}

int32_t variant_from_string(const std::string& name) {
  if (name == "full") return FDDH_VARIANT_FULL;
  if (name == "no_relax") return FDDH_VARIANT_NO_RELAX;
  if (name == "no_relax_no_kernel") return FDDH_VARIANT_NO_RELAX_NO_KERNEL;
  die("unknown variant '" + name +
      "' (expected full, no_relax, or no_relax_no_kernel)");
}

const char* variant_to_string(int32_t variant) {
  switch (variant) {
    case FDDH_VARIANT_FULL: return "full";
    case FDDH_VARIANT_NO_RELAX: return "no_relax";
    case FDDH_VARIANT_NO_RELAX_NO_KERNEL: return "no_relax_no_kernel";
  }
  return "unknown";
}

// ---------------------------------------------------------------------
// train (also reused by diagnose --mode convergence)

struct TrainSettings {
  std::string x1, x2, labels, model, trace;
  std::string preset;
  fddh_train_options opts{};
};

struct TrainFlags {
  std::string config_path, preset;
  std::string x1, x2, labels, model, trace;
  double mu = 0, theta = 0, delta = 0, gamma = 0, tol = 0;
  int32_t code_length = 0, max_iters = 0, anchors = 0, width_samples = 0;
  uint64_t seed = 0;
  std::string variant;
};

// Registers the shared training options on a subcommand; paths vary per
// command, so x1/x2/labels/model/trace registration stays with callers.
void add_train_options(CLI::App* cmd, TrainFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "key = value configuration file; flags override it");
  cmd->add_option("--preset", flags.preset,
                  "hyperparameter preset: pascal-voc, mirflickr, nus-wide");
  cmd->add_option("--mu", flags.mu, "modality-1 embedding weight");
  cmd->add_option("--theta", flags.theta, "modality-2 embedding weight");
  cmd->add_option("--delta", flags.delta, "dragged-label shrinkage weight");
  cmd->add_option("--gamma", flags.gamma, "out-of-sample ridge weight");
  cmd->add_option("--tol", flags.tol, "relative objective-change threshold");
  cmd->add_option("--code-length", flags.code_length, "hash code length");
  cmd->add_option("--max-iters", flags.max_iters, "sweep cap");
  cmd->add_option("--anchors", flags.anchors,
                  "kernel anchors per modality (capped at training size)");
  cmd->add_option("--width-samples", flags.width_samples,
                  "samples for the kernel width estimate");
  cmd->add_option("--seed", flags.seed, "random seed");
  cmd->add_option("--variant", flags.variant,
                  "full, no_relax, or no_relax_no_kernel");
}

// Merge order: defaults, then preset, then config file, then flags.
TrainSettings merge_train_settings(const CLI::App* cmd,
                                   const TrainFlags& flags,
                                   const std::set<std::string>& path_keys) {
  TrainSettings s;
  fddh_train_options_init(&s.opts);

  std::map<std::string, std::string> file;
  if (!flags.config_path.empty()) file = parse_config_file(flags.config_path);

  s.preset = flags.preset;
  if (s.preset.empty() && file.count("preset")) s.preset = file["preset"];
  if (!s.preset.empty())
    check(fddh_train_options_preset(s.preset.c_str(), &s.opts));

  for (const auto& [key, value] : file) {
    if (key == "preset") {
      continue;  // consumed above
    } else if (key == "mu") {
      s.opts.mu = parse_double(value, "config mu");
    } else if (key == "theta") {
      s.opts.theta = parse_double(value, "config theta");
    } else if (key == "delta") {
      s.opts.delta = parse_double(value, "config delta");
    } else if (key == "gamma") {
      s.opts.gamma = parse_double(value, "config gamma");
    } else if (key == "tol") {
      s.opts.tol = parse_double(value, "config tol");
    } else if (key == "code_length") {
      s.opts.code_length =
          static_cast<int32_t>(parse_int(value, "config code_length"));
    } else if (key == "max_iters") {
      s.opts.max_iters =
          static_cast<int32_t>(parse_int(value, "config max_iters"));
    } else if (key == "anchors") {
      s.opts.anchors =
          static_cast<int32_t>(parse_int(value, "config anchors"));
    } else if (key == "width_samples") {
      s.opts.width_samples =
          static_cast<int32_t>(parse_int(value, "config width_samples"));
    } else if (key == "seed") {
      s.opts.seed = parse_uint(value, "config seed");
    } else if (key == "variant") {
      s.opts.variant = variant_from_string(value);
    } else if (key == "x1" && path_keys.count("x1")) {
      s.x1 = value;
    } else if (key == "x2" && path_keys.count("x2")) {
      s.x2 = value;
    } else if (key == "labels" && path_keys.count("labels")) {
      s.labels = value;
    } else if (key == "model" && path_keys.count("model")) {
      s.model = value;
    } else if (key == "trace" && path_keys.count("trace")) {
      s.trace = value;
    } else {
      die("config '" + flags.config_path + "': unknown key '" + key + "'");
    }
  }

  const auto given = [cmd](const std::string& flag) {
    return cmd->count(flag) > 0;
  };
  if (given("--mu")) s.opts.mu = flags.mu;
  if (given("--theta")) s.opts.theta = flags.theta;
  if (given("--delta")) s.opts.delta = flags.delta;
  if (given("--gamma")) s.opts.gamma = flags.gamma;
  if (given("--tol")) s.opts.tol = flags.tol;
  if (given("--code-length")) s.opts.code_length = flags.code_length;
  if (given("--max-iters")) s.opts.max_iters = flags.max_iters;
  if (given("--anchors")) s.opts.anchors = flags.anchors;
  if (given("--width-samples")) s.opts.width_samples = flags.width_samples;
  if (given("--seed")) s.opts.seed = flags.seed;
  if (!flags.variant.empty()) s.opts.variant = variant_from_string(flags.variant);
  if (!flags.x1.empty()) s.x1 = flags.x1;
  if (!flags.x2.empty()) s.x2 = flags.x2;
  if (!flags.labels.empty()) s.labels = flags.labels;
  if (!flags.model.empty()) s.model = flags.model;
  if (!flags.trace.empty()) s.trace = flags.trace;
  return s;
}

void dump_config(const TrainSettings& s, bool with_paths) {
  if (with_paths) {
    if (!s.x1.empty()) std::cout << "x1 = " << s.x1 << "\n";
    if (!s.x2.empty()) std::cout << "x2 = " << s.x2 << "\n";
    if (!s.labels.empty()) std::cout << "labels = " << s.labels << "\n";
    if (!s.model.empty()) std::cout << "model = " << s.model << "\n";
    if (!s.trace.empty()) std::cout << "trace = " << s.trace << "\n";
  }
  std::cout << "mu = " << fmt(s.opts.mu) << "\n"
            << "theta = " << fmt(s.opts.theta) << "\n"
            << "delta = " << fmt(s.opts.delta) << "\n"
            << "gamma = " << fmt(s.opts.gamma) << "\n"
            << "tol = " << fmt(s.opts.tol) << "\n"
            << "code_length = " << s.opts.code_length << "\n"
            << "max_iters = " << s.opts.max_iters << "\n"
            << "anchors = " << s.opts.anchors << "\n"
            << "width_samples = " << s.opts.width_samples << "\n"
            << "seed = " << s.opts.seed << "\n"
            << "variant = " << variant_to_string(s.opts.variant) << "\n";
}

int run_train(const CLI::App* cmd, const TrainFlags& flags,
              bool dump_only) {
  TrainSettings s = merge_train_settings(
      cmd, flags, {"x1", "x2", "labels", "model", "trace"});
  if (dump_only) {
    dump_config(s, true);
    return 0;
  }
  if (s.x1.empty() || s.x2.empty() || s.labels.empty() || s.model.empty())
    die("train needs --x1, --x2, --labels and --model (flags or config)");

  const MatrixHandle x1 = load_matrix(s.x1);
  const MatrixHandle x2 = load_matrix(s.x2);
  const MatrixHandle labels = load_matrix(s.labels);

  fddh_model* model = nullptr;
  check(fddh_train(x1.get(), x2.get(), labels.get(), &s.opts, &model));
  const ModelHandle guard(model);
  check(fddh_model_save(model, s.model.c_str()));

  if (!s.trace.empty()) {
    fddh_matrix* trace = nullptr;
    check(fddh_model_trace(model, &trace));
    const MatrixHandle trace_guard(trace);
    CsvFile csv(s.trace);
    csv.row({"iteration", "objective"});
    for (int64_t j = 0; j < fddh_matrix_cols(trace); ++j)
      csv.row({std::to_string(j), fmt(cell(trace, 0, j))});
  }

  std::cout << "trained on " << fddh_model_train_count(model)
            << " samples: code length " << fddh_model_code_length(model)
            << ", " << fddh_model_iterations(model) << " iterations, "
            << (fddh_model_converged(model) ? "converged" : "hit sweep cap")
            << "\n"
            << "model written to " << s.model << "\n";
  return 0;
}

// ---------------------------------------------------------------------
// encode

int run_encode(const std::string& model_path, int32_t modality,
               const std::string& input, const std::string& output,
               bool as_csv) {
  const ModelHandle model = load_model(model_path);
  const MatrixHandle raw = load_matrix(input);
  fddh_matrix* codes = nullptr;
  check(fddh_encode(model.get(), modality, raw.get(), &codes));
  const MatrixHandle guard(codes);
  check(fddh_matrix_save(codes, output.c_str(), as_csv ? 1 : 0));
  std::cout << "encoded " << fddh_matrix_cols(codes) << " samples to "
            << output << "\n";
  return 0;
}

// ---------------------------------------------------------------------
// update

int run_update(const std::string& model_path, int32_t modality,
               const std::string& input, const std::string& output_model,
               const std::string& output_codes, int32_t max_rounds) {
  const ModelHandle model = load_model(model_path);
  const MatrixHandle raw = load_matrix(input);
  fddh_matrix* codes = nullptr;
  int32_t rounds = 0;
  check(fddh_online_update(model.get(), modality, raw.get(), max_rounds,
                           &codes, &rounds));
  const MatrixHandle guard(codes);
  check(fddh_model_save(model.get(), output_model.c_str()));
  if (!output_codes.empty())
    check(fddh_matrix_save(codes, output_codes.c_str(), 0));
  std::cout << "folded " << fddh_matrix_cols(codes)
            << " samples into modality " << modality << " in " << rounds
            << " round" << (rounds == 1 ? "" : "s") << "\n"
            << "model written to " << output_model << "\n";
  return 0;
}

// ---------------------------------------------------------------------
// eval

struct EvalDirection {
  std::string name;
  const fddh_matrix* query_codes;
  const fddh_matrix* db_codes;
};

int run_eval(const std::string& q1, const std::string& q2,
             const std::string& qlabels_path, const std::string& db1,
             const std::string& db2, const std::string& dblabels_path,
             const std::vector<int32_t>& top_k, int32_t map_cutoff,
             const std::string& out_dir, bool timings) {
  MatrixHandle query1, query2, database1, database2;
  if (!q1.empty()) query1 = load_matrix(q1);
  if (!q2.empty()) query2 = load_matrix(q2);
  if (!db1.empty()) database1 = load_matrix(db1);
  if (!db2.empty()) database2 = load_matrix(db2);
  const MatrixHandle qlabels = load_matrix(qlabels_path);
  const MatrixHandle dblabels = load_matrix(dblabels_path);

  std::vector<EvalDirection> directions;
  if (query1 && database2)
    directions.push_back({"1to2", query1.get(), database2.get()});
  if (query2 && database1)
    directions.push_back({"2to1", query2.get(), database1.get()});
  if (directions.empty()) {
    die("no evaluable direction: need --query-codes1 with --db-codes2 "
        "and/or --query-codes2 with --db-codes1");
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) die("cannot create output directory '" + out_dir + "'");

  fddh_eval_options options{};
  options.top_k = top_k.empty() ? nullptr : top_k.data();
  options.top_k_count = static_cast<int32_t>(top_k.size());
  options.map_cutoff = map_cutoff;

  CsvFile summary(out_dir + "/summary.csv");
  summary.row({"direction", "metric", "value"});
  for (const EvalDirection& dir : directions) {
    const auto started = std::chrono::steady_clock::now();
    fddh_eval_report* report = nullptr;
    check(fddh_evaluate(dir.query_codes, qlabels.get(), dir.db_codes,
                        dblabels.get(), &options, &report));
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - started;

    const std::string map_name =
        map_cutoff > 0 ? "map@" + std::to_string(map_cutoff) : "map";
    summary.row({dir.name, map_name, fmt(fddh_eval_mean_ap(report))});
    for (int32_t t = 0; t < fddh_eval_top_k_count(report); ++t) {
      int32_t requested = 0, effective = 0;
      double precision = 0.0;
      check(fddh_eval_top_k(report, t, &requested, &effective, &precision));
      if (requested != effective) {
        std::cerr << "warning: top-" << requested
                  << " clamped to database size " << effective << "\n";
      }
      summary.row({dir.name, "top" + std::to_string(requested) + "_precision",
                   fmt(precision)});
    }
    if (timings)
      summary.row({dir.name, "runtime_seconds", fmt(elapsed.count())});

    fddh_matrix* per_query = nullptr;
    check(fddh_eval_per_query_ap(report, &per_query));
    const MatrixHandle per_query_guard(per_query);
    CsvFile ap_csv(out_dir + "/per_query_ap_" + dir.name + ".csv");
    ap_csv.row({"query_index", "ap"});
    for (int64_t j = 0; j < fddh_matrix_cols(per_query); ++j)
      ap_csv.row({std::to_string(j), fmt(cell(per_query, 0, j))});

    fddh_matrix* curve = nullptr;
    check(fddh_eval_pr_curve(report, &curve));
    const MatrixHandle curve_guard(curve);
    CsvFile pr_csv(out_dir + "/pr_curve_" + dir.name + ".csv");
    pr_csv.row({"radius", "precision", "recall"});
    for (int64_t i = 0; i < fddh_matrix_rows(curve); ++i) {
      pr_csv.row({std::to_string(static_cast<int64_t>(cell(curve, i, 0))),
                  fmt(cell(curve, i, 1)), fmt(cell(curve, i, 2))});
    }
    std::cout << dir.name << " mean ap " << fmt(fddh_eval_mean_ap(report))
              << "\n";
    fddh_eval_report_destroy(report);
  }
  std::cout << "reports written to " << out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------
// diagnose

int run_diagnose_errors(const std::string& model_path,
                        const std::string& labels_path, bool use_dragged,
                        uint64_t pairs, uint64_t seed,
                        const std::string& out_dir) {
  const ModelHandle model = load_model(model_path);
  MatrixHandle labels;
  if (!use_dragged) {
    if (labels_path.empty())
      die("diagnose --mode errors needs --labels (or --use-dragged)");
    labels = load_matrix(labels_path);
  }
  fddh_error_report* report = nullptr;
  check(fddh_error_check(model.get(), labels.get(), use_dragged ? 1 : 0,
                         pairs, seed, &report));

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) die("cannot create output directory '" + out_dir + "'");

  {
    CsvFile csv(out_dir + "/error_summary.csv");
    csv.row({"metric", "value"});
    csv.row({"kappa", fmt(fddh_error_kappa(report))});
    csv.row({"pairs", std::to_string(fddh_error_pairs(report))});
    csv.row({"pairs_same_label",
             std::to_string(fddh_error_pairs_same_label(report))});
    csv.row({"upper_violations",
             std::to_string(fddh_error_upper_violations(report))});
    csv.row({"lower_violations",
             std::to_string(fddh_error_lower_violations(report))});
    csv.row({"upper_frac_within_tenth",
             fmt(fddh_error_upper_frac(report))});
    csv.row({"lower_frac_within_tenth",
             fmt(fddh_error_lower_frac(report))});
  }
  {
    CsvFile csv(out_dir + "/error_hist.csv");
    csv.row({"bound", "bin_center", "count"});
    for (int which = 0; which < 2; ++which) {
      fddh_matrix* hist = nullptr;
      check(fddh_error_histogram(report, which, &hist));
      const MatrixHandle guard(hist);
      const char* name = which == 0 ? "upper" : "lower";
      for (int64_t i = 0; i < fddh_matrix_rows(hist); ++i) {
        csv.row({name, fmt(cell(hist, i, 0)),
                 std::to_string(static_cast<int64_t>(cell(hist, i, 1)))});
      }
    }
  }
  std::cout << "pairs " << fddh_error_pairs(report) << ", upper violations "
            << fddh_error_upper_violations(report) << ", lower violations "
            << fddh_error_lower_violations(report) << "\n"
            << "reports written to " << out_dir << "\n";
  fddh_error_report_destroy(report);
  return 0;
}

int run_diagnose_stability(const std::vector<int32_t>& sizes,
                           const std::vector<uint64_t>& seeds,
                           const fddh_stability_options& base,
                           const std::string& out_dir) {
  fddh_stability_options opts = base;
  opts.sizes = sizes.empty() ? nullptr : sizes.data();
  opts.size_count = static_cast<int32_t>(sizes.size());
  opts.seeds = seeds.empty() ? nullptr : seeds.data();
  opts.seed_count = static_cast<int32_t>(seeds.size());

  fddh_stability_report* report = nullptr;
  check(fddh_stability_run(&opts, &report));

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) die("cannot create output directory '" + out_dir + "'");

  fddh_matrix* points = nullptr;
  check(fddh_stability_points(report, &points));
  const MatrixHandle points_guard(points);
  {
    CsvFile csv(out_dir + "/stability_points.csv");
    csv.row({"train_size", "total_size", "mean_drift", "bound"});
    for (int64_t i = 0; i < fddh_matrix_rows(points); ++i) {
      csv.row({std::to_string(static_cast<int64_t>(cell(points, i, 0))),
               std::to_string(static_cast<int64_t>(cell(points, i, 1))),
               fmt(cell(points, i, 2)), fmt(cell(points, i, 3))});
    }
  }
  {
    CsvFile csv(out_dir + "/stability_summary.csv");
    csv.row({"metric", "value"});
    csv.row({"slope", fmt(fddh_stability_slope(report))});
    csv.row({"intercept", fmt(fddh_stability_intercept(report))});
    csv.row({"excluded_points",
             std::to_string(fddh_stability_excluded(report))});
  }
  std::cout << "drift slope " << fmt(fddh_stability_slope(report))
            << " over " << fddh_matrix_rows(points) << " sizes\n"
            << "reports written to " << out_dir << "\n";
  fddh_stability_report_destroy(report);
  return 0;
}

int run_diagnose_convergence(const CLI::App* cmd, const TrainFlags& flags,
                             double query_fraction,
                             const std::string& out_dir) {
  TrainSettings s =
      merge_train_settings(cmd, flags, {"x1", "x2", "labels"});
  if (s.x1.empty() || s.x2.empty() || s.labels.empty())
    die("diagnose --mode convergence needs --x1, --x2 and --labels");

  const MatrixHandle x1 = load_matrix(s.x1);
  const MatrixHandle x2 = load_matrix(s.x2);
  const MatrixHandle labels = load_matrix(s.labels);

  fddh_matrix* rows = nullptr;
  check(fddh_convergence_run(x1.get(), x2.get(), labels.get(), &s.opts,
                             query_fraction, &rows));
  const MatrixHandle guard(rows);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) die("cannot create output directory '" + out_dir + "'");

  CsvFile csv(out_dir + "/convergence.csv");
  csv.row({"iteration", "objective", "map_1to2", "map_2to1"});
  for (int64_t i = 0; i < fddh_matrix_rows(rows); ++i) {
    csv.row({std::to_string(static_cast<int64_t>(cell(rows, i, 0))),
             fmt(cell(rows, i, 1)), fmt(cell(rows, i, 2)),
             fmt(cell(rows, i, 3))});
  }
  std::cout << fddh_matrix_rows(rows) << " iteration rows written to "
            << out_dir << "/convergence.csv\n";
  return 0;
}

// ---------------------------------------------------------------------
// synth

int run_synth(int64_t n, int64_t queries, int32_t classes, int32_t d1,
              int32_t d2, double noise, uint64_t seed,
              const std::string& out_x1, const std::string& out_x2,
              const std::string& out_labels, const std::string& out_qx1,
              const std::string& out_qx2, const std::string& out_qlabels,
              bool as_csv) {
  if (queries > 0 &&
      (out_qx1.empty() || out_qx2.empty() || out_qlabels.empty())) {
    die("--queries needs --out-query-x1, --out-query-x2 and "
        "--out-query-labels");
  }
  fddh_matrix *x1 = nullptr, *x2 = nullptr, *labels = nullptr;
  check(fddh_synth(n + queries, classes, d1, d2, noise, seed, &x1, &x2,
                   &labels));
  const MatrixHandle gx1(x1), gx2(x2), glabels(labels);

  const int csv_flag = as_csv ? 1 : 0;
  const auto save_slice = [&](const fddh_matrix* m, int64_t first,
                              int64_t count, const std::string& path) {
    fddh_matrix* slice = nullptr;
    check(fddh_matrix_slice_cols(m, first, count, &slice));
    const MatrixHandle guard(slice);
    check(fddh_matrix_save(slice, path.c_str(), csv_flag));
  };
  save_slice(x1, 0, n, out_x1);
  save_slice(x2, 0, n, out_x2);
  save_slice(labels, 0, n, out_labels);
  if (queries > 0) {
    save_slice(x1, n, queries, out_qx1);
    save_slice(x2, n, queries, out_qx2);
    save_slice(labels, n, queries, out_qlabels);
  }
  std::cout << "wrote " << n << " training and " << queries
            << " query samples\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fddh: supervised discrete hashing for two-modality "
               "cross-modal retrieval"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fddh_version()));

  // train
  auto* train = app.add_subcommand("train", "fit a model from features");
  TrainFlags train_flags;
  add_train_options(train, train_flags);
  train->add_option("--x1", train_flags.x1, "modality-1 features (d1 x n)");
  train->add_option("--x2", train_flags.x2, "modality-2 features (d2 x n)");
  train->add_option("--labels", train_flags.labels, "labels (c x n, 0/1)");
  train->add_option("--model", train_flags.model, "output model archive");
  train->add_option("--trace", train_flags.trace,
                    "optional objective trace CSV");
  bool train_dump = false;
  train->add_flag("--dump-config", train_dump,
                  "print the merged configuration and exit");

  // encode
  auto* encode = app.add_subcommand("encode", "hash out-of-sample features");
  std::string enc_model, enc_input, enc_output;
  int32_t enc_modality = 1;
  bool enc_csv = false;
  encode->add_option("--model", enc_model, "model archive")->required();
  encode->add_option("--modality", enc_modality, "1 or 2")->required();
  encode->add_option("--input", enc_input, "raw features (d x p)")
      ->required();
  encode->add_option("--output", enc_output, "output code matrix")
      ->required();
  encode->add_flag("--csv", enc_csv, "write codes as csv instead of binary");

  // update
  auto* update = app.add_subcommand(
      "update", "fold new samples into a modality's projection");
  std::string upd_model, upd_input, upd_out_model, upd_out_codes;
  int32_t upd_modality = 1, upd_rounds = 20;
  update->add_option("--model", upd_model, "model archive")->required();
  update->add_option("--modality", upd_modality, "1 or 2")->required();
  update->add_option("--input", upd_input, "new raw samples (d x m)")
      ->required();
  update->add_option("--output-model", upd_out_model,
                     "refreshed model archive")
      ->required();
  update->add_option("--output-codes", upd_out_codes,
                     "optional codes assigned to the new samples");
  update->add_option("--max-rounds", upd_rounds,
                     "cap on refinement rounds");

  // eval
  auto* eval = app.add_subcommand("eval", "score retrieval quality");
  std::string ev_q1, ev_q2, ev_qlabels, ev_db1, ev_db2, ev_dblabels,
      ev_out_dir;
  std::vector<int32_t> ev_top_k = {50};
  int32_t ev_cutoff = 0;
  bool ev_timings = false;
  eval->add_option("--query-codes1", ev_q1, "modality-1 query codes");
  eval->add_option("--query-codes2", ev_q2, "modality-2 query codes");
  eval->add_option("--query-labels", ev_qlabels, "query labels")->required();
  eval->add_option("--db-codes1", ev_db1, "modality-1 database codes");
  eval->add_option("--db-codes2", ev_db2, "modality-2 database codes");
  eval->add_option("--db-labels", ev_dblabels, "database labels")
      ->required();
  eval->add_option("--top-k", ev_top_k,
                   "precision cutoffs (repeat or comma-separate)")
      ->delimiter(',');
  eval->add_option("--map-cutoff", ev_cutoff,
                   "rank cutoff for mean AP (0 = full ranking)");
  eval->add_option("--out-dir", ev_out_dir, "report directory")->required();
  eval->add_flag("--timings", ev_timings,
                 "include wall-clock rows in the summary");

  // diagnose
  auto* diagnose =
      app.add_subcommand("diagnose", "model and theory diagnostics");
  std::string diag_mode, diag_out_dir;
  diagnose
      ->add_option("--mode", diag_mode,
                   "errors, stability, or convergence")
      ->required();
  diagnose->add_option("--out-dir", diag_out_dir, "report directory")
      ->required();
  // errors mode
  std::string diag_model, diag_labels;
  bool diag_use_dragged = false;
  uint64_t diag_pairs = 10000, diag_seed = 0;
  diagnose->add_option("--model", diag_model, "model archive (errors mode)");
  diagnose->add_option("--labels", diag_labels,
                       "training labels (errors mode)");
  diagnose->add_flag("--use-dragged", diag_use_dragged,
                     "analyse the stored dragged labels instead");
  diagnose->add_option("--pairs", diag_pairs, "sampled pairs (errors mode)");
  diagnose->add_option("--pair-seed", diag_seed,
                       "pair-sampling seed (errors mode)");
  // stability mode
  std::vector<int32_t> diag_sizes;
  std::vector<uint64_t> diag_seeds;
  fddh_stability_options diag_stab{};
  fddh_stability_options_init(&diag_stab);
  diagnose->add_option("--sizes", diag_sizes, "training sizes")
      ->delimiter(',');
  diagnose->add_option("--seeds", diag_seeds, "experiment seeds")
      ->delimiter(',');
  diagnose->add_option("--batch", diag_stab.batch, "online batch size");
  diagnose->add_option("--classes", diag_stab.classes, "label classes");
  diagnose->add_option("--d1", diag_stab.d1, "modality-1 dimension");
  diagnose->add_option("--d2", diag_stab.d2, "modality-2 dimension");
  diagnose->add_option("--noise", diag_stab.noise, "synthetic noise level");
  diagnose->add_option("--stability-code-length", diag_stab.code_length,
                       "code length (stability mode)");
  diagnose->add_option("--stability-anchors", diag_stab.anchors,
                       "kernel anchors (stability mode)");
  diagnose->add_option("--train-iters", diag_stab.train_iters,
                       "sweeps per training run (stability mode)");
  diagnose->add_option("--stability-gamma", diag_stab.gamma,
                       "normalized ridge weight (stability mode)");
  diagnose->add_option("--modality", diag_stab.modality,
                       "modality under test (stability mode)");
  // convergence mode
  TrainFlags diag_train_flags;
  add_train_options(diagnose, diag_train_flags);
  diagnose->add_option("--x1", diag_train_flags.x1,
                       "modality-1 features (convergence mode)");
  diagnose->add_option("--x2", diag_train_flags.x2,
                       "modality-2 features (convergence mode)");
  diagnose->add_option("--conv-labels", diag_train_flags.labels,
                       "labels (convergence mode)");
  double diag_query_fraction = 0.1;
  diagnose->add_option("--query-fraction", diag_query_fraction,
                       "held-out query fraction (convergence mode)");

  // synth
  auto* synth =
      app.add_subcommand("synth", "generate labeled synthetic data");
  int64_t sy_n = 1000, sy_queries = 0;
  int32_t sy_classes = 4, sy_d1 = 16, sy_d2 = 12;
  double sy_noise = 0.1;
  uint64_t sy_seed = 0;
  std::string sy_x1, sy_x2, sy_labels, sy_qx1, sy_qx2, sy_qlabels;
  bool sy_csv = false;
  synth->add_option("--n", sy_n, "training samples")->required();
  synth->add_option("--queries", sy_queries, "held-out query samples");
  synth->add_option("--classes", sy_classes, "label classes");
  synth->add_option("--d1", sy_d1, "modality-1 dimension");
  synth->add_option("--d2", sy_d2, "modality-2 dimension");
  synth->add_option("--noise", sy_noise, "noise level");
  synth->add_option("--seed", sy_seed, "random seed");
  synth->add_option("--out-x1", sy_x1, "output features")->required();
  synth->add_option("--out-x2", sy_x2, "output features")->required();
  synth->add_option("--out-labels", sy_labels, "output labels")->required();
  synth->add_option("--out-query-x1", sy_qx1, "query features");
  synth->add_option("--out-query-x2", sy_qx2, "query features");
  synth->add_option("--out-query-labels", sy_qlabels, "query labels");
  synth->add_flag("--csv", sy_csv, "write csv instead of binary");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) return run_train(train, train_flags, train_dump);
  if (encode->parsed())
    return run_encode(enc_model, enc_modality, enc_input, enc_output,
                      enc_csv);
  if (update->parsed())
    return run_update(upd_model, upd_modality, upd_input, upd_out_model,
                      upd_out_codes, upd_rounds);
  if (eval->parsed())
    return run_eval(ev_q1, ev_q2, ev_qlabels, ev_db1, ev_db2, ev_dblabels,
                    ev_top_k, ev_cutoff, ev_out_dir, ev_timings);
  if (diagnose->parsed()) {
    if (diag_mode == "errors") {
      if (diag_model.empty()) die("diagnose --mode errors needs --model");
      return run_diagnose_errors(diag_model, diag_labels, diag_use_dragged,
                                 diag_pairs, diag_seed, diag_out_dir);
    }
    if (diag_mode == "stability") {
      return run_diagnose_stability(diag_sizes, diag_seeds, diag_stab,
                                    diag_out_dir);
    }
    if (diag_mode == "convergence") {
      return run_diagnose_convergence(diagnose, diag_train_flags,
                                      diag_query_fraction, diag_out_dir);
    }
    die("unknown diagnose mode '" + diag_mode +
        "' (expected errors, stability, or convergence)");
  }
  if (synth->parsed())
    return run_synth(sy_n, sy_queries, sy_classes, sy_d1, sy_d2, sy_noise,
                     sy_seed, sy_x1, sy_x2, sy_labels, sy_qx1, sy_qx2,
                     sy_qlabels, sy_csv);
  return 0;
}
