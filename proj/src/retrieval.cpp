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

#include "retrieval.hpp"

#include <algorithm>
#include <bit>

#include "dataset.hpp"

namespace fddh {

PackedCodes pack_codes(const Matrix& codes) {
  require(codes.rows() >= 1, Status::kShapeError,
          "code matrix needs at least one row");
  PackedCodes packed;
  packed.bits = static_cast<int>(codes.rows());
  packed.count = static_cast<int>(codes.cols());
  packed.words_per_code = (packed.bits + 63) / 64;
  packed.words.assign(
      static_cast<std::size_t>(packed.count) * packed.words_per_code, 0);
  for (int j = 0; j < packed.count; ++j) {
    std::uint64_t* out =
        packed.words.data() +
        static_cast<std::size_t>(j) * packed.words_per_code;
    for (int i = 0; i < packed.bits; ++i) {
      const double v = codes(i, j);
      if (v != 1.0 && v != -1.0) {
        fail(Status::kParamError,
             MessageBuilder() << "code entry (" << i << ", " << j << ") is "
                              << v << ", codes must be -1 or +1");
      }
      if (v == 1.0) out[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }
  return packed;
}

int hamming_distance(const PackedCodes& a, int i, const PackedCodes& b,
                     int j) {
  require(a.bits == b.bits, Status::kShapeError,
          MessageBuilder() << "code lengths differ: " << a.bits << " vs "
                           << b.bits);
  const std::uint64_t* pa = a.code(i);
  const std::uint64_t* pb = b.code(j);
  int dist = 0;
  for (int w = 0; w < a.words_per_code; ++w)
    dist += std::popcount(pa[w] ^ pb[w]);
  return dist;
}

int hamming_distance(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), Status::kShapeError,
          MessageBuilder() << "code lengths differ: " << a.size() << " vs "
                           << b.size());
  const PackedCodes pa = pack_codes(a);
  const PackedCodes pb = pack_codes(b);
  return hamming_distance(pa, 0, pb, 0);
}

Ranking rank_database(const PackedCodes& queries, int query_index,
                      const PackedCodes& database) {
  require(query_index >= 0 && query_index < queries.count,
          Status::kParamError, "query index out of range");
  require(database.count >= 1, Status::kShapeError, "empty database");
  Ranking r;
  r.distances.resize(database.count);
  std::vector<int> raw(database.count);
  for (int j = 0; j < database.count; ++j)
    raw[j] = hamming_distance(queries, query_index, database, j);
  // Counting sort over the distance range keeps ranking O(n + bits) and
  // ties in ascending index order.
  std::vector<int> bucket_start(queries.bits + 2, 0);
  for (int j = 0; j < database.count; ++j) ++bucket_start[raw[j] + 1];
  for (int d = 1; d <= queries.bits + 1; ++d)
    bucket_start[d] += bucket_start[d - 1];
  r.order.resize(database.count);
  std::vector<int> cursor(bucket_start.begin(), bucket_start.end());
  for (int j = 0; j < database.count; ++j) r.order[cursor[raw[j]]++] = j;
  for (int pos = 0; pos < database.count; ++pos)
    r.distances[pos] = raw[r.order[pos]];
  return r;
}

double average_precision(const std::vector<char>& relevance, int cutoff) {
  const int total = static_cast<int>(
      std::count(relevance.begin(), relevance.end(), char{1}));
  const int limit =
      cutoff > 0 ? std::min<int>(cutoff, static_cast<int>(relevance.size()))
                 : static_cast<int>(relevance.size());
  const int denom = cutoff > 0 ? std::min(cutoff, total) : total;
  if (denom == 0) return 0.0;
  double sum = 0.0;
  int hits = 0;
  for (int r = 0; r < limit; ++r) {
    if (relevance[r]) {
      ++hits;
      sum += static_cast<double>(hits) / (r + 1);
    }
  }
  return sum / denom;
}

namespace {

// Label agreement: both matrices hold 0/1 entries, so a dot product >= 1
// means at least one shared label.
bool relevant(const Matrix& a, int i, const Matrix& b, int j) {
  return a.col(i).dot(b.col(j)) > 0.5;
}

}  // namespace

EvalReport evaluate(const Matrix& query_codes, const Matrix& query_labels,
                    const Matrix& db_codes, const Matrix& db_labels,
                    const EvalOptions& options) {
  require(query_codes.rows() == db_codes.rows(), Status::kShapeError,
          MessageBuilder() << "code lengths differ: queries have "
                           << query_codes.rows() << ", database has "
                           << db_codes.rows());
  require(query_codes.cols() >= 1, Status::kShapeError, "no queries");
  require(db_codes.cols() >= 1, Status::kShapeError, "empty database");
  require(query_labels.cols() == query_codes.cols(), Status::kShapeError,
          MessageBuilder() << query_labels.cols() << " query labels for "
                           << query_codes.cols() << " query codes");
  require(db_labels.cols() == db_codes.cols(), Status::kShapeError,
          MessageBuilder() << db_labels.cols() << " database labels for "
                           << db_codes.cols() << " database codes");
  require(query_labels.rows() == db_labels.rows(), Status::kShapeError,
          MessageBuilder() << "label class counts differ: "
                           << query_labels.rows() << " vs "
                           << db_labels.rows());
  check_label_matrix(query_labels, "query labels");
  check_label_matrix(db_labels, "database labels");
  require(options.map_cutoff >= 0, Status::kParamError,
          "ranking cutoff must be >= 0");

  const PackedCodes queries = pack_codes(query_codes);
  const PackedCodes database = pack_codes(db_codes);
  const int bits = queries.bits;
  const int db_size = database.count;

  EvalReport report;
  report.requested_k = options.top_k;
  for (int k : options.top_k) {
    require(k >= 1, Status::kParamError,
            MessageBuilder() << "top-k cutoff must be >= 1, got " << k);
    const int eff = std::min(k, db_size);
    report.k_clamped = report.k_clamped || eff != k;
    report.effective_k.push_back(eff);
  }
  report.top_k_precision.assign(options.top_k.size(), 0.0);
  report.per_query_ap.reserve(queries.count);

  // Micro-averaged radius sweep: totals across queries per radius.
  std::vector<double> retrieved_at(bits + 1, 0.0);
  std::vector<double> relevant_at(bits + 1, 0.0);
  double total_relevant_all = 0.0;

  std::vector<char> rel;
  for (int qi = 0; qi < queries.count; ++qi) {
    const Ranking ranking = rank_database(queries, qi, database);
    rel.resize(db_size);
    for (int pos = 0; pos < db_size; ++pos)
      rel[pos] = relevant(query_labels, qi, db_labels, ranking.order[pos])
                     ? 1
                     : 0;
    report.per_query_ap.push_back(
        average_precision(rel, options.map_cutoff));
    for (std::size_t t = 0; t < options.top_k.size(); ++t) {
      const int eff = report.effective_k[t];
      int hits = 0;
      for (int pos = 0; pos < eff; ++pos) hits += rel[pos];
      report.top_k_precision[t] += static_cast<double>(hits) / eff;
    }
    // Distances arrive sorted, so per-radius counts are prefix sums.
    int pos = 0;
    double rel_seen = 0.0;
    for (int radius = 0; radius <= bits; ++radius) {
      while (pos < db_size && ranking.distances[pos] <= radius) {
        rel_seen += rel[pos];
        ++pos;
      }
      retrieved_at[radius] += pos;
      relevant_at[radius] += rel_seen;
    }
    total_relevant_all +=
        std::count(rel.begin(), rel.end(), char{1});
  }

  const double query_count = queries.count;
  double ap_sum = 0.0;
  for (double ap : report.per_query_ap) ap_sum += ap;
  report.mean_ap = ap_sum / query_count;
  for (double& p : report.top_k_precision) p /= query_count;
  for (int radius = 0; radius <= bits; ++radius) {
    PrPoint point;
    point.radius = radius;
    point.precision = retrieved_at[radius] > 0.0
                          ? relevant_at[radius] / retrieved_at[radius]
                          : 1.0;
    point.recall = total_relevant_all > 0.0
                       ? relevant_at[radius] / total_relevant_all
                       : 0.0;
    report.pr_curve.push_back(point);
  }
  return report;
}

double mean_average_precision(const Matrix& query_codes,
                              const Matrix& query_labels,
                              const Matrix& db_codes,
                              const Matrix& db_labels, int cutoff) {
  EvalOptions options;
  options.top_k = {};
  options.map_cutoff = cutoff;
  return evaluate(query_codes, query_labels, db_codes, db_labels, options)
      .mean_ap;
}

double top_k_precision(const Matrix& query_codes, const Matrix& query_labels,
                       const Matrix& db_codes, const Matrix& db_labels,
                       int k) {
  EvalOptions options;
  options.top_k = {k};
  return evaluate(query_codes, query_labels, db_codes, db_labels, options)
      .top_k_precision[0];
}

std::vector<PrPoint> pr_curve(const Matrix& query_codes,
                              const Matrix& query_labels,
                              const Matrix& db_codes,
                              const Matrix& db_labels) {
  EvalOptions options;
  options.top_k = {};
  return evaluate(query_codes, query_labels, db_codes, db_labels, options)
      .pr_curve;
}

}  // namespace fddh
