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

#pragma once

#include <vector>

#include "common.hpp"

namespace fddh {

/// Sign codes packed 64 bits per word (+1 -> set bit) so distances reduce
/// to XOR plus popcount.
struct PackedCodes {
  int bits = 0;   // code length
  int count = 0;  // number of codes
  int words_per_code = 0;
  std::vector<std::uint64_t> words;

  const std::uint64_t* code(int i) const {
    return words.data() + static_cast<std::size_t>(i) * words_per_code;
  }
};

// Validates entries are exactly -1 or +1.
PackedCodes pack_codes(const Matrix& codes);

int hamming_distance(const PackedCodes& a, int i, const PackedCodes& b,
                     int j);
// Column-vector convenience used by tests and small callers.
int hamming_distance(const Vector& a, const Vector& b);

/// Database order sorted by (distance, index); index breaks ties so the
/// ranking is reproducible.
struct Ranking {
  std::vector<int> order;
  std::vector<int> distances;  // aligned with order
};

Ranking rank_database(const PackedCodes& queries, int query_index,
                      const PackedCodes& database);

/// Average precision over a full ranked relevance list. With cutoff > 0
/// only the top `cutoff` ranks contribute and the normalizer becomes
/// min(cutoff, total relevant). A query with no relevant items scores 0.
double average_precision(const std::vector<char>& relevance, int cutoff = 0);

struct PrPoint {
  int radius = 0;
  double precision = 1.0;  // empty retrieval counts as precision 1
  double recall = 0.0;
};

struct EvalOptions {
  std::vector<int> top_k = {50};
  int map_cutoff = 0;  // 0 = full-ranking mAP
};

struct EvalReport {
  double mean_ap = 0.0;
  std::vector<double> per_query_ap;
  std::vector<int> requested_k;
  std::vector<int> effective_k;  // after clamping to the database size
  std::vector<double> top_k_precision;
  bool k_clamped = false;
  std::vector<PrPoint> pr_curve;  // radii 0..bits, micro-averaged
};

/// Cross-modal evaluation of one direction: every query is ranked against
/// the whole database; an item is relevant when it shares at least one
/// label with the query.
EvalReport evaluate(const Matrix& query_codes, const Matrix& query_labels,
                    const Matrix& db_codes, const Matrix& db_labels,
                    const EvalOptions& options);

// Single-metric conveniences built on evaluate().
double mean_average_precision(const Matrix& query_codes,
                              const Matrix& query_labels,
                              const Matrix& db_codes,
                              const Matrix& db_labels, int cutoff = 0);
double top_k_precision(const Matrix& query_codes, const Matrix& query_labels,
                       const Matrix& db_codes, const Matrix& db_labels,
                       int k);
std::vector<PrPoint> pr_curve(const Matrix& query_codes,
                              const Matrix& query_labels,
                              const Matrix& db_codes,
                              const Matrix& db_labels);

}  // namespace fddh
