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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace fddh::io {

// On-disk matrix container, magic "FDH1": u32 rows, u32 cols, then
// rows*cols doubles in row-major order, everything little-endian. Doubles
// round-trip bit for bit. CSV ('.' decimal, ',' separator, no header) is
// accepted as a fallback on load and available on save for interop.
enum class MatrixFormat { kAuto, kBinary, kCsv };

Matrix load_matrix(const std::string& path,
                   MatrixFormat format = MatrixFormat::kAuto);
void save_matrix(const Matrix& m, const std::string& path,
                 MatrixFormat format = MatrixFormat::kBinary);

// In-memory form of a "FDHM" archive: named FDH1 sections in a fixed
// order followed by key=value metadata lines. Metadata keys are written
// sorted so identical contents produce identical bytes.
struct ModelArchive {
  std::vector<std::pair<std::string, Matrix>> sections;
  std::map<std::string, std::string> metadata;

  bool has_section(const std::string& name) const;
  const Matrix& section(const std::string& name) const;  // throws if absent
  void add_section(const std::string& name, Matrix m);

  bool has_meta(const std::string& key) const;
  const std::string& meta(const std::string& key) const;  // throws if absent
  double meta_f64(const std::string& key) const;
  std::int64_t meta_i64(const std::string& key) const;
  std::uint64_t meta_u64(const std::string& key) const;
  void set_meta(const std::string& key, const std::string& value);
  void set_meta_f64(const std::string& key, double value);
  void set_meta_i64(const std::string& key, std::int64_t value);
  void set_meta_u64(const std::string& key, std::uint64_t value);
};

inline constexpr std::uint32_t kArchiveVersion = 1;

void save_archive(const ModelArchive& archive, const std::string& path);
ModelArchive load_archive(const std::string& path);

// Shortest decimal form that parses back to the same double ("%.17g").
std::string format_f64(double v);

// Locale-independent double parse of a full token; throws on trailing
// garbage or non-finite results.
double parse_f64(const std::string& token, const std::string& context);

}  // namespace fddh::io
