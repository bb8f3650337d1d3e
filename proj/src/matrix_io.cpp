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

#include "matrix_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace fddh::io {

namespace {

constexpr char kMatrixMagic[4] = {'F', 'D', 'H', '1'};
constexpr char kArchiveMagic[4] = {'F', 'D', 'H', 'M'};

void encode_u32(std::uint32_t v, unsigned char out[4]) {
  out[0] = static_cast<unsigned char>(v & 0xff);
  out[1] = static_cast<unsigned char>((v >> 8) & 0xff);
  out[2] = static_cast<unsigned char>((v >> 16) & 0xff);
  out[3] = static_cast<unsigned char>((v >> 24) & 0xff);
}

std::uint32_t decode_u32(const unsigned char in[4]) {
  return static_cast<std::uint32_t>(in[0]) |
         (static_cast<std::uint32_t>(in[1]) << 8) |
         (static_cast<std::uint32_t>(in[2]) << 16) |
         (static_cast<std::uint32_t>(in[3]) << 24);
}

void encode_f64(double v, unsigned char out[8]) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i)
    out[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
}

double decode_f64(const unsigned char in[8]) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

// Byte-counting reader so truncation errors can report where they hit.
class Reader {
 public:
  Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    require(in_.good(), Status::kIoError,
            MessageBuilder() << "cannot open '" << path << "' for reading");
  }

  void read_bytes(void* out, std::size_t count, const char* what) {
    in_.read(static_cast<char*>(out), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in_.gcount()) != count) {
      fail(Status::kParseError,
           MessageBuilder() << "'" << path_ << "': truncated while reading "
                            << what << " at byte " << offset_ + in_.gcount());
    }
    offset_ += count;
  }

  std::uint32_t read_u32(const char* what) {
    unsigned char buf[4];
    read_bytes(buf, 4, what);
    return decode_u32(buf);
  }

  // Remaining bytes to end of file.
  std::string read_rest() {
    std::string rest;
    char buf[4096];
    while (in_.read(buf, sizeof(buf)) || in_.gcount() > 0) {
      rest.append(buf, static_cast<std::size_t>(in_.gcount()));
      offset_ += static_cast<std::size_t>(in_.gcount());
      if (!in_) break;
    }
    return rest;
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

  std::size_t offset() const { return offset_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t offset_ = 0;
};

class Writer {
 public:
  Writer(const std::string& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    require(out_.good(), Status::kIoError,
            MessageBuilder() << "cannot open '" << path << "' for writing");
  }

  void write_bytes(const void* data, std::size_t count) {
    out_.write(static_cast<const char*>(data),
               static_cast<std::streamsize>(count));
  }

  void write_u32(std::uint32_t v) {
    unsigned char buf[4];
    encode_u32(v, buf);
    write_bytes(buf, 4);
  }

  void write_f64(double v) {
    unsigned char buf[8];
    encode_f64(v, buf);
    write_bytes(buf, 8);
  }

  void finish() {
    out_.flush();
    require(out_.good(), Status::kIoError,
            MessageBuilder() << "write to '" << path_ << "' failed");
  }

 private:
  std::string path_;
  std::ofstream out_;
};

// Matrix body shared by standalone files and archive sections.
Matrix read_matrix_body(Reader& r, const std::string& context) {
  char magic[4];
  r.read_bytes(magic, 4, "matrix magic");
  require(std::memcmp(magic, kMatrixMagic, 4) == 0, Status::kParseError,
          MessageBuilder() << context << ": bad matrix magic");
  const std::uint32_t rows = r.read_u32("row count");
  const std::uint32_t cols = r.read_u32("column count");
  require(rows > 0, Status::kParseError,
          MessageBuilder() << context << ": empty matrix (zero rows)");
  Matrix m(rows, cols);
  std::vector<unsigned char> buf(static_cast<std::size_t>(cols) * 8);
  for (std::uint32_t i = 0; i < rows; ++i) {
    if (cols == 0) break;
    r.read_bytes(buf.data(), buf.size(), "matrix data");
    for (std::uint32_t j = 0; j < cols; ++j) {
      const double v = decode_f64(buf.data() + 8 * j);
      if (!std::isfinite(v)) {
        fail(Status::kParseError,
             MessageBuilder() << context << ": non-finite value at row " << i
                              << ", column " << j);
      }
      m(static_cast<int>(i), static_cast<int>(j)) = v;
    }
  }
  return m;
}

void write_matrix_body(Writer& w, const Matrix& m) {
  w.write_bytes(kMatrixMagic, 4);
  w.write_u32(static_cast<std::uint32_t>(m.rows()));
  w.write_u32(static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.write_f64(m(i, j));
}

Matrix load_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Status::kIoError,
          MessageBuilder() << "cannot open '" << path << "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // blank lines are skipped
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string token =
          line.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start);
      row.push_back(parse_f64(token, MessageBuilder()
                                         << "'" << path << "' line "
                                         << line_no));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      fail(Status::kParseError,
           MessageBuilder() << "'" << path << "' line " << line_no
                            << ": expected " << width << " fields, got "
                            << row.size());
    }
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), Status::kParseError,
          MessageBuilder() << "'" << path << "': empty matrix (no rows)");
  Matrix m(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

void save_csv(const Matrix& m, const std::string& path) {
  require(m.cols() > 0, Status::kParamError,
          MessageBuilder() << "cannot write a zero-column matrix as csv ('"
                           << path << "')");
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), Status::kIoError,
          MessageBuilder() << "cannot open '" << path << "' for writing");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_f64(m(i, j));
    }
    out << '\n';
  }
  out.flush();
  require(out.good(), Status::kIoError,
          MessageBuilder() << "write to '" << path << "' failed");
}

// Peeks at the first bytes to pick binary vs csv.
MatrixFormat sniff_format(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Status::kIoError,
          MessageBuilder() << "cannot open '" << path << "' for reading");
  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::memcmp(magic, kMatrixMagic, 4) == 0)
    return MatrixFormat::kBinary;
  if (in.gcount() == 4 && std::memcmp(magic, kArchiveMagic, 4) == 0) {
    fail(Status::kParseError,
         MessageBuilder() << "'" << path
                          << "' is a model archive, not a matrix file");
  }
  return MatrixFormat::kCsv;
}

}  // namespace

std::string format_f64(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_f64(const std::string& token, const std::string& context) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    fail(Status::kParseError, MessageBuilder()
                                  << context << ": invalid number '" << token
                                  << "'");
  }
  return v;
}

Matrix load_matrix(const std::string& path, MatrixFormat format) {
  if (format == MatrixFormat::kAuto) format = sniff_format(path);
  if (format == MatrixFormat::kCsv) return load_csv(path);
  Reader r(path);
  Matrix m = read_matrix_body(r, MessageBuilder() << "'" << path << "'");
  return m;
}

void save_matrix(const Matrix& m, const std::string& path,
                 MatrixFormat format) {
  require(format != MatrixFormat::kAuto, Status::kParamError,
          "save_matrix requires an explicit format");
  require(m.rows() > 0, Status::kParamError,
          MessageBuilder() << "refusing to write empty matrix to '" << path
                           << "'");
  if (format == MatrixFormat::kCsv) {
    save_csv(m, path);
    return;
  }
  Writer w(path);
  write_matrix_body(w, m);
  w.finish();
}

bool ModelArchive::has_section(const std::string& name) const {
  for (const auto& [n, m] : sections)
    if (n == name) return true;
  return false;
}

const Matrix& ModelArchive::section(const std::string& name) const {
  for (const auto& [n, m] : sections)
    if (n == name) return m;
  fail(Status::kParseError,
       MessageBuilder() << "model archive: missing section '" << name << "'");
}

void ModelArchive::add_section(const std::string& name, Matrix m) {
  require(!has_section(name), Status::kInternalError,
          MessageBuilder() << "duplicate archive section '" << name << "'");
  sections.emplace_back(name, std::move(m));
}

bool ModelArchive::has_meta(const std::string& key) const {
  return metadata.count(key) != 0;
}

const std::string& ModelArchive::meta(const std::string& key) const {
  auto it = metadata.find(key);
  if (it == metadata.end()) {
    fail(Status::kParseError,
         MessageBuilder() << "model archive: missing metadata key '" << key
                          << "'");
  }
  return it->second;
}

double ModelArchive::meta_f64(const std::string& key) const {
  return parse_f64(meta(key), MessageBuilder()
                                  << "model archive metadata '" << key << "'");
}

std::int64_t ModelArchive::meta_i64(const std::string& key) const {
  const std::string& v = meta(key);
  std::int64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  require(res.ec == std::errc() && res.ptr == v.data() + v.size(),
          Status::kParseError,
          MessageBuilder() << "model archive metadata '" << key
                           << "': invalid integer '" << v << "'");
  return out;
}

std::uint64_t ModelArchive::meta_u64(const std::string& key) const {
  const std::string& v = meta(key);
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  require(res.ec == std::errc() && res.ptr == v.data() + v.size(),
          Status::kParseError,
          MessageBuilder() << "model archive metadata '" << key
                           << "': invalid integer '" << v << "'");
  return out;
}

void ModelArchive::set_meta(const std::string& key, const std::string& value) {
  require(!key.empty() && key.find('=') == std::string::npos &&
              key.find('\n') == std::string::npos,
          Status::kInternalError, "bad metadata key");
  require(value.find('\n') == std::string::npos, Status::kInternalError,
          "metadata value must be a single line");
  metadata[key] = value;
}

void ModelArchive::set_meta_f64(const std::string& key, double value) {
  set_meta(key, format_f64(value));
}

void ModelArchive::set_meta_i64(const std::string& key, std::int64_t value) {
  set_meta(key, std::to_string(value));
}

void ModelArchive::set_meta_u64(const std::string& key, std::uint64_t value) {
  set_meta(key, std::to_string(value));
}

void save_archive(const ModelArchive& archive, const std::string& path) {
  Writer w(path);
  w.write_bytes(kArchiveMagic, 4);
  w.write_u32(kArchiveVersion);
  w.write_u32(static_cast<std::uint32_t>(archive.sections.size()));
  for (const auto& [name, m] : archive.sections) {
    w.write_u32(static_cast<std::uint32_t>(name.size()));
    w.write_bytes(name.data(), name.size());
    write_matrix_body(w, m);
  }
  // std::map keeps keys sorted, so metadata bytes are reproducible.
  for (const auto& [key, value] : archive.metadata) {
    const std::string line = key + "=" + value + "\n";
    w.write_bytes(line.data(), line.size());
  }
  w.finish();
}

ModelArchive load_archive(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.read_bytes(magic, 4, "archive magic");
  require(std::memcmp(magic, kArchiveMagic, 4) == 0, Status::kParseError,
          MessageBuilder() << "'" << path << "' is not a model archive");
  const std::uint32_t version = r.read_u32("archive version");
  require(version == kArchiveVersion, Status::kParseError,
          MessageBuilder() << "'" << path << "': unsupported archive version "
                           << version);
  const std::uint32_t count = r.read_u32("section count");
  ModelArchive archive;
  for (std::uint32_t s = 0; s < count; ++s) {
    const std::uint32_t name_len = r.read_u32("section name length");
    require(name_len > 0 && name_len < 4096, Status::kParseError,
            MessageBuilder() << "'" << path << "': bad section name length "
                             << name_len);
    std::string name(name_len, '\0');
    r.read_bytes(name.data(), name_len, "section name");
    require(!archive.has_section(name), Status::kParseError,
            MessageBuilder() << "'" << path << "': duplicate section '" << name
                             << "'");
    Matrix m = read_matrix_body(
        r, MessageBuilder() << "'" << path << "' section '" << name << "'");
    archive.sections.emplace_back(std::move(name), std::move(m));
  }
  const std::string meta_text = r.read_rest();
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < meta_text.size()) {
    std::size_t nl = meta_text.find('\n', pos);
    if (nl == std::string::npos) nl = meta_text.size();
    std::string line = meta_text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    require(eq != std::string::npos && eq > 0, Status::kParseError,
            MessageBuilder() << "'" << path << "': malformed metadata line "
                             << line_no);
    const std::string key = line.substr(0, eq);
    require(archive.metadata.count(key) == 0, Status::kParseError,
            MessageBuilder() << "'" << path << "': duplicate metadata key '"
                             << key << "'");
    archive.metadata[key] = line.substr(eq + 1);
  }
  return archive;
}

}  // namespace fddh::io
