// Copyright 2026 the vars project
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

#include "vars/tensor_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "vars/errors.hpp"

namespace vars {

namespace {

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path + ": read failure");
  return ss.str();
}

void write_file_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path + ": write failure");
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_field(const std::string& path, const std::string& field,
                   std::size_t row) {
  const std::string f = trim(field);
  if (f.empty()) {
    throw IoError(path + ": empty field in row " + std::to_string(row + 1));
  }
  const char* begin = f.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + f.size()) {
    throw IoError(path + ": cannot parse '" + f + "' in row " +
                  std::to_string(row + 1));
  }
  if (!std::isfinite(v)) {
    throw IoError(path + ": non-finite value in row " +
                  std::to_string(row + 1));
  }
  return v;
}

void format_value(char* buf, std::size_t cap, double v) {
  std::snprintf(buf, cap, "%.17g", v);
}

void put_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f64le(std::string& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
}

double get_f64le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

bool has_vt_extension(const std::string& path) {
  const auto dotpos = path.find_last_of('.');
  if (dotpos == std::string::npos) return false;
  const std::string ext = path.substr(dotpos);
  return ext == ".vt" || ext == ".vt01";
}

}  // namespace

Matrix read_csv_matrix(const std::string& path) {
  const std::string bytes = read_file_bytes(path);
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;

  std::istringstream lines(bytes);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::size_t row_cols = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string field = comma == std::string::npos
                                    ? line.substr(start)
                                    : line.substr(start, comma - start);
      values.push_back(parse_field(path, field, rows));
      ++row_cols;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = row_cols;
    } else if (row_cols != cols) {
      throw IoError(path + ": row " + std::to_string(rows + 1) + " has " +
                    std::to_string(row_cols) + " fields, expected " +
                    std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) throw IoError(path + ": no data rows");
  return Matrix(rows, cols, std::move(values));
}

void write_csv_matrix(const std::string& path, const Matrix& m) {
  std::string out;
  char buf[64];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      format_value(buf, sizeof buf, m(r, c));
      if (c) out.push_back(',');
      out += buf;
    }
    out.push_back('\n');
  }
  write_file_bytes(path, out);
}

Vector read_csv_vector(const std::string& path) {
  const Matrix m = read_csv_matrix(path);
  if (m.rows() != 1 && m.cols() != 1) {
    throw IoError(path + ": expected a single row or column, got " +
                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  std::vector<double> v(m.data(), m.data() + m.size());
  return Vector(std::move(v));
}

void write_csv_vector(const std::string& path, const Vector& v) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < v.size(); ++i) {
    format_value(buf, sizeof buf, v[i]);
    out += buf;
    out.push_back('\n');
  }
  write_file_bytes(path, out);
}

TensorData read_vt01(const std::string& path) {
  const std::string bytes = read_file_bytes(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 8 || std::memcmp(p, "VT01", 4) != 0) {
    throw IoError(path + ": missing VT01 magic");
  }
  const std::uint32_t ndim = get_u32le(p + 4);
  if (ndim == 0 || ndim > 8) {
    throw IoError(path + ": implausible ndim " + std::to_string(ndim));
  }
  std::size_t off = 8;
  if (bytes.size() < off + 4ull * ndim) {
    throw IoError(path + ": truncated dims");
  }
  TensorData t;
  std::uint64_t count = 1;
  for (std::uint32_t d = 0; d < ndim; ++d) {
    const std::uint32_t dim = get_u32le(p + off);
    off += 4;
    t.dims.push_back(dim);
    count *= dim;
    if (count > (1ull << 32)) {
      throw IoError(path + ": tensor too large");
    }
  }
  if (bytes.size() != off + 8ull * count) {
    throw IoError(path + ": expected " + std::to_string(off + 8ull * count) +
                  " bytes, file has " + std::to_string(bytes.size()));
  }
  t.values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double v = get_f64le(p + off + 8 * i);
    if (!std::isfinite(v)) {
      throw IoError(path + ": non-finite value at index " + std::to_string(i));
    }
    t.values.push_back(v);
  }
  return t;
}

void write_vt01(const std::string& path, const TensorData& t) {
  std::string out = "VT01";
  put_u32le(out, static_cast<std::uint32_t>(t.dims.size()));
  std::uint64_t count = 1;
  for (const std::uint32_t d : t.dims) {
    put_u32le(out, d);
    count *= d;
  }
  if (count != t.values.size()) {
    throw ArgumentError("write_vt01: dims product " + std::to_string(count) +
                        " vs " + std::to_string(t.values.size()) + " values");
  }
  for (const double v : t.values) put_f64le(out, v);
  write_file_bytes(path, out);
}

void write_vt01_matrix(const std::string& path, const Matrix& m) {
  TensorData t;
  t.dims = {static_cast<std::uint32_t>(m.rows()),
            static_cast<std::uint32_t>(m.cols())};
  t.values.assign(m.data(), m.data() + m.size());
  write_vt01(path, t);
}

Matrix read_vt01_matrix(const std::string& path) {
  TensorData t = read_vt01(path);
  if (t.dims.size() != 2) {
    throw IoError(path + ": expected a 2-d tensor, got ndim " +
                  std::to_string(t.dims.size()));
  }
  return Matrix(t.dims[0], t.dims[1], std::move(t.values));
}

Matrix read_matrix_auto(const std::string& path) {
  return has_vt_extension(path) ? read_vt01_matrix(path)
                                : read_csv_matrix(path);
}

void write_matrix_auto(const std::string& path, const Matrix& m) {
  if (has_vt_extension(path)) {
    write_vt01_matrix(path, m);
  } else {
    write_csv_matrix(path, m);
  }
}

Vector read_vector_auto(const std::string& path) {
  if (!has_vt_extension(path)) return read_csv_vector(path);
  TensorData t = read_vt01(path);
  if (t.dims.size() == 1 ||
      (t.dims.size() == 2 && (t.dims[0] == 1 || t.dims[1] == 1))) {
    return Vector(std::move(t.values));
  }
  throw IoError(path + ": expected a 1-d tensor");
}

void write_pgm(const std::string& path, const Matrix& gray01) {
  std::string out = "P2\n" + std::to_string(gray01.cols()) + " " +
                    std::to_string(gray01.rows()) + "\n255\n";
  for (std::size_t r = 0; r < gray01.rows(); ++r) {
    for (std::size_t c = 0; c < gray01.cols(); ++c) {
      double v = gray01(r, c);
      if (v < 0.0) v = 0.0;
      if (v > 1.0) v = 1.0;
      const long g = std::lround(v * 255.0);
      if (c) out.push_back(' ');
      out += std::to_string(g);
    }
    out.push_back('\n');
  }
  write_file_bytes(path, out);
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  const std::string bytes = read_file_bytes(path);
  return fnv1a64(bytes.data(), bytes.size());
}

}  // namespace vars
