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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vars/tensor.hpp"

namespace vars {

// File formats:
//   CSV   comma-separated decimal rows, no header; the shape is inferred.
//         Values are written with enough digits to round-trip exactly.
//   VT01  binary tensor: magic "VT01", little-endian u32 ndim, ndim
//         little-endian u32 dims, then row-major little-endian f64 values.
//   PGM   plain (P2) grayscale, max value 255, for saliency maps.
// All read failures throw IoError.

Matrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Matrix& m);

// Accepts a single CSV row or a single CSV column.
Vector read_csv_vector(const std::string& path);
void write_csv_vector(const std::string& path, const Vector& v);

struct TensorData {
  std::vector<std::uint32_t> dims;
  std::vector<double> values;
};

TensorData read_vt01(const std::string& path);
void write_vt01(const std::string& path, const TensorData& t);
void write_vt01_matrix(const std::string& path, const Matrix& m);
Matrix read_vt01_matrix(const std::string& path);  // requires ndim == 2

// Extension dispatch: ".vt" / ".vt01" selects VT01, everything else CSV.
Matrix read_matrix_auto(const std::string& path);
void write_matrix_auto(const std::string& path, const Matrix& m);
Vector read_vector_auto(const std::string& path);

// Clamps entries to [0, 1] and scales to 0..255.
void write_pgm(const std::string& path, const Matrix& gray01);

// FNV-1a over a byte buffer; used for fixture manifests.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace vars
