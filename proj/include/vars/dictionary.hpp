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

#include "vars/tensor.hpp"

namespace vars {

// Translated-template dictionary over an h x w grid. atoms has one column
// per grid cell: the kernel centered at that cell, zero-padded at the
// borders, flattened row-major. Columns are kept exactly as translated
// (unnormalized), so atoms^T . flatten(image) is the plain 2-d
// cross-correlation of the image with the kernel.
struct StaticDictionary {
  Matrix atoms;  // (h*w) x (h*w)
  std::size_t grid_h = 0;
  std::size_t grid_w = 0;
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;
};

// Kernel dims must not exceed grid dims (DimensionError otherwise). The
// kernel center is cell ((kh-1)/2, (kw-1)/2).
StaticDictionary build_static(const Matrix& kernel, std::size_t grid_h,
                              std::size_t grid_w);

// Input-dependent dictionary of positive random features. For tokens
// X (n x c) and projection W (c x cprime):
//   atoms[i, j] = exp((X W)_ij - ||X_i||^2 / 2) / sqrt(cprime)
// Entries are strictly positive. A pre-exponential magnitude above 700
// would overflow a double and throws NumericRangeError.
struct DynamicDictionary {
  Matrix atoms;  // n x cprime
  std::uint64_t source_hash = 0;  // FNV-1a of the token bytes
};

DynamicDictionary build_dynamic(const Matrix& tokens,
                                const Matrix& projection);

// Convenience overload drawing a standard Gaussian projection from the seed.
DynamicDictionary build_dynamic(const Matrix& tokens, std::size_t feature_dim,
                                std::uint64_t seed);

// Union of atoms, static columns first. Row counts must match.
Matrix combine(const StaticDictionary& s, const DynamicDictionary& d);

// Rescales every column to unit Euclidean norm. A zero column throws
// DegenerateAtomError.
Matrix normalize_atoms(const Matrix& atoms);

}  // namespace vars
