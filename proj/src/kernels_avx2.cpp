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

#include "vars/kernels.hpp"

#ifdef VARS_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace vars::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

inline double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  if (lanes[1] > m) m = lanes[1];
  if (lanes[2] > m) m = lanes[2];
  if (lanes[3] > m) m = lanes[3];
  return m;
}

const __m256d kAbsMask = _mm256_castsi256_pd(
    _mm256_set1_epi64x(static_cast<std::int64_t>(0x7fffffffffffffffULL)));
const __m256d kSignMask = _mm256_castsi256_pd(
    _mm256_set1_epi64x(static_cast<std::int64_t>(0x8000000000000000ULL)));

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double abs_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), kAbsMask));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), kAbsMask));
  }
  double m = hmax(acc);
  for (; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

// Bit-identical to the scalar reference: |x|-t is computed with the same
// single rounding as the scalar branches, the sign is restored by OR-ing the
// sign bit back, and clamped lanes are forced to +0.
void soft_threshold(const double* x, double t, double* out, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d mag = _mm256_sub_pd(_mm256_and_pd(v, kAbsMask), vt);
    const __m256d keep = _mm256_cmp_pd(mag, zero, _CMP_GT_OQ);
    const __m256d signed_mag = _mm256_or_pd(mag, _mm256_and_pd(v, kSignMask));
    _mm256_storeu_pd(out + i, _mm256_and_pd(signed_mag, keep));
  }
  for (; i < n; ++i) {
    const double v = x[i];
    out[i] = v > t ? v - t : (v < -t ? v + t : 0.0);
  }
}

}  // namespace vars::kernels::avx2

#endif  // VARS_HAVE_AVX2
