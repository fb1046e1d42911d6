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

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "vars/errors.hpp"

namespace vars::kernels {

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double abs_sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void soft_threshold(const double* x, double t, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x[i];
    out[i] = v > t ? v - t : (v < -t ? v + t : 0.0);
  }
}

}  // namespace scalar

DotFn dot = &scalar::dot;
ReduceFn sum_sq = &scalar::sum_sq;
ReduceFn abs_sum = &scalar::abs_sum;
ReduceFn max_abs = &scalar::max_abs;
AxpyFn axpy = &scalar::axpy;
SoftThresholdFn soft_threshold = &scalar::soft_threshold;

namespace {

const char* g_active = "scalar";

bool avx2_supported() {
#ifdef VARS_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void use_scalar() {
  dot = &scalar::dot;
  sum_sq = &scalar::sum_sq;
  abs_sum = &scalar::abs_sum;
  max_abs = &scalar::max_abs;
  axpy = &scalar::axpy;
  soft_threshold = &scalar::soft_threshold;
  g_active = "scalar";
}

#ifdef VARS_HAVE_AVX2
void use_avx2() {
  dot = &avx2::dot;
  sum_sq = &avx2::sum_sq;
  abs_sum = &avx2::abs_sum;
  max_abs = &avx2::max_abs;
  axpy = &avx2::axpy;
  soft_threshold = &avx2::soft_threshold;
  g_active = "avx2";
}
#endif

}  // namespace

const char* active_variant() { return g_active; }

void select_variant(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    use_scalar();
    return;
  }
#ifdef VARS_HAVE_AVX2
  if (std::strcmp(name, "avx2") == 0 && avx2_supported()) {
    use_avx2();
    return;
  }
#endif
  throw ArgumentError(std::string("unknown or unsupported kernel variant: ") +
                      name);
}

namespace {

// Picks the widest supported variant at load time. An invalid VARS_KERNELS
// value falls back to autodetection (throwing during static init would
// terminate before main).
struct VariantInit {
  VariantInit() {
    if (const char* force = std::getenv("VARS_KERNELS")) {
      try {
        select_variant(force);
        return;
      } catch (const Error&) {
      }
    }
    if (avx2_supported()) select_variant("avx2");
  }
};
const VariantInit g_variant_init;

}  // namespace

}  // namespace vars::kernels
