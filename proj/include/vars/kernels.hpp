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

#include <cstddef>

// Data-parallel inner loops behind the dense types and solvers. The scalar
// reference implementations live in kernels::scalar; an AVX2/FMA variant is
// selected at runtime when the host supports it (override with the
// VARS_KERNELS environment variable, values "scalar" / "avx2").
//
// Reductions may reassociate across variants, so dot/sum results can differ
// in the last bits between scalar and AVX2. Element-wise maps
// (soft_threshold) are bit-identical by construction; the equivalence tests
// pin both properties.

namespace vars::kernels {

using DotFn = double (*)(const double*, const double*, std::size_t);
using ReduceFn = double (*)(const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);
using SoftThresholdFn = void (*)(const double*, double, double*, std::size_t);

extern DotFn dot;                        // sum_i x[i]*y[i]
extern ReduceFn sum_sq;                  // sum_i x[i]^2
extern ReduceFn abs_sum;                 // sum_i |x[i]|
extern ReduceFn max_abs;                 // max_i |x[i]|, 0 for n == 0
extern AxpyFn axpy;                      // y[i] += a*x[i]
extern SoftThresholdFn soft_threshold;   // out[i] = sgn(x[i])*max(|x[i]|-t,0)

// Name of the active variant: "scalar" or "avx2".
const char* active_variant();

// Force a variant by name. Throws ArgumentError when the variant is unknown
// or unsupported on this host.
void select_variant(const char* name);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);
double abs_sum(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void soft_threshold(const double* x, double t, double* out, std::size_t n);
}  // namespace scalar

#ifdef VARS_HAVE_AVX2
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);
double abs_sum(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void soft_threshold(const double* x, double t, double* out, std::size_t n);
}  // namespace avx2
#endif

}  // namespace vars::kernels
