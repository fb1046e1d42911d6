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

// Largest eigenvalue of p^T p (the squared spectral norm of p), by power
// iteration on the Gram matrix from a seeded random unit start. Converged
// when the eigenpair residual ||G v - lambda v|| falls below tol * lambda.
// Throws ConvergenceError (carrying the last estimate) when max_iter is
// exhausted. Deterministic for a fixed seed.
double spectral_norm_sq(const Matrix& p, double tol = 1e-12,
                        int max_iter = 10000,
                        std::uint64_t seed = 0x5eedULL);

}  // namespace vars
