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
#include <vector>

#include "vars/dictionary.hpp"
#include "vars/solver.hpp"
#include "vars/tensor.hpp"

namespace vars {

// Token grid: one row per spatial cell (row-major over grid_h x grid_w),
// one column per channel.
struct TokenMatrix {
  Matrix tokens;
  std::size_t grid_h = 0;
  std::size_t grid_w = 0;
};

struct AttentionOptions {
  // solver.lambda is the user-facing sparsity weight; ista_solve may run with
  // a rescaled value depending on the operator (see effective_lambda).
  SolverConfig solver;
  // Rescale dictionary columns to unit length before solving. Off means the
  // dictionary is used exactly as given.
  bool normalize = true;
};

struct AttentionOutput {
  Matrix output;          // tokens + reconstruction, elementwise
  Matrix reconstruction;  // atoms * codes, one column per channel
  Matrix codes;           // atom_count x channels
  Vector saliency;        // per-token reconstruction norm, max-normalized
  std::vector<SparseCode> diagnostics;  // one solve per channel; empty for
                                        // the linear baseline
  double effective_lambda = 0.0;        // lambda actually passed to the solver
};

// Sparse reconstruction attention. Each channel of the token matrix is coded
// against the dictionary with ista_solve (all channels share one Gram
// spectral bound), reconstructed, and added back onto the input. The three
// operators differ only in the dictionary and the sparsity weight: the
// static-dictionary and combined operators use opts.solver.lambda as is,
// while the dynamic-dictionary operator doubles it.
AttentionOutput vars_s(const StaticDictionary& dict, const TokenMatrix& x,
                       const AttentionOptions& opts = {});
AttentionOutput vars_d(const DynamicDictionary& dict, const TokenMatrix& x,
                       const AttentionOptions& opts = {});
AttentionOutput vars_sd(const StaticDictionary& stat,
                        const DynamicDictionary& dyn, const TokenMatrix& x,
                        const AttentionOptions& opts = {});

// Linear attention baseline: codes = atoms^T * tokens, reconstruction =
// atoms * codes, output = reconstruction + tokens. Uses the feature matrix
// exactly as given (no normalization, no thresholding).
AttentionOutput self_attention_baseline(const DynamicDictionary& dict,
                                        const TokenMatrix& x);

// Per-token Euclidean norm across channels of the reconstruction, scaled so
// the largest entry is 1. An all-zero reconstruction maps to all zeros.
Vector saliency_map(const Matrix& reconstruction);

struct VarsGradients {
  Matrix grad_tokens;  // d loss / d tokens
  Matrix grad_atoms;   // d loss / d atoms
  Matrix output;       // forward output for the unrolled operator
};

// Reverse-mode gradients of the unrolled operator
//
//   u_0   = atoms^T x          (or 0 when zero_init)
//   u_j   = shrink(u_{j-1} - s (G u_{j-1} - atoms^T x))   j = 1..steps
//   out   = atoms u_steps + x
//
// per channel, where G = atoms^T atoms and shrink is soft thresholding at
// lambda * s. Requires cfg.steps; a tolerance-based stop has no fixed
// computation graph, so cfg.tol throws ArgumentError. The step size s is
// treated as a constant of the graph (the spectral bound it comes from is
// not differentiated), and the shrink derivative at the threshold kink is
// taken as 0. Differentiates the atoms exactly as given; callers who
// normalize must do so outside.
VarsGradients vars_backward(const Matrix& atoms, const Matrix& tokens,
                            const Matrix& grad_output, const SolverConfig& cfg,
                            bool zero_init = false);

}  // namespace vars
