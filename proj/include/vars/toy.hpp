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
#include <vector>

#include "vars/dynamics.hpp"
#include "vars/tensor.hpp"

namespace vars {

// Oriented-bar saliency model on a grid. Each occupied cell holds one bar;
// vertical bars excite vertically adjacent vertical bars (+alpha/2 each way,
// collinear "contour" coupling) and, when inhibition is enabled, suppress
// horizontally adjacent vertical bars (-beta/2, parallel "texture"
// coupling). Other orientations carry no couplings and relax to the drive.
//
// With drive b on every occupied unit and periodic boundaries:
//   full vertical contour column:  z* = b / (1 - alpha)
//   uniform vertical texture:      z* = b / (1 - alpha + beta)
//   isolated bar:                  z* = b

enum class Orientation : std::uint8_t {
  none = 0,     // empty cell
  vertical,     // 0 rad
  diag_up,      // pi/4
  horizontal,   // pi/2
  diag_down,    // 3*pi/4
};

struct BarGrid {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Orientation> cells;  // row-major, height*width entries
  double b = 1.0;                  // drive, must be > 0

  Orientation at(std::size_t r, std::size_t c) const {
    return cells[r * width + c];
  }
};

enum class CouplingMode { excitation_only, excitation_and_inhibition };
enum class Boundary { torus, open };

struct RecurrentSpec {
  double alpha = 0.5;
  double beta = 0.0;
  CouplingMode mode = CouplingMode::excitation_only;
  Boundary boundary = Boundary::torus;
};

struct ToyWeights {
  Matrix a;                             // units x units, symmetric
  std::vector<std::size_t> unit_cells;  // unit index -> cell index
};

// Builds the coupling matrix over occupied cells. alpha/beta < 0 throw
// ArgumentError; an all-empty grid throws DimensionError.
ToyWeights build_toy_weights(const BarGrid& grid, const RecurrentSpec& spec);

struct ToyResult {
  Vector z;                             // per-unit equilibrium response
  std::vector<std::size_t> unit_cells;
  std::size_t height = 0;
  std::size_t width = 0;
  bool reached_equilibrium = false;
  double rho_estimate = 0.0;
  bool stability_warning = false;

  // Responses scattered back onto the grid (empty cells are 0).
  Matrix response_grid() const;
};

// Integrates dz/dt = -z + A z + b*1 from z = 0 to equilibrium. The default
// config relaxes deeper than the generic integrator defaults so closed-form
// comparisons at alpha near 1 resolve.
IntegratorConfig toy_integrator_defaults();
ToyResult simulate_toy(const BarGrid& grid, const RecurrentSpec& spec,
                       const IntegratorConfig& cfg = toy_integrator_defaults());

// Mean response over object units divided by mean response over the rest.
// mask.size() must equal the unit count; either side empty or a zero
// background mean throws ArgumentError.
double saliency_ratio(const ToyResult& result,
                      const std::vector<bool>& object_mask);

// Scene builders. The contour scene is one full vertical-bar column plus a
// few isolated vertical bars spaced so that no coupling rule fires on them
// (backgrounds stay exactly at z = b on the torus); its object column is
// `width / 2`. The texture scene fills every cell with a vertical bar.
BarGrid make_contour_scene(std::size_t height, std::size_t width, double b);
BarGrid make_texture_scene(std::size_t height, std::size_t width, double b);
BarGrid make_random_scene(std::size_t height, std::size_t width, double b,
                          double density, std::uint64_t seed);

// Object mask for a scene: true for units whose cell lies in `column`.
std::vector<bool> column_mask(const ToyResult& result, std::size_t column);

}  // namespace vars
