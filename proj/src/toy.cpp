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

#include "vars/toy.hpp"

#include <cstddef>
#include <limits>
#include <vector>

#include "vars/errors.hpp"
#include "vars/rng.hpp"

namespace vars {
namespace {

constexpr std::size_t kNoUnit = std::numeric_limits<std::size_t>::max();

void validate_grid(const BarGrid& grid) {
  if (grid.height == 0 || grid.width == 0) {
    throw DimensionError("toy grid has zero extent");
  }
  if (grid.cells.size() != grid.height * grid.width) {
    throw DimensionError("toy grid cell count does not match extents");
  }
  if (!(grid.b > 0.0)) {
    throw ArgumentError("toy drive b must be positive");
  }
}

// Neighbor cell in the given row/col offset, or kNoUnit when the open
// boundary cuts it off. Offsets are -1, 0, or +1.
std::size_t neighbor_cell(const BarGrid& grid, Boundary boundary,
                          std::size_t r, std::size_t c, int dr, int dc) {
  long nr = static_cast<long>(r) + dr;
  long nc = static_cast<long>(c) + dc;
  const long h = static_cast<long>(grid.height);
  const long w = static_cast<long>(grid.width);
  if (boundary == Boundary::torus) {
    nr = (nr + h) % h;
    nc = (nc + w) % w;
  } else if (nr < 0 || nr >= h || nc < 0 || nc >= w) {
    return kNoUnit;
  }
  return static_cast<std::size_t>(nr) * grid.width +
         static_cast<std::size_t>(nc);
}

}  // namespace

ToyWeights build_toy_weights(const BarGrid& grid, const RecurrentSpec& spec) {
  validate_grid(grid);
  if (spec.alpha < 0.0 || spec.beta < 0.0) {
    throw ArgumentError("toy coupling strengths must be non-negative");
  }

  std::vector<std::size_t> unit_cells;
  std::vector<std::size_t> cell_unit(grid.cells.size(), kNoUnit);
  for (std::size_t cell = 0; cell < grid.cells.size(); ++cell) {
    if (grid.cells[cell] != Orientation::none) {
      cell_unit[cell] = unit_cells.size();
      unit_cells.push_back(cell);
    }
  }
  if (unit_cells.empty()) {
    throw DimensionError("toy grid holds no bars");
  }

  const std::size_t n = unit_cells.size();
  Matrix a(n, n);
  const bool inhibit = spec.mode == CouplingMode::excitation_and_inhibition;

  // Each adjacent pair is visited from both endpoints, contributing half the
  // pair weight per visit; += keeps degenerate torus wraps (height or width
  // of 1 or 2, where both offsets land on the same cell) consistent with the
  // convolution view, so a full column still has row sum alpha.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cell = unit_cells[i];
    if (grid.cells[cell] != Orientation::vertical) continue;
    const std::size_t r = cell / grid.width;
    const std::size_t c = cell % grid.width;
    for (int dr : {-1, 1}) {
      const std::size_t ncell =
          neighbor_cell(grid, spec.boundary, r, c, dr, 0);
      if (ncell == kNoUnit) continue;
      if (grid.cells[ncell] != Orientation::vertical) continue;
      a(i, cell_unit[ncell]) += spec.alpha / 2.0;
    }
    if (inhibit) {
      for (int dc : {-1, 1}) {
        const std::size_t ncell =
            neighbor_cell(grid, spec.boundary, r, c, 0, dc);
        if (ncell == kNoUnit) continue;
        if (grid.cells[ncell] != Orientation::vertical) continue;
        a(i, cell_unit[ncell]) -= spec.beta / 2.0;
      }
    }
  }
  return ToyWeights{std::move(a), std::move(unit_cells)};
}

IntegratorConfig toy_integrator_defaults() {
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  // Relaxation time 1/(1 - alpha) grows near alpha = 1; this budget covers
  // alpha up to ~0.95 at equilibrium_tol below.
  cfg.t_max = 400.0;
  cfg.equilibrium_tol = 1e-9;
  return cfg;
}

ToyResult simulate_toy(const BarGrid& grid, const RecurrentSpec& spec,
                       const IntegratorConfig& cfg) {
  ToyWeights weights = build_toy_weights(grid, spec);
  const std::size_t n = weights.unit_cells.size();
  Vector drive(n, grid.b);
  Vector z0(n, 0.0);
  DynamicsState state = integrate_linear_recurrent(weights.a, drive, z0, cfg);

  ToyResult result;
  result.z = std::move(state.z);
  result.unit_cells = std::move(weights.unit_cells);
  result.height = grid.height;
  result.width = grid.width;
  result.reached_equilibrium = state.reached_equilibrium;
  result.rho_estimate = state.rho_estimate;
  result.stability_warning = state.stability_warning;
  return result;
}

Matrix ToyResult::response_grid() const {
  Matrix grid(height, width);
  for (std::size_t k = 0; k < unit_cells.size(); ++k) {
    grid.data()[unit_cells[k]] = z[k];
  }
  return grid;
}

double saliency_ratio(const ToyResult& result,
                      const std::vector<bool>& object_mask) {
  if (object_mask.size() != result.z.size()) {
    throw ArgumentError("object mask size does not match unit count");
  }
  double object_sum = 0.0, background_sum = 0.0;
  std::size_t object_count = 0, background_count = 0;
  for (std::size_t i = 0; i < object_mask.size(); ++i) {
    if (object_mask[i]) {
      object_sum += result.z[i];
      ++object_count;
    } else {
      background_sum += result.z[i];
      ++background_count;
    }
  }
  if (object_count == 0 || background_count == 0) {
    throw ArgumentError("saliency ratio needs both object and background units");
  }
  const double background_mean = background_sum / background_count;
  if (background_mean == 0.0) {
    throw ArgumentError("background response is zero");
  }
  return (object_sum / object_count) / background_mean;
}

BarGrid make_contour_scene(std::size_t height, std::size_t width, double b) {
  if (height < 3 || width < 5) {
    throw ArgumentError("contour scene needs at least a 3x5 grid");
  }
  BarGrid grid;
  grid.height = height;
  grid.width = width;
  grid.b = b;
  grid.cells.assign(height * width, Orientation::none);

  // Object: one full vertical column (collinear chain around the torus).
  const std::size_t object_col = width / 2;
  for (std::size_t r = 0; r < height; ++r) {
    grid.cells[r * width + object_col] = Orientation::vertical;
  }
  // Background: isolated vertical bars two columns over, on every other row
  // up to height - 3 so neither the row wrap nor the column places any two
  // of them (or the object column) within coupling range.
  const std::size_t bg_col = (object_col + 2) % width;
  for (std::size_t r = 0; r + 3 <= height; r += 2) {
    grid.cells[r * width + bg_col] = Orientation::vertical;
  }
  validate_grid(grid);
  return grid;
}

BarGrid make_texture_scene(std::size_t height, std::size_t width, double b) {
  BarGrid grid;
  grid.height = height;
  grid.width = width;
  grid.b = b;
  grid.cells.assign(height * width, Orientation::vertical);
  validate_grid(grid);
  return grid;
}

BarGrid make_random_scene(std::size_t height, std::size_t width, double b,
                          double density, std::uint64_t seed) {
  if (density < 0.0 || density > 1.0) {
    throw ArgumentError("density must lie in [0, 1]");
  }
  BarGrid grid;
  grid.height = height;
  grid.width = width;
  grid.b = b;
  grid.cells.assign(height * width, Orientation::none);
  Rng rng(seed);
  constexpr Orientation kOriented[] = {Orientation::vertical,
                                       Orientation::diag_up,
                                       Orientation::horizontal,
                                       Orientation::diag_down};
  for (auto& cell : grid.cells) {
    if (rng.uniform() < density) {
      cell = kOriented[rng.next_below(4)];
    }
  }
  validate_grid(grid);
  return grid;
}

std::vector<bool> column_mask(const ToyResult& result, std::size_t column) {
  std::vector<bool> mask(result.unit_cells.size());
  for (std::size_t k = 0; k < result.unit_cells.size(); ++k) {
    mask[k] = result.unit_cells[k] % result.width == column;
  }
  return mask;
}

}  // namespace vars
