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

#include "vars/rng.hpp"
#include "vars/tensor.hpp"

namespace vars {

struct FixtureFile {
  std::string name;
  std::uint64_t hash = 0;  // fnv1a64 of the file bytes
};

struct FixtureManifest {
  std::uint64_t seed = 0;
  std::vector<FixtureFile> files;
};

// Grayscale grid with a solid vertical bar in column bar_col plus
// noise_pixels isolated bright pixels scattered over the other columns.
Matrix make_bar_noise_image(std::size_t h, std::size_t w, std::size_t bar_col,
                            std::size_t noise_pixels, Rng& rng);

// Writes the canonical input set under dir (created if missing):
//
//   ortho_atoms.csv / ortho_signal.csv   2x2 identity, signal (1.0, -0.2)
//   lasso{0,1,2}_atoms.csv / _signal.csv seeded 6x4 unit-atom instances
//   tokens.vt01                          seeded 8-token x 4-channel matrix
//   projection.csv                       seeded 4x3 feature projection
//   bar_image.csv / bar_kernel.csv       4x4 bar-plus-noise image, 3x1 bar
//   bar_tokens.csv                       the same image as a 16x1 token grid
//   scene_contour.csv / scene_texture.csv  orientation-code grids
//   manifest.json                        seed plus per-file content hashes
//
// Byte-identical for a given seed. Returns the manifest that was written.
FixtureManifest write_fixtures(const std::string& dir, std::uint64_t seed);

// Column holding the bar in bar_image.csv.
inline constexpr std::size_t kFixtureBarColumn = 1;

}  // namespace vars
