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

#include "vars/fixtures.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include <json.hpp>

#include "vars/dictionary.hpp"
#include "vars/errors.hpp"
#include "vars/tensor_io.hpp"
#include "vars/toy.hpp"

namespace vars {
namespace {

Matrix orientation_codes(const BarGrid& grid) {
  Matrix m(grid.height, grid.width);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    m.data()[i] = static_cast<double>(grid.cells[i]);
  }
  return m;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

Matrix make_bar_noise_image(std::size_t h, std::size_t w, std::size_t bar_col,
                            std::size_t noise_pixels, Rng& rng) {
  if (h == 0 || w < 2 || bar_col >= w) {
    throw ArgumentError("bar image needs w >= 2 and bar_col < w");
  }
  if (noise_pixels > h * (w - 1)) {
    throw ArgumentError("more noise pixels than free cells");
  }
  Matrix img(h, w, 0.0);
  for (std::size_t r = 0; r < h; ++r) img(r, bar_col) = 1.0;
  std::size_t placed = 0;
  while (placed < noise_pixels) {
    const std::size_t r = rng.next_below(h);
    const std::size_t c = rng.next_below(w);
    if (c == bar_col || img(r, c) != 0.0) continue;
    img(r, c) = rng.uniform(0.6, 1.0);
    ++placed;
  }
  return img;
}

FixtureManifest write_fixtures(const std::string& dir, std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create fixture directory " + dir + ": " +
                  ec.message());
  }

  Rng rng(seed);
  FixtureManifest manifest;
  manifest.seed = seed;

  const auto emit_matrix = [&](const std::string& name, const Matrix& m) {
    const std::string path = dir + "/" + name;
    write_matrix_auto(path, m);
    manifest.files.push_back({name, fnv1a64_file(path)});
  };
  const auto emit_vector = [&](const std::string& name, const Vector& v) {
    const std::string path = dir + "/" + name;
    write_csv_vector(path, v);
    manifest.files.push_back({name, fnv1a64_file(path)});
  };

  emit_matrix("ortho_atoms.csv", Matrix::identity(2));
  emit_vector("ortho_signal.csv", Vector(std::vector<double>{1.0, -0.2}));

  for (int k = 0; k < 3; ++k) {
    const Matrix atoms = normalize_atoms(gaussian_matrix(6, 4, rng));
    const Vector signal = gaussian_vector(6, rng);
    emit_matrix("lasso" + std::to_string(k) + "_atoms.csv", atoms);
    emit_vector("lasso" + std::to_string(k) + "_signal.csv", signal);
  }

  Matrix tokens = gaussian_matrix(8, 4, rng);
  for (std::size_t i = 0; i < tokens.rows() * tokens.cols(); ++i) {
    tokens.data()[i] *= 0.3;  // keeps exp features of the tokens well scaled
  }
  emit_matrix("tokens.vt01", tokens);
  emit_matrix("projection.csv", gaussian_matrix(4, 3, rng));

  const Matrix bar = make_bar_noise_image(4, 4, kFixtureBarColumn, 3, rng);
  emit_matrix("bar_image.csv", bar);
  Matrix bar_tokens(bar.rows() * bar.cols(), 1);
  for (std::size_t i = 0; i < bar_tokens.rows(); ++i) {
    bar_tokens(i, 0) = bar.data()[i];
  }
  emit_matrix("bar_tokens.csv", bar_tokens);
  emit_matrix("bar_kernel.csv", Matrix(3, 1, 1.0));

  emit_matrix("scene_contour.csv",
              orientation_codes(make_contour_scene(5, 5, 1.0)));
  emit_matrix("scene_texture.csv",
              orientation_codes(make_texture_scene(4, 4, 1.0)));

  nlohmann::json j;
  j["seed"] = seed;
  j["files"] = nlohmann::json::array();
  for (const auto& f : manifest.files) {
    j["files"].push_back({{"name", f.name}, {"fnv1a64", hash_hex(f.hash)}});
  }
  const std::string manifest_path = dir + "/manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + manifest_path);
  out << j.dump(2) << "\n";
  out.close();
  if (!out) throw IoError("write failed for " + manifest_path);
  return manifest;
}

}  // namespace vars
