// Copyright 2026 The pnphqs Authors
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

#include <filesystem>
#include <vector>

namespace pnphqs {

/// Small convolution kernel, row-major, with odd extent and the center at
/// (width/2, height/2).
struct Psf {
  std::size_t width = 1;
  std::size_t height = 1;
  std::vector<double> weights{1.0};

  std::size_t center_x() const { return width / 2; }
  std::size_t center_y() const { return height / 2; }
  double at(std::size_t x, std::size_t y) const { return weights[y * width + x]; }
  double sum() const;

  static Psf delta() { return Psf{}; }
  /// Validates odd dimensions and the weight count.
  static Psf from_weights(std::size_t width, std::size_t height, std::vector<double> weights);

  friend bool operator==(const Psf&, const Psf&) = default;
};

/// Isotropic Gaussian sampled at integer offsets from the center, normalized
/// to unit sum.
Psf gaussian_psf(std::size_t size, double stddev);

/// Plain-text kernel: one row per line, whitespace-separated decimals.
/// The result is normalized to unit sum; a non-positive sum is an error.
Psf load_psf_text(const std::filesystem::path& path);

}  // namespace pnphqs
