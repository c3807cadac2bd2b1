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

#include <complex>
#include <cstddef>
#include <vector>

#include "pnphqs/image.hpp"

namespace pnphqs {

using Spectrum = std::vector<std::complex<double>>;

/// 2-D complex DFT over a fixed W x H grid, row-major, FFTW sign convention
/// (forward uses e^{-i...}). `inverse` includes the 1/(W*H) normalization.
///
/// Each instance owns its plans and scratch buffer, so one instance must not
/// be used from two threads at once; create one per worker instead.
class Fft2d {
public:
  Fft2d(std::size_t width, std::size_t height);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;
  Fft2d(Fft2d&& other) noexcept;
  Fft2d& operator=(Fft2d&& other) noexcept;

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }

  Spectrum forward(const std::vector<double>& real);
  Spectrum forward(const Image& image) { return forward(image.data()); }
  /// Real part of the normalized inverse transform.
  std::vector<double> inverse(const Spectrum& spectrum);
  Image inverse_image(const Spectrum& spectrum);

private:
  void release();

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::complex<double>* buffer_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace pnphqs
