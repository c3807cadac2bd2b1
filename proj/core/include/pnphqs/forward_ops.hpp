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

#include "pnphqs/fft.hpp"
#include "pnphqs/image.hpp"
#include "pnphqs/psf.hpp"

namespace pnphqs {

/// Circular 2-D convolution (A u), evaluated in the spatial domain:
/// (A u)[y,x] = sum_{dy,dx} psf[cy+dy, cx+dx] * u[(y-dy) mod H, (x-dx) mod W].
Image convolve_periodic(const Image& image, const Psf& psf);

/// Circular correlation, the adjoint A^T of convolve_periodic.
Image correlate_periodic(const Image& image, const Psf& psf);

/// Periodic forward differences: h = u[., x+1] - u, v = u[y+1, .] - u.
GradientField gradient(const Image& image);

/// D^T p, satisfying <D u, p> = <u, D^T p>.
Image gradient_adjoint(const GradientField& field);

/// The PSF placed on a W x H grid with its center at pixel (0,0), wrapping
/// the negative offsets around the borders.
Image embed_psf(const Psf& psf, std::size_t width, std::size_t height);

/// Fourier transfer functions of A, D_h and D_v on a W x H grid.
struct OperatorSymbols {
  std::size_t width = 0;
  std::size_t height = 0;
  Spectrum blur;
  Spectrum dh;
  Spectrum dv;

  /// |D_h|^2 + |D_v|^2 at frequency index i.
  double gradient_power(std::size_t i) const { return std::norm(dh[i]) + std::norm(dv[i]); }
};

OperatorSymbols compute_symbols(const Psf& psf, std::size_t width, std::size_t height);
OperatorSymbols compute_symbols(const Psf& psf, std::size_t width, std::size_t height, Fft2d& fft);

/// Pointwise multiplication by a symbol (or its conjugate) in the Fourier domain.
Image apply_symbol(const Image& image, const Spectrum& symbol, Fft2d& fft, bool conjugate = false);

}  // namespace pnphqs
