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

#include "pnphqs/forward_ops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pnphqs {

namespace {

void require_fits(const Psf& psf, std::size_t width, std::size_t height) {
  if (psf.width > width || psf.height > height) {
    throw std::invalid_argument("psf " + std::to_string(psf.width) + "x" +
                                std::to_string(psf.height) + " larger than image " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

std::size_t wrap(long i, std::size_t n) {
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

// sign = +1 gives convolution, -1 gives correlation.
Image shift_sum(const Image& image, const Psf& psf, long sign) {
  require_fits(psf, image.width(), image.height());
  const std::size_t w = image.width();
  const std::size_t h = image.height();
  const auto cx = static_cast<long>(psf.center_x());
  const auto cy = static_cast<long>(psf.center_y());
  Image out(w, h);
  for (std::size_t ky = 0; ky < psf.height; ++ky) {
    const long dy = static_cast<long>(ky) - cy;
    for (std::size_t kx = 0; kx < psf.width; ++kx) {
      const double weight = psf.at(kx, ky);
      if (weight == 0.0) continue;
      const long dx = static_cast<long>(kx) - cx;
      for (std::size_t y = 0; y < h; ++y) {
        const std::size_t sy = wrap(static_cast<long>(y) - sign * dy, h);
        const double* src = image.data().data() + sy * w;
        double* dst = out.data().data() + y * w;
        const std::size_t sx0 = wrap(-sign * dx, w);
        // Split the row at the wrap point to keep the inner loop branch-free.
        const std::size_t first = w - sx0;
        for (std::size_t x = 0; x < first; ++x) dst[x] += weight * src[sx0 + x];
        for (std::size_t x = first; x < w; ++x) dst[x] += weight * src[x - first];
      }
    }
  }
  return out;
}

}  // namespace

Image convolve_periodic(const Image& image, const Psf& psf) { return shift_sum(image, psf, 1); }

Image correlate_periodic(const Image& image, const Psf& psf) { return shift_sum(image, psf, -1); }

GradientField gradient(const Image& image) {
  const std::size_t w = image.width();
  const std::size_t h = image.height();
  GradientField g(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    const std::size_t yn = (y + 1 == h) ? 0 : y + 1;
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t xn = (x + 1 == w) ? 0 : x + 1;
      const double u = image.at(x, y);
      g.h[y * w + x] = image.at(xn, y) - u;
      g.v[y * w + x] = image.at(x, yn) - u;
    }
  }
  return g;
}

Image gradient_adjoint(const GradientField& field) {
  const std::size_t w = field.width;
  const std::size_t h = field.height;
  Image out(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    const std::size_t yp = (y == 0) ? h - 1 : y - 1;
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t xp = (x == 0) ? w - 1 : x - 1;
      const std::size_t i = y * w + x;
      out[i] = field.h[y * w + xp] - field.h[i] + field.v[yp * w + x] - field.v[i];
    }
  }
  return out;
}

Image embed_psf(const Psf& psf, std::size_t width, std::size_t height) {
  require_fits(psf, width, height);
  Image out(width, height);
  const auto cx = static_cast<long>(psf.center_x());
  const auto cy = static_cast<long>(psf.center_y());
  for (std::size_t ky = 0; ky < psf.height; ++ky) {
    for (std::size_t kx = 0; kx < psf.width; ++kx) {
      const std::size_t x = wrap(static_cast<long>(kx) - cx, width);
      const std::size_t y = wrap(static_cast<long>(ky) - cy, height);
      out.at(x, y) += psf.at(kx, ky);
    }
  }
  return out;
}

OperatorSymbols compute_symbols(const Psf& psf, std::size_t width, std::size_t height) {
  Fft2d fft(width, height);
  return compute_symbols(psf, width, height, fft);
}

OperatorSymbols compute_symbols(const Psf& psf, std::size_t width, std::size_t height, Fft2d& fft) {
  if (fft.width() != width || fft.height() != height) {
    throw std::invalid_argument("compute_symbols: FFT grid mismatch");
  }
  OperatorSymbols s;
  s.width = width;
  s.height = height;
  s.blur = fft.forward(embed_psf(psf, width, height));
  s.dh.resize(width * height);
  s.dv.resize(width * height);
  // D_h u = u[x+1] - u has kernel -1 at offset 0 and +1 at offset -1,
  // whose transform is e^{+i w_x} - 1.
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t ky = 0; ky < height; ++ky) {
    const double wy = two_pi * static_cast<double>(ky) / static_cast<double>(height);
    const std::complex<double> ev = std::polar(1.0, wy) - 1.0;
    for (std::size_t kx = 0; kx < width; ++kx) {
      const double wx = two_pi * static_cast<double>(kx) / static_cast<double>(width);
      s.dh[ky * width + kx] = std::polar(1.0, wx) - 1.0;
      s.dv[ky * width + kx] = ev;
    }
  }
  // Exact zeros at DC rather than round-off residue of polar(1, 0) - 1.
  s.dh[0] = 0.0;
  s.dv[0] = 0.0;
  for (std::size_t kx = 0; kx < width; ++kx) s.dv[kx] = 0.0;
  for (std::size_t ky = 0; ky < height; ++ky) s.dh[ky * width] = 0.0;
  return s;
}

Image apply_symbol(const Image& image, const Spectrum& symbol, Fft2d& fft, bool conjugate) {
  Spectrum spec = fft.forward(image);
  if (spec.size() != symbol.size()) throw std::invalid_argument("apply_symbol: size mismatch");
  for (std::size_t i = 0; i < spec.size(); ++i) {
    spec[i] *= conjugate ? std::conj(symbol[i]) : symbol[i];
  }
  return fft.inverse_image(spec);
}

}  // namespace pnphqs
