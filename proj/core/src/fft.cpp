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

#include "pnphqs/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace pnphqs {

namespace {
// The FFTW planner is not re-entrant; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft2d::Fft2d(std::size_t width, std::size_t height) : width_(width), height_(height) {
  if (width == 0 || height == 0) throw std::invalid_argument("Fft2d: empty grid");
  std::lock_guard lock(planner_mutex());
  buffer_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * width * height));
  if (buffer_ == nullptr) throw std::bad_alloc();
  auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
  forward_plan_ = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), buf, buf,
                                   FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), buf, buf,
                                   FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() { release(); }

Fft2d::Fft2d(Fft2d&& other) noexcept
    : width_(other.width_),
      height_(other.height_),
      buffer_(other.buffer_),
      forward_plan_(other.forward_plan_),
      inverse_plan_(other.inverse_plan_) {
  other.buffer_ = nullptr;
  other.forward_plan_ = nullptr;
  other.inverse_plan_ = nullptr;
}

Fft2d& Fft2d::operator=(Fft2d&& other) noexcept {
  if (this != &other) {
    release();
    width_ = other.width_;
    height_ = other.height_;
    buffer_ = other.buffer_;
    forward_plan_ = other.forward_plan_;
    inverse_plan_ = other.inverse_plan_;
    other.buffer_ = nullptr;
    other.forward_plan_ = nullptr;
    other.inverse_plan_ = nullptr;
  }
  return *this;
}

void Fft2d::release() {
  if (buffer_ == nullptr && forward_plan_ == nullptr && inverse_plan_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  if (buffer_ != nullptr) fftw_free(buffer_);
  buffer_ = nullptr;
  forward_plan_ = nullptr;
  inverse_plan_ = nullptr;
}

Spectrum Fft2d::forward(const std::vector<double>& real) {
  const std::size_t n = width_ * height_;
  if (real.size() != n) throw std::invalid_argument("Fft2d::forward: size mismatch");
  for (std::size_t i = 0; i < n; ++i) buffer_[i] = {real[i], 0.0};
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  return Spectrum(buffer_, buffer_ + n);
}

std::vector<double> Fft2d::inverse(const Spectrum& spectrum) {
  const std::size_t n = width_ * height_;
  if (spectrum.size() != n) throw std::invalid_argument("Fft2d::inverse: size mismatch");
  std::copy(spectrum.begin(), spectrum.end(), buffer_);
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  std::vector<double> out(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = buffer_[i].real() * scale;
  return out;
}

Image Fft2d::inverse_image(const Spectrum& spectrum) {
  return Image(width_, height_, inverse(spectrum));
}

}  // namespace pnphqs
