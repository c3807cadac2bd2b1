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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnphqs {

/// Grayscale raster, row-major, intensities nominally on the [0,255] scale.
/// Values outside that range are legal for intermediate iterates.
class Image {
public:
  Image() = default;
  Image(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), data_(width * height, fill) {}
  Image(std::size_t width, std::size_t height, std::vector<double> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) {
      throw std::invalid_argument("Image: data length " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(width_) + "x" +
                                  std::to_string(height_));
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
  double at(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Image&, const Image&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

/// Per-pixel 2-vector field: horizontal and vertical finite differences.
struct GradientField {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> h;
  std::vector<double> v;

  GradientField() = default;
  GradientField(std::size_t w, std::size_t hgt)
      : width(w), height(hgt), h(w * hgt, 0.0), v(w * hgt, 0.0) {}

  std::size_t pixels() const { return width * height; }
  bool same_shape(const GradientField& o) const {
    return width == o.width && height == o.height;
  }
  bool matches(const Image& img) const {
    return width == img.width() && height == img.height();
  }

  friend bool operator==(const GradientField&, const GradientField&) = default;
};

struct BinaryMask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<bool> data;

  BinaryMask() = default;
  BinaryMask(std::size_t w, std::size_t h, bool fill = false)
      : width(w), height(h), data(w * h, fill) {}

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

struct RoiRect {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;

  bool inside(std::size_t width, std::size_t height) const {
    return w > 0 && h > 0 && x + w <= width && y + h <= height;
  }
  bool intersects(const RoiRect& o) const {
    return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }

  friend bool operator==(const RoiRect&, const RoiRect&) = default;
};

// Euclidean helpers shared by the solver and the diagnostics.
double squared_norm(const std::vector<double>& a);
double squared_distance(const std::vector<double>& a, const std::vector<double>& b);
double norm(const Image& img);
double distance(const Image& a, const Image& b);
double norm(const GradientField& f);
double distance(const GradientField& a, const GradientField& b);

}  // namespace pnphqs
