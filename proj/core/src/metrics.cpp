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

#include "pnphqs/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pnphqs {

double squared_norm(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("squared_distance: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double norm(const Image& img) { return std::sqrt(squared_norm(img.data())); }

double distance(const Image& a, const Image& b) {
  return std::sqrt(squared_distance(a.data(), b.data()));
}

double norm(const GradientField& f) { return std::sqrt(squared_norm(f.h) + squared_norm(f.v)); }

double distance(const GradientField& a, const GradientField& b) {
  return std::sqrt(squared_distance(a.h, b.h) + squared_distance(a.v, b.v));
}

namespace {

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()) + ")");
  }
}

std::vector<double> gaussian_window_1d(int size, double sigma) {
  std::vector<double> w(static_cast<std::size_t>(size));
  const int c = size / 2;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - c;
    w[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

// Valid-region separable filtering: output is (W-n+1) x (H-n+1).
std::vector<double> filter_valid(const std::vector<double>& src, std::size_t width,
                                 std::size_t height, const std::vector<double>& k) {
  const std::size_t n = k.size();
  const std::size_t ow = width - n + 1;
  const std::size_t oh = height - n + 1;
  std::vector<double> rows(ow * height);
  for (std::size_t y = 0; y < height; ++y) {
    const double* line = src.data() + y * width;
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += k[i] * line[x + i];
      rows[y * ow + x] = acc;
    }
  }
  std::vector<double> out(ow * oh);
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += k[i] * rows[(y + i) * ow + x];
      out[y * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const Image& reference, const Image& test) {
  require_same_shape(reference, test, "psnr");
  if (reference.empty()) throw std::invalid_argument("psnr: empty image");
  const double mse = squared_distance(reference.data(), test.data()) /
                     static_cast<double>(reference.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const Image& reference, const Image& test, const SsimParams& params) {
  require_same_shape(reference, test, "ssim");
  const auto win = static_cast<std::size_t>(params.window);
  if (reference.width() < win || reference.height() < win) {
    throw std::invalid_argument("ssim: image smaller than the " + std::to_string(win) + "x" +
                                std::to_string(win) + " window");
  }
  const std::size_t w = reference.width();
  const std::size_t h = reference.height();
  const auto kernel = gaussian_window_1d(params.window, params.sigma);

  const auto& x = reference.data();
  const auto& y = test.data();
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, w, h, kernel);
  const auto my = filter_valid(y, w, h, kernel);
  const auto mxx = filter_valid(xx, w, h, kernel);
  const auto myy = filter_valid(yy, w, h, kernel);
  const auto mxy = filter_valid(xy, w, h, kernel);

  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = mxx[i] - mx[i] * mx[i];
    const double vy = myy[i] - my[i] * my[i];
    const double cov = mxy[i] - mx[i] * my[i];
    const double num = (2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2);
    const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
    total += num / den;
  }
  return total / static_cast<double>(mx.size());
}

double roi_std(const Image& image, const RoiRect& roi) {
  if (!roi.inside(image.width(), image.height())) {
    throw std::out_of_range("roi_std: roi (" + std::to_string(roi.x) + "," +
                            std::to_string(roi.y) + "," + std::to_string(roi.w) + "," +
                            std::to_string(roi.h) + ") outside image");
  }
  const double count = static_cast<double>(roi.w * roi.h);
  double mean = 0.0;
  for (std::size_t y = roi.y; y < roi.y + roi.h; ++y)
    for (std::size_t x = roi.x; x < roi.x + roi.w; ++x) mean += image.at(x, y);
  mean /= count;
  double var = 0.0;
  for (std::size_t y = roi.y; y < roi.y + roi.h; ++y)
    for (std::size_t x = roi.x; x < roi.x + roi.w; ++x) {
      const double d = image.at(x, y) - mean;
      var += d * d;
    }
  return std::sqrt(var / count);
}

double jaccard(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height || a.data.size() != b.data.size()) {
    throw std::invalid_argument("jaccard: mask dimension mismatch");
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    inter += (a.data[i] && b.data[i]) ? 1 : 0;
    uni += (a.data[i] || b.data[i]) ? 1 : 0;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace pnphqs
