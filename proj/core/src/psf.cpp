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

#include "pnphqs/psf.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pnphqs {

double Psf::sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

Psf Psf::from_weights(std::size_t width, std::size_t height, std::vector<double> weights) {
  if (width % 2 == 0 || height % 2 == 0) {
    throw std::invalid_argument("Psf: kernel dimensions must be odd, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
  if (weights.size() != width * height) throw std::invalid_argument("Psf: weight count mismatch");
  return Psf{width, height, std::move(weights)};
}

Psf gaussian_psf(std::size_t size, double stddev) {
  if (size % 2 == 0) {
    throw std::invalid_argument("gaussian_psf: size must be odd, got " + std::to_string(size));
  }
  if (!(stddev > 0.0)) throw std::invalid_argument("gaussian_psf: stddev must be positive");
  const auto c = static_cast<long>(size / 2);
  std::vector<double> w(size * size);
  double sum = 0.0;
  for (long y = 0; y < static_cast<long>(size); ++y) {
    for (long x = 0; x < static_cast<long>(size); ++x) {
      const double dx = static_cast<double>(x - c);
      const double dy = static_cast<double>(y - c);
      const double value = std::exp(-(dx * dx + dy * dy) / (2.0 * stddev * stddev));
      w[static_cast<std::size_t>(y) * size + static_cast<std::size_t>(x)] = value;
      sum += value;
    }
  }
  for (double& value : w) value /= sum;
  return Psf{size, size, std::move(w)};
}

Psf load_psf_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open PSF file " + path.string());
  std::vector<double> weights;
  std::size_t width = 0;
  std::size_t height = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::vector<double> values;
    std::string tok;
    while (row >> tok) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw std::runtime_error("PSF file " + path.string() + ": bad number '" + tok + "'");
      }
      values.push_back(value);
    }
    if (values.empty()) continue;
    if (width == 0) width = values.size();
    if (values.size() != width) {
      throw std::runtime_error("PSF file " + path.string() + ": ragged rows");
    }
    weights.insert(weights.end(), values.begin(), values.end());
    ++height;
  }
  if (height == 0) throw std::runtime_error("PSF file " + path.string() + " is empty");
  Psf psf = Psf::from_weights(width, height, std::move(weights));
  const double s = psf.sum();
  if (!(s > 0.0)) throw std::runtime_error("PSF file " + path.string() + ": non-positive sum");
  for (double& value : psf.weights) value /= s;
  return psf;
}

}  // namespace pnphqs
