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

#include "pnphqs/degrade.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pnphqs/forward_ops.hpp"

namespace pnphqs {

void DegradeSpec::validate() const {
  if (kernel_size == 0 || kernel_size % 2 == 0) {
    throw std::invalid_argument("DegradeSpec: kernel size must be odd and >= 1");
  }
  if (kernel_size > 1 && !(kernel_std > 0.0)) {
    throw std::invalid_argument("DegradeSpec: kernel std must be positive");
  }
  if (!(noise_std >= 0.0)) throw std::invalid_argument("DegradeSpec: noise std must be >= 0");
}

Psf DegradeSpec::psf() const {
  validate();
  if (kernel_size == 1) return Psf::delta();
  return gaussian_psf(kernel_size, kernel_std);
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace

double GaussianNoise::uniform(std::uint64_t counter) const {
  const std::uint64_t bits = splitmix64(splitmix64(seed_) ^ (counter * 0xD1B54A32D192ED03ULL));
  // (0, 1]: never zero, so the logarithm below stays finite.
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianNoise::operator()(std::uint64_t index) const {
  const std::uint64_t pair = index / 2;
  const double u1 = uniform(2 * pair);
  const double u2 = uniform(2 * pair + 1);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (index % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
}

Image degrade(const Image& image, const Psf& psf, double noise_std, std::uint64_t seed) {
  if (!(noise_std >= 0.0)) throw std::invalid_argument("degrade: noise std must be >= 0");
  Image out = convolve_periodic(image, psf);
  if (noise_std > 0.0) {
    const GaussianNoise noise(seed);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += noise_std * noise(i);
  }
  return out;
}

Image degrade(const Image& image, const DegradeSpec& spec) {
  return degrade(image, spec.psf(), spec.noise_std, spec.seed);
}

}  // namespace pnphqs
