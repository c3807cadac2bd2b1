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

#include <cstdint>

#include "pnphqs/image.hpp"
#include "pnphqs/psf.hpp"

namespace pnphqs {

struct DegradeSpec {
  std::size_t kernel_size = 15;
  double kernel_std = 1.2;
  double noise_std = 15.0;
  std::uint64_t seed = 0;

  void validate() const;
  Psf psf() const;
};

/// Counter-based standard normal stream: sample i depends only on (seed, i).
/// Pairs of uniforms from a SplitMix64 hash feed a Box-Muller transform.
class GaussianNoise {
public:
  explicit GaussianNoise(std::uint64_t seed) : seed_(seed) {}
  double operator()(std::uint64_t index) const;

private:
  double uniform(std::uint64_t counter) const;
  std::uint64_t seed_;
};

/// v = A u + e with A the periodic blur and e ~ N(0, noise_std^2) i.i.d.
Image degrade(const Image& image, const DegradeSpec& spec);
Image degrade(const Image& image, const Psf& psf, double noise_std, std::uint64_t seed);

}  // namespace pnphqs
