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

#include "pnphqs/image.hpp"

namespace pnphqs {

/// Noise-level parameter of the internal denoiser. The shrinkage applied to
/// each gradient vector is gamma^2.
struct TvThreshold {
  double gamma = 0.0;
  double threshold() const { return gamma * gamma; }
};

/// Proximal map of x -> gamma^2 * sum_i ||x_i||_2 on a gradient field:
/// per-pixel block soft-thresholding, with zero-length vectors mapped to zero.
GradientField prox_tv(const GradientField& field, TvThreshold thr);

/// Isotropic total variation sum_i ||(D u)_i||_2 of a field.
double tv_norm(const GradientField& field);

}  // namespace pnphqs
