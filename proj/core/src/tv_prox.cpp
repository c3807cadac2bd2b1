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

#include "pnphqs/tv_prox.hpp"

#include <cmath>
#include <stdexcept>

namespace pnphqs {

GradientField prox_tv(const GradientField& field, TvThreshold thr) {
  if (!(thr.gamma >= 0.0)) throw std::invalid_argument("prox_tv: gamma must be >= 0");
  const double tau = thr.threshold();
  GradientField out(field.width, field.height);
  for (std::size_t i = 0; i < field.pixels(); ++i) {
    const double mag = std::hypot(field.h[i], field.v[i]);
    if (mag <= tau || mag == 0.0) continue;
    const double scale = 1.0 - tau / mag;
    out.h[i] = scale * field.h[i];
    out.v[i] = scale * field.v[i];
  }
  return out;
}

double tv_norm(const GradientField& field) {
  double s = 0.0;
  for (std::size_t i = 0; i < field.pixels(); ++i) s += std::hypot(field.h[i], field.v[i]);
  return s;
}

}  // namespace pnphqs
