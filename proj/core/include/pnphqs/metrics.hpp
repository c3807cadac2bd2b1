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

/// Peak signal-to-noise ratio in dB with peak fixed at 255.
/// Returns +infinity for identical images.
double psnr(const Image& reference, const Image& test);

struct SsimParams {
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
  int window = 11;
  double sigma = 1.5;
};

/// Mean structural similarity over every fully contained Gaussian window.
double ssim(const Image& reference, const Image& test, const SsimParams& params = {});

/// Population standard deviation of the intensities inside `roi`.
double roi_std(const Image& image, const RoiRect& roi);

/// |A n B| / |A u B|; 1 when both masks are empty.
double jaccard(const BinaryMask& a, const BinaryMask& b);

}  // namespace pnphqs
