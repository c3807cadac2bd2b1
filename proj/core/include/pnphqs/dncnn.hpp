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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pnphqs/image.hpp"

namespace pnphqs {

enum class DenoiserDomain : std::uint8_t { image = 0, gradient = 1 };

const char* to_string(DenoiserDomain domain);

/// Inference-mode batch normalization: scale * (x - mean) / sqrt(variance + epsilon) + shift.
struct BatchNorm {
  std::vector<double> scale;
  std::vector<double> shift;
  std::vector<double> mean;
  std::vector<double> variance;
  double epsilon = 1e-5;

  friend bool operator==(const BatchNorm&, const BatchNorm&) = default;
};

/// 3x3 dilated convolution. Weights are ordered [out][in][row][col]; output
/// pixel (y,x) accumulates w[o][i][r][c] * in_i(y + (r-1)*d, x + (c-1)*d)
/// with zero padding of d pixels per side.
struct ConvLayer {
  static constexpr std::size_t kKernel = 3;

  std::uint32_t dilation = 1;
  std::uint32_t in_channels = 1;
  std::uint32_t out_channels = 1;
  std::vector<double> weights;
  std::vector<double> bias;
  std::optional<BatchNorm> batch_norm;

  std::size_t weight_count() const {
    return static_cast<std::size_t>(out_channels) * in_channels * kKernel * kKernel;
  }

  friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

class ModelError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Seven-layer dilated residual denoiser. Layers 1-6 are followed by ReLU
/// (with batch norm in between on layers 2-6 when present); layer 7 is linear
/// and predicts the noise. The network sees intensities divided by 255.
class DnCnnModel {
public:
  static constexpr std::array<std::uint32_t, 7> kDilations{1, 2, 3, 4, 3, 2, 1};
  static constexpr std::uint32_t kDefaultFeatures = 64;

  /// Throws ModelError on any shape or architecture violation.
  DnCnnModel(std::vector<ConvLayer> layers, double noise_level, DenoiserDomain domain);

  const std::vector<ConvLayer>& layers() const { return layers_; }
  double noise_level() const { return noise_level_; }
  DenoiserDomain domain() const { return domain_; }

  /// Predicted noise on the [0,255] scale; same dimensions as the input.
  Image residual(const Image& noisy) const;

  /// True when the final layer is identically zero, so the residual vanishes
  /// for every input.
  bool zero_residual() const { return zero_residual_; }

  friend bool operator==(const DnCnnModel& a, const DnCnnModel& b) {
    return a.noise_level_ == b.noise_level_ && a.domain_ == b.domain_ && a.layers_ == b.layers_;
  }

private:
  std::vector<ConvLayer> layers_;
  double noise_level_ = 0.0;
  DenoiserDomain domain_ = DenoiserDomain::image;
  bool zero_residual_ = false;
};

/// noisy - residual(noisy). Requires an image-domain model.
Image infer_image(const DnCnnModel& model, const Image& noisy);

/// Periodic gradient of (noisy - residual(noisy)). Requires a gradient-domain model.
GradientField infer_gradient(const DnCnnModel& model, const Image& noisy);

/// 25 models at training noise levels 2, 4, ..., 50 sharing one domain.
class DenoiserBank {
public:
  static constexpr std::size_t kLevels = 25;
  static std::array<double, kLevels> standard_levels();

  DenoiserBank() = default;
  /// Throws ModelError unless the levels are exactly the standard grid and
  /// every model shares the same domain.
  explicit DenoiserBank(std::vector<DnCnnModel> models);

  bool empty() const { return models_.empty(); }
  std::size_t size() const { return models_.size(); }
  DenoiserDomain domain() const;
  const std::vector<DnCnnModel>& models() const { return models_; }

  friend bool operator==(const DenoiserBank&, const DenoiserBank&) = default;

private:
  std::vector<DnCnnModel> models_;
};

/// The model whose level is nearest to sigma clamped into [2,50]; ties go to
/// the larger level.
const DnCnnModel& select_model(const DenoiserBank& bank, double sigma);

/// Architecture-conformant model whose weights and biases are all zero.
DnCnnModel zero_residual_model(DenoiserDomain domain, double noise_level,
                               std::uint32_t features = DnCnnModel::kDefaultFeatures);
DenoiserBank zero_residual_bank(DenoiserDomain domain,
                                std::uint32_t features = DnCnnModel::kDefaultFeatures);

/// Gaussian weights N(0, weight_std^2), biases N(0, bias_std^2) and batch
/// norm statistics drawn from a counter-based stream; used for probes.
DnCnnModel random_model(DenoiserDomain domain, double noise_level, std::uint64_t seed,
                        std::uint32_t features, double weight_std = 0.1, double bias_std = 0.01);

}  // namespace pnphqs
