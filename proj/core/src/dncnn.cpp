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

#include "pnphqs/dncnn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pnphqs/degrade.hpp"
#include "pnphqs/forward_ops.hpp"

namespace pnphqs {

const char* to_string(DenoiserDomain domain) {
  return domain == DenoiserDomain::image ? "image" : "gradient";
}

namespace {

void check(bool ok, std::size_t layer, const std::string& what) {
  if (!ok) throw ModelError("DnCNN layer " + std::to_string(layer + 1) + ": " + what);
}

void validate_layers(const std::vector<ConvLayer>& layers) {
  if (layers.size() != DnCnnModel::kDilations.size()) {
    throw ModelError("DnCNN: expected 7 layers, got " + std::to_string(layers.size()));
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const ConvLayer& layer = layers[l];
    check(layer.dilation == DnCnnModel::kDilations[l], l,
          "dilation " + std::to_string(layer.dilation) + ", expected " +
              std::to_string(DnCnnModel::kDilations[l]));
    check(layer.in_channels > 0 && layer.out_channels > 0, l, "empty channel count");
    if (l == 0) check(layer.in_channels == 1, l, "input layer must take 1 channel");
    if (l + 1 == layers.size()) check(layer.out_channels == 1, l, "output layer must emit 1 channel");
    if (l > 0) {
      check(layer.in_channels == layers[l - 1].out_channels, l,
            "in-channels do not match the previous layer's out-channels");
    }
    check(layer.weights.size() == layer.weight_count(), l,
          "weight count " + std::to_string(layer.weights.size()) + ", expected " +
              std::to_string(layer.weight_count()));
    check(layer.bias.size() == layer.out_channels, l, "bias length mismatch");
    if (layer.batch_norm) {
      check(l != 0 && l + 1 != layers.size(), l, "batch norm only allowed on layers 2-6");
      const BatchNorm& bn = *layer.batch_norm;
      const std::size_t c = layer.out_channels;
      check(bn.scale.size() == c && bn.shift.size() == c && bn.mean.size() == c &&
                bn.variance.size() == c,
            l, "batch norm parameter length mismatch");
      for (std::size_t k = 0; k < c; ++k) {
        check(bn.variance[k] + bn.epsilon > 0.0, l, "non-positive batch norm variance");
      }
    }
  }
}

void convolve_layer(const ConvLayer& layer, const std::vector<double>& in, std::vector<double>& out,
                    std::size_t w, std::size_t h) {
  const std::size_t plane = w * h;
  const auto d = static_cast<long>(layer.dilation);
  const auto W = static_cast<long>(w);
  const auto H = static_cast<long>(h);
  out.assign(plane * layer.out_channels, 0.0);
  for (std::size_t o = 0; o < layer.out_channels; ++o) {
    double* dst_plane = out.data() + o * plane;
    std::fill(dst_plane, dst_plane + plane, layer.bias[o]);
    for (std::size_t i = 0; i < layer.in_channels; ++i) {
      const double* src_plane = in.data() + i * plane;
      const double* kernel = layer.weights.data() + (o * layer.in_channels + i) * 9;
      for (long r = 0; r < 3; ++r) {
        const long dy = (r - 1) * d;
        const long y0 = std::max(0L, -dy);
        const long y1 = std::min(H, H - dy);
        for (long c = 0; c < 3; ++c) {
          const double wgt = kernel[r * 3 + c];
          if (wgt == 0.0) continue;
          const long dx = (c - 1) * d;
          const long x0 = std::max(0L, -dx);
          const long x1 = std::min(W, W - dx);
          for (long y = y0; y < y1; ++y) {
            const double* src = src_plane + (y + dy) * W + dx;
            double* dst = dst_plane + y * W;
            for (long x = x0; x < x1; ++x) dst[x] += wgt * src[x];
          }
        }
      }
    }
  }
  if (layer.batch_norm) {
    const BatchNorm& bn = *layer.batch_norm;
    for (std::size_t o = 0; o < layer.out_channels; ++o) {
      const double gain = bn.scale[o] / std::sqrt(bn.variance[o] + bn.epsilon);
      const double offset = bn.shift[o] - gain * bn.mean[o];
      double* p = out.data() + o * plane;
      for (std::size_t k = 0; k < plane; ++k) p[k] = gain * p[k] + offset;
    }
  }
}

}  // namespace

DnCnnModel::DnCnnModel(std::vector<ConvLayer> layers, double noise_level, DenoiserDomain domain)
    : layers_(std::move(layers)), noise_level_(noise_level), domain_(domain) {
  validate_layers(layers_);
  if (!std::isfinite(noise_level_) || noise_level_ < 0.0) {
    throw ModelError("DnCNN: invalid noise level");
  }
  if (domain_ != DenoiserDomain::image && domain_ != DenoiserDomain::gradient) {
    throw ModelError("DnCNN: unknown domain tag");
  }
  const ConvLayer& last = layers_.back();
  zero_residual_ = std::all_of(last.weights.begin(), last.weights.end(), [](double x) { return x == 0.0; }) &&
                   std::all_of(last.bias.begin(), last.bias.end(), [](double x) { return x == 0.0; });
}

Image DnCnnModel::residual(const Image& noisy) const {
  const std::size_t w = noisy.width();
  const std::size_t h = noisy.height();
  if (zero_residual_) return Image(w, h);
  std::vector<double> a(noisy.data());
  for (double& x : a) x /= 255.0;
  std::vector<double> b;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    convolve_layer(layers_[l], a, b, w, h);
    if (l + 1 < layers_.size()) {
      for (double& x : b) x = x > 0.0 ? x : 0.0;
    }
    std::swap(a, b);
  }
  for (double& x : a) x *= 255.0;
  return Image(w, h, std::move(a));
}

Image infer_image(const DnCnnModel& model, const Image& noisy) {
  if (model.domain() != DenoiserDomain::image) {
    throw ModelError("infer_image: model is a gradient-domain denoiser");
  }
  Image r = model.residual(noisy);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = noisy[i] - r[i];
  return r;
}

GradientField infer_gradient(const DnCnnModel& model, const Image& noisy) {
  if (model.domain() != DenoiserDomain::gradient) {
    throw ModelError("infer_gradient: model is an image-domain denoiser");
  }
  Image r = model.residual(noisy);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = noisy[i] - r[i];
  return gradient(r);
}

std::array<double, DenoiserBank::kLevels> DenoiserBank::standard_levels() {
  std::array<double, kLevels> levels{};
  for (std::size_t i = 0; i < kLevels; ++i) levels[i] = 2.0 * static_cast<double>(i + 1);
  return levels;
}

DenoiserBank::DenoiserBank(std::vector<DnCnnModel> models) : models_(std::move(models)) {
  if (models_.size() != kLevels) {
    throw ModelError("DenoiserBank: expected 25 models, got " + std::to_string(models_.size()));
  }
  const auto levels = standard_levels();
  for (std::size_t i = 0; i < kLevels; ++i) {
    if (models_[i].noise_level() != levels[i]) {
      throw ModelError("DenoiserBank: model " + std::to_string(i) + " has level " +
                       std::to_string(models_[i].noise_level()) + ", expected " +
                       std::to_string(levels[i]));
    }
    if (models_[i].domain() != models_[0].domain()) {
      throw ModelError("DenoiserBank: mixed domain tags");
    }
  }
}

DenoiserDomain DenoiserBank::domain() const {
  if (models_.empty()) throw ModelError("DenoiserBank: empty bank has no domain");
  return models_.front().domain();
}

const DnCnnModel& select_model(const DenoiserBank& bank, double sigma) {
  if (bank.empty()) throw ModelError("select_model: empty bank");
  if (!(sigma >= 0.0)) throw std::invalid_argument("select_model: sigma must be >= 0");
  const auto& models = bank.models();
  const double s = std::clamp(sigma, models.front().noise_level(), models.back().noise_level());
  std::size_t best = 0;
  double best_dist = std::abs(models[0].noise_level() - s);
  for (std::size_t i = 1; i < models.size(); ++i) {
    const double dist = std::abs(models[i].noise_level() - s);
    // Levels increase, so `<=` resolves ties toward the larger level.
    if (dist <= best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return models[best];
}

namespace {

std::vector<ConvLayer> layer_skeleton(std::uint32_t features) {
  std::vector<ConvLayer> layers(DnCnnModel::kDilations.size());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    ConvLayer& layer = layers[l];
    layer.dilation = DnCnnModel::kDilations[l];
    layer.in_channels = l == 0 ? 1 : features;
    layer.out_channels = l + 1 == layers.size() ? 1 : features;
    layer.weights.assign(layer.weight_count(), 0.0);
    layer.bias.assign(layer.out_channels, 0.0);
    if (l != 0 && l + 1 != layers.size()) {
      BatchNorm bn;
      bn.scale.assign(features, 1.0);
      bn.shift.assign(features, 0.0);
      bn.mean.assign(features, 0.0);
      bn.variance.assign(features, 1.0);
      layer.batch_norm = std::move(bn);
    }
  }
  return layers;
}

}  // namespace

DnCnnModel zero_residual_model(DenoiserDomain domain, double noise_level, std::uint32_t features) {
  return DnCnnModel(layer_skeleton(features), noise_level, domain);
}

DenoiserBank zero_residual_bank(DenoiserDomain domain, std::uint32_t features) {
  std::vector<DnCnnModel> models;
  for (double level : DenoiserBank::standard_levels()) {
    models.push_back(zero_residual_model(domain, level, features));
  }
  return DenoiserBank(std::move(models));
}

DnCnnModel random_model(DenoiserDomain domain, double noise_level, std::uint64_t seed,
                        std::uint32_t features, double weight_std, double bias_std) {
  auto layers = layer_skeleton(features);
  const GaussianNoise gauss(seed);
  std::uint64_t counter = 0;
  auto next = [&] { return gauss(counter++); };
  for (ConvLayer& layer : layers) {
    for (double& w : layer.weights) w = weight_std * next();
    for (double& b : layer.bias) b = bias_std * next();
    if (layer.batch_norm) {
      for (double& s : layer.batch_norm->scale) s = 1.0 + 0.1 * next();
      for (double& s : layer.batch_norm->shift) s = 0.05 * next();
      for (double& s : layer.batch_norm->mean) s = 0.05 * next();
      for (double& s : layer.batch_norm->variance) s = 1.0 + 0.2 * std::abs(next());
    }
  }
  return DnCnnModel(std::move(layers), noise_level, domain);
}

}  // namespace pnphqs
