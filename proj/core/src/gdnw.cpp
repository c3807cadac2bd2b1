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

#include "pnphqs/gdnw.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace pnphqs {
namespace gdnw {

namespace {

// Refuse absurd channel counts before allocating.
constexpr std::uint32_t kMaxChannels = 1024;

void put_bytes(std::ostream& out, const unsigned char* bytes, std::size_t n) {
  out.write(reinterpret_cast<const char*>(bytes), static_cast<std::streamsize>(n));
  if (!out) throw FormatError(ErrorCode::io, "GDNW: write failed");
}

void put_u8(std::ostream& out, std::uint8_t v) { put_bytes(out, &v, 1); }

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(out, b, 4);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  put_bytes(out, b, 8);
}

void put_f64s(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) put_f64(out, v);
}

void get_bytes(std::istream& in, unsigned char* bytes, std::size_t n, const char* field) {
  in.read(reinterpret_cast<char*>(bytes), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw FormatError(ErrorCode::truncated, std::string("GDNW: truncated file while reading ") + field);
  }
}

std::uint8_t get_u8(std::istream& in, const char* field) {
  unsigned char b = 0;
  get_bytes(in, &b, 1, field);
  return b;
}

std::uint32_t get_u32(std::istream& in, const char* field) {
  unsigned char b[4];
  get_bytes(in, b, 4, field);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in, const char* field) {
  unsigned char b[8];
  get_bytes(in, b, 8, field);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

std::vector<double> get_f64s(std::istream& in, std::size_t n, const char* field) {
  std::vector<double> out(n);
  for (double& v : out) v = get_f64(in, field);
  return out;
}

}  // namespace

void write_model(std::ostream& out, const DnCnnModel& model) {
  put_bytes(out, reinterpret_cast<const unsigned char*>(kMagic), 4);
  put_u32(out, kVersion);
  put_u8(out, static_cast<std::uint8_t>(model.domain()));
  put_f64(out, model.noise_level());
  put_u32(out, static_cast<std::uint32_t>(model.layers().size()));
  for (const ConvLayer& layer : model.layers()) {
    put_u32(out, layer.dilation);
    put_u32(out, layer.in_channels);
    put_u32(out, layer.out_channels);
    put_u8(out, layer.batch_norm ? 1 : 0);
    put_f64s(out, layer.weights);
    put_f64s(out, layer.bias);
    if (layer.batch_norm) {
      put_f64s(out, layer.batch_norm->scale);
      put_f64s(out, layer.batch_norm->shift);
      put_f64s(out, layer.batch_norm->mean);
      put_f64s(out, layer.batch_norm->variance);
      put_f64(out, layer.batch_norm->epsilon);
    }
  }
}

DnCnnModel read_model(std::istream& in) {
  unsigned char magic[4];
  get_bytes(in, magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(ErrorCode::bad_magic, "GDNW: bad magic bytes");
  }
  const std::uint32_t version = get_u32(in, "version");
  if (version != kVersion) {
    throw FormatError(ErrorCode::version_mismatch,
                      "GDNW: version " + std::to_string(version) + " not supported (expected " +
                          std::to_string(kVersion) + ")");
  }
  const std::uint8_t domain = get_u8(in, "domain");
  if (domain > 1) {
    throw FormatError(ErrorCode::shape_mismatch, "GDNW: unknown domain tag " + std::to_string(domain));
  }
  const double level = get_f64(in, "noise level");
  const std::uint32_t count = get_u32(in, "layer count");
  if (count != DnCnnModel::kDilations.size()) {
    throw FormatError(ErrorCode::shape_mismatch,
                      "GDNW: layer count " + std::to_string(count) + ", expected 7");
  }
  std::vector<ConvLayer> layers(count);
  for (ConvLayer& layer : layers) {
    layer.dilation = get_u32(in, "dilation");
    layer.in_channels = get_u32(in, "in-channels");
    layer.out_channels = get_u32(in, "out-channels");
    if (layer.in_channels == 0 || layer.out_channels == 0 || layer.in_channels > kMaxChannels ||
        layer.out_channels > kMaxChannels) {
      throw FormatError(ErrorCode::shape_mismatch, "GDNW: implausible channel count");
    }
    const std::uint8_t has_bn = get_u8(in, "batch-norm flag");
    if (has_bn > 1) throw FormatError(ErrorCode::shape_mismatch, "GDNW: bad batch-norm flag");
    layer.weights = get_f64s(in, layer.weight_count(), "weights");
    layer.bias = get_f64s(in, layer.out_channels, "biases");
    if (has_bn) {
      BatchNorm bn;
      bn.scale = get_f64s(in, layer.out_channels, "bn scale");
      bn.shift = get_f64s(in, layer.out_channels, "bn shift");
      bn.mean = get_f64s(in, layer.out_channels, "bn mean");
      bn.variance = get_f64s(in, layer.out_channels, "bn variance");
      bn.epsilon = get_f64(in, "bn epsilon");
      layer.batch_norm = std::move(bn);
    }
  }
  try {
    return DnCnnModel(std::move(layers), level, static_cast<DenoiserDomain>(domain));
  } catch (const ModelError& e) {
    throw FormatError(ErrorCode::shape_mismatch, std::string("GDNW: ") + e.what());
  }
}

void write_bank(std::ostream& out, const DenoiserBank& bank) {
  put_u32(out, static_cast<std::uint32_t>(bank.size()));
  for (const DnCnnModel& m : bank.models()) write_model(out, m);
}

DenoiserBank read_bank(std::istream& in) {
  const std::uint32_t count = get_u32(in, "model count");
  if (count != DenoiserBank::kLevels) {
    throw FormatError(ErrorCode::shape_mismatch,
                      "GDNW: bank holds " + std::to_string(count) + " models, expected 25");
  }
  std::vector<DnCnnModel> models;
  models.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) models.push_back(read_model(in));
  try {
    return DenoiserBank(std::move(models));
  } catch (const ModelError& e) {
    throw FormatError(ErrorCode::shape_mismatch, std::string("GDNW: ") + e.what());
  }
}

}  // namespace gdnw

namespace {
std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gdnw::FormatError(gdnw::ErrorCode::io, "cannot write " + path.string());
  return out;
}
std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gdnw::FormatError(gdnw::ErrorCode::io, "cannot open " + path.string());
  return in;
}
}  // namespace

void save_model(const std::filesystem::path& path, const DnCnnModel& model) {
  auto out = open_out(path);
  gdnw::write_model(out, model);
}

DnCnnModel load_model(const std::filesystem::path& path) {
  auto in = open_in(path);
  return gdnw::read_model(in);
}

void save_bank(const std::filesystem::path& path, const DenoiserBank& bank) {
  auto out = open_out(path);
  gdnw::write_bank(out, bank);
}

DenoiserBank load_bank(const std::filesystem::path& path) {
  auto in = open_in(path);
  return gdnw::read_bank(in);
}

}  // namespace pnphqs
