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

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "pnphqs/dncnn.hpp"

namespace pnphqs {

/// "GDNW" weight files, all fields little-endian:
///
///   magic "GDNW" | version u32 | domain u8 | noise level f64 | layer count u32
///   per layer: dilation u32 | in u32 | out u32 | has-BN u8 |
///              weights f64[out*in*3*3] | bias f64[out] |
///              (if BN) scale, shift, mean, variance f64[out] each | epsilon f64
///
/// A bank file is a u32 model count followed by that many model records.
namespace gdnw {

inline constexpr char kMagic[4] = {'G', 'D', 'N', 'W'};
inline constexpr std::uint32_t kVersion = 1;

enum class ErrorCode { bad_magic, version_mismatch, shape_mismatch, truncated, io };

class FormatError : public std::runtime_error {
public:
  FormatError(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

void write_model(std::ostream& out, const DnCnnModel& model);
DnCnnModel read_model(std::istream& in);

void write_bank(std::ostream& out, const DenoiserBank& bank);
DenoiserBank read_bank(std::istream& in);

}  // namespace gdnw

void save_model(const std::filesystem::path& path, const DnCnnModel& model);
DnCnnModel load_model(const std::filesystem::path& path);

void save_bank(const std::filesystem::path& path, const DenoiserBank& bank);
DenoiserBank load_bank(const std::filesystem::path& path);

}  // namespace pnphqs
