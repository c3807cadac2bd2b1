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

#include "pnphqs/image.hpp"

namespace pnphqs {

class ImageIoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Reads an 8-bit grayscale PNG or a P2/P5 PGM, detected from the file
/// signature. Pixel values map to doubles on the [0,255] scale.
Image read_image(const std::filesystem::path& path);

enum class PgmEncoding { binary, plain };

/// Writes PNG or PGM depending on the extension (.png, .pgm). Intensities
/// are clamped to [0,255] and rounded half away from zero.
void write_image(const std::filesystem::path& path, const Image& image,
                 PgmEncoding pgm = PgmEncoding::binary);

/// Any nonzero pixel is foreground.
BinaryMask read_mask(const std::filesystem::path& path);

/// The 8-bit value an intensity is stored as.
unsigned char quantize(double intensity);

}  // namespace pnphqs
