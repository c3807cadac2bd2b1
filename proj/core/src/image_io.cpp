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

#include "pnphqs/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace pnphqs {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

Image read_png(const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str())) {
    throw ImageIoError("cannot read PNG " + path.string() + ": " + img.message);
  }
  img.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ImageIoError("cannot decode PNG " + path.string() + ": " + msg);
  }
  Image out(img.width, img.height);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(buffer[i]);
  png_image_free(&img);
  return out;
}

void write_png(const std::filesystem::path& path, const Image& image) {
  std::vector<png_byte> buffer(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) buffer[i] = quantize(image[i]);
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&img, path.string().c_str(), 0, buffer.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ImageIoError("cannot write PNG " + path.string() + ": " + msg);
  }
  png_image_free(&img);
}

// Reads the next header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

std::size_t pgm_number(std::istream& in, const std::filesystem::path& path) {
  const std::string tok = pgm_token(in);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) {
    throw ImageIoError("malformed PGM header in " + path.string());
  }
  return std::stoul(tok);
}

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open " + path.string());
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw ImageIoError("not a PGM file: " + path.string());
  const std::size_t w = pgm_number(in, path);
  const std::size_t h = pgm_number(in, path);
  const std::size_t maxval = pgm_number(in, path);
  if (maxval == 0 || maxval > 255) {
    throw ImageIoError("unsupported PGM maxval " + std::to_string(maxval) + " in " +
                       path.string());
  }
  const double scale = 255.0 / static_cast<double>(maxval);
  Image out(w, h);
  if (magic == "P5") {
    std::vector<unsigned char> raw(w * h);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw ImageIoError("truncated PGM data in " + path.string());
    }
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] * scale;
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const std::size_t value = pgm_number(in, path);
      if (value > maxval) throw ImageIoError("PGM sample exceeds maxval in " + path.string());
      out[i] = static_cast<double>(value) * scale;
    }
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const Image& image, PgmEncoding enc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("cannot write " + path.string());
  out << (enc == PgmEncoding::binary ? "P5" : "P2") << '\n'
      << image.width() << ' ' << image.height() << "\n255\n";
  if (enc == PgmEncoding::binary) {
    std::vector<unsigned char> raw(image.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = quantize(image[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  } else {
    for (std::size_t y = 0; y < image.height(); ++y) {
      for (std::size_t x = 0; x < image.width(); ++x) {
        out << static_cast<int>(quantize(image.at(x, y)));
        out << (x + 1 == image.width() ? '\n' : ' ');
      }
    }
  }
  if (!out) throw ImageIoError("write failed for " + path.string());
}

}  // namespace

unsigned char quantize(double intensity) {
  if (std::isnan(intensity)) return 0;
  const double clamped = std::clamp(intensity, 0.0, 255.0);
  return static_cast<unsigned char>(std::round(clamped));
}

Image read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open " + path.string());
  char sig[8] = {};
  in.read(sig, sizeof(sig));
  const auto got = static_cast<std::size_t>(in.gcount());
  in.close();
  if (got >= 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(sig), 0, 8) == 0) {
    return read_png(path);
  }
  if (got >= 2 && sig[0] == 'P' && (sig[1] == '2' || sig[1] == '5')) return read_pgm(path);
  throw ImageIoError("unrecognized image format: " + path.string());
}

void write_image(const std::filesystem::path& path, const Image& image, PgmEncoding pgm) {
  if (image.empty()) throw ImageIoError("refusing to write an empty image");
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_png(path, image);
  } else if (ext == ".pgm") {
    write_pgm(path, image, pgm);
  } else {
    throw ImageIoError("unsupported output extension '" + ext + "' (use .png or .pgm)");
  }
}

BinaryMask read_mask(const std::filesystem::path& path) {
  const Image img = read_image(path);
  BinaryMask mask(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) mask.data[i] = img[i] != 0.0;
  return mask;
}

}  // namespace pnphqs
