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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pnphqs/image_io.hpp"

using namespace pnphqs;
namespace fs = std::filesystem;

namespace {

class ImageIo : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pnphqs_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

Image integer_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  Image img = oracle::random_image(w, h, seed);
  for (double& x : img.data()) x = std::floor(x);
  return img;
}

}  // namespace

TEST(Quantize, ClampsAndRoundsHalfAwayFromZero) {
  EXPECT_EQ(quantize(-3.0), 0);
  EXPECT_EQ(quantize(300.0), 255);
  EXPECT_EQ(quantize(2.5), 3);
  EXPECT_EQ(quantize(2.4999), 2);
  EXPECT_EQ(quantize(254.5), 255);
}

TEST_F(ImageIo, PngRoundTripIsExactForIntegers) {
  const Image img = integer_image(13, 7, 1);
  write_image(dir_ / "a.png", img);
  EXPECT_EQ(read_image(dir_ / "a.png"), img);
}

TEST_F(ImageIo, PgmBinaryAndPlainRoundTrip) {
  const Image img = integer_image(6, 9, 2);
  write_image(dir_ / "b.pgm", img, PgmEncoding::binary);
  write_image(dir_ / "p.pgm", img, PgmEncoding::plain);
  EXPECT_EQ(read_image(dir_ / "b.pgm"), img);
  EXPECT_EQ(read_image(dir_ / "p.pgm"), img);
}

TEST_F(ImageIo, WriteClampsAndRounds) {
  const Image img(3, 1, std::vector<double>{-10.0, 127.5, 999.0});
  write_image(dir_ / "c.png", img);
  const Image back = read_image(dir_ / "c.png");
  EXPECT_EQ(back.data(), (std::vector<double>{0.0, 128.0, 255.0}));
}

TEST_F(ImageIo, PlainPgmWithCommentsAndSmallMaxval) {
  std::ofstream(dir_ / "m.pgm") << "P2\n# comment\n3 1\n# another\n15\n0 15 5\n";
  const Image img = read_image(dir_ / "m.pgm");
  ASSERT_EQ(img.width(), 3u);
  EXPECT_DOUBLE_EQ(img[0], 0.0);
  EXPECT_DOUBLE_EQ(img[1], 255.0);
  EXPECT_DOUBLE_EQ(img[2], 85.0);
}

TEST_F(ImageIo, BadFilesThrow) {
  std::ofstream(dir_ / "junk.png") << "not an image";
  EXPECT_THROW(read_image(dir_ / "junk.png"), ImageIoError);
  EXPECT_THROW(read_image(dir_ / "missing.png"), ImageIoError);
  std::ofstream(dir_ / "trunc.pgm") << "P5\n4 4\n255\nab";
  EXPECT_THROW(read_image(dir_ / "trunc.pgm"), ImageIoError);
  EXPECT_THROW(write_image(dir_ / "x.bmp", Image(2, 2)), ImageIoError);
  EXPECT_THROW(write_image(dir_ / "no" / "such" / "dir.png", Image(2, 2)), ImageIoError);
}

TEST_F(ImageIo, MaskTreatsNonzeroAsForeground) {
  write_image(dir_ / "mask.png", Image(3, 1, std::vector<double>{0.0, 1.0, 255.0}));
  const BinaryMask m = read_mask(dir_ / "mask.png");
  EXPECT_EQ(m.data, (std::vector<bool>{false, true, true}));
}
