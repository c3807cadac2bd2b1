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

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pnphqs/degrade.hpp"
#include "pnphqs/metrics.hpp"
#include "pnphqs/phantom.hpp"

using namespace pnphqs;

TEST(Phantom, NoShapesGivesConstantImage) {
  PhantomSpec spec;
  spec.size = 40;
  spec.background = 17.0;
  const Phantom p = make_phantom(spec);
  ASSERT_EQ(p.image.width(), 40u);
  for (double x : p.image.data()) EXPECT_EQ(x, 17.0);
  EXPECT_TRUE(p.shapes.empty());
}

TEST(Phantom, DefaultIsFiveTwelveSquareWithUniformRoi) {
  const PhantomSpec spec = PhantomSpec::standard();
  const Phantom p = make_phantom(spec);
  EXPECT_EQ(p.image.width(), 512u);
  EXPECT_EQ(p.image.height(), 512u);
  EXPECT_EQ(p.roi.w, 50u);
  EXPECT_EQ(roi_std(p.image, p.roi), 0.0);
  EXPECT_EQ(p.image.at(p.roi.x, p.roi.y), spec.background);
  EXPECT_EQ(p.shapes.size(), 18u);
}

TEST(Phantom, IntensitiesAreBackgroundPlusContrast) {
  const Phantom p = make_phantom(PhantomSpec::standard(128));
  const std::set<double> values(p.image.data().begin(), p.image.data().end());
  EXPECT_EQ(values, (std::set<double>{50.0, 60.0, 80.0, 110.0, 170.0}));
}

TEST(Phantom, DiskPixelCountsNearArea) {
  const PhantomSpec spec = PhantomSpec::standard();
  const Phantom p = make_phantom(spec);
  for (const auto& s : p.shapes) {
    if (s.kind != PhantomShape::Kind::circle) continue;
    const double d = s.diameter;
    // Count pixels at the shape intensity in a window twice the diameter.
    const long x0 = std::lround(s.center_x - d);
    const long y0 = std::lround(s.center_y - d);
    std::size_t count = 0;
    for (long y = std::max(0L, y0); y < std::min(512L, y0 + 2 * static_cast<long>(d) + 1); ++y)
      for (long x = std::max(0L, x0); x < std::min(512L, x0 + 2 * static_cast<long>(d) + 1); ++x)
        count += p.image.at(x, y) == s.intensity ? 1 : 0;
    EXPECT_NEAR(static_cast<double>(count), std::numbers::pi * d * d / 4.0, 4.0 * d) << "d=" << d;
  }
}

TEST(Phantom, CrossesHaveExactThickness) {
  const Phantom p = make_phantom(PhantomSpec::standard(256));
  for (const auto& s : p.shapes) {
    if (s.kind != PhantomShape::Kind::cross) continue;
    // A horizontal scan through the arm-center column, away from the
    // crossing, sees exactly `thickness` bright pixels.
    const auto cx = static_cast<std::size_t>(std::floor(s.center_x));
    const auto cy = static_cast<std::size_t>(std::floor(s.center_y));
    const std::size_t y = cy - s.arm_length / 2 + 1;
    std::size_t bright = 0;
    for (std::size_t x = cx - 10; x <= cx + 10; ++x) bright += p.image.at(x, y) == s.intensity;
    EXPECT_EQ(bright, s.thickness);
  }
}

TEST(Phantom, Deterministic) {
  const PhantomSpec spec = PhantomSpec::standard(96);
  EXPECT_EQ(make_phantom(spec).image, make_phantom(spec).image);
}

TEST(Phantom, InvalidSpecsThrow) {
  PhantomSpec spec = PhantomSpec::standard(64);
  spec.circle_rows[0].diameters[0] = 40.0;  // larger than its cell
  EXPECT_THROW(make_phantom(spec), std::invalid_argument);
  spec = PhantomSpec::standard(64);
  spec.roi = RoiRect{0, 0, 64, 64};
  EXPECT_THROW(make_phantom(spec), std::invalid_argument);
  spec = PhantomSpec::standard(64);
  spec.roi = RoiRect{60, 60, 10, 10};
  EXPECT_THROW(make_phantom(spec), std::invalid_argument);
  EXPECT_THROW(PhantomSpec::standard(16), std::invalid_argument);
}

TEST(Phantom, MetadataRoundTripsRoi) {
  const PhantomSpec spec = PhantomSpec::standard(128);
  const Phantom p = make_phantom(spec);
  const std::string json = phantom_metadata_json(p, spec);
  EXPECT_EQ(roi_from_metadata_json(json), p.roi);
  EXPECT_NE(json.find("\"circle\""), std::string::npos);
  EXPECT_NE(json.find("\"cross\""), std::string::npos);
}

TEST(Degrade, DeltaAndZeroNoiseIsIdentity) {
  const Image u = oracle::random_image(16, 12, 1);
  EXPECT_EQ(degrade(u, Psf::delta(), 0.0, 5), u);
  DegradeSpec spec;
  spec.kernel_size = 1;
  spec.noise_std = 0.0;
  EXPECT_EQ(degrade(u, spec), u);
}

TEST(Degrade, NoiseStatistics) {
  const Image c(512, 512, 100.0);
  const Image out = degrade(c, Psf::delta(), 15.0, 2024);
  double mean = 0.0;
  for (double x : out.data()) mean += x;
  mean /= static_cast<double>(out.size());
  double var = 0.0;
  double m4 = 0.0;
  for (double x : out.data()) {
    var += (x - mean) * (x - mean);
    m4 += std::pow(x - mean, 4);
  }
  var /= static_cast<double>(out.size());
  m4 /= static_cast<double>(out.size());
  EXPECT_NEAR(std::sqrt(var), 15.0, 0.3);
  EXPECT_NEAR(mean, 100.0, 0.2);
  EXPECT_NEAR(m4 / (var * var), 3.0, 0.1);
}

TEST(Degrade, SeedDeterminism) {
  const Image u = make_phantom(PhantomSpec::standard(64)).image;
  DegradeSpec spec;
  spec.seed = 3;
  const Image a = degrade(u, spec);
  EXPECT_EQ(a, degrade(u, spec));
  spec.seed = 4;
  EXPECT_NE(a, degrade(u, spec));
}

TEST(Degrade, NoiseStreamIsCounterBased) {
  const GaussianNoise g(9);
  const double s5 = g(5);
  const double s0 = g(0);
  EXPECT_EQ(g(5), s5);
  EXPECT_EQ(g(0), s0);
  EXPECT_NE(g(4), g(5));
  EXPECT_NE(GaussianNoise(10)(5), s5);
}

TEST(Degrade, BlurOnlyPreservesMean) {
  const Image u = make_phantom(PhantomSpec::standard(64)).image;
  DegradeSpec spec;
  spec.noise_std = 0.0;
  const Image b = degrade(u, spec);
  const double m0 = std::accumulate(u.data().begin(), u.data().end(), 0.0);
  const double m1 = std::accumulate(b.data().begin(), b.data().end(), 0.0);
  EXPECT_NEAR(m1, m0, 1e-9 * m0);
  EXPECT_LE(oracle::max_abs_diff(b.data(), oracle::brute_convolve(u, spec.psf()).data()), 1e-10);
}

TEST(Degrade, InvalidSpecThrows) {
  DegradeSpec spec;
  spec.kernel_size = 4;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = DegradeSpec{};
  spec.noise_std = -1.0;
  EXPECT_THROW(degrade(Image(32, 32), spec), std::invalid_argument);
  spec = DegradeSpec{};
  spec.kernel_std = 0.0;
  EXPECT_THROW(spec.psf(), std::invalid_argument);
}
