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

#include "pnphqs/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace pnphqs {

PhantomSpec PhantomSpec::standard(std::size_t size) {
  if (size < 32) throw std::invalid_argument("PhantomSpec::standard: size must be >= 32");
  const double s = static_cast<double>(size) / 512.0;
  PhantomSpec spec;
  spec.size = size;
  spec.background = 50.0;
  std::vector<double> diameters;
  for (double d : {64.0, 32.0, 16.0, 8.0, 4.0}) diameters.push_back(std::max(1.0, std::round(d * s)));
  for (double contrast : {10.0, 30.0, 60.0}) spec.circle_rows.push_back({contrast, diameters});
  for (std::size_t t : {1, 2, 4}) spec.crosses.push_back({t, 120.0});
  // Background patch centered horizontally on the boundary between rows 0 and 1.
  const auto side = static_cast<std::size_t>(std::max(4.0, std::round(50.0 * s)));
  const std::size_t rows = spec.circle_rows.size() + 1;
  const std::size_t boundary = size / rows;
  spec.roi = RoiRect{size / 2 - side / 2, boundary - side / 2, side, side};
  return spec;
}

namespace {

struct Cell {
  double x0, y0, x1, y1;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("make_phantom: " + what);
}

}  // namespace

Phantom make_phantom(const PhantomSpec& spec) {
  require(spec.size > 0, "size must be positive");
  const std::size_t n = spec.size;
  const double size = static_cast<double>(n);
  Phantom out;
  out.image = Image(n, n, spec.background);
  out.roi = spec.roi;

  const std::size_t rows = spec.circle_rows.size() + (spec.crosses.empty() ? 0 : 1);
  const double row_h = rows > 0 ? size / static_cast<double>(rows) : size;

  // Label map: 0 = background, otherwise shape index + 1.
  std::vector<std::size_t> label(n * n, 0);
  auto paint = [&](std::size_t x, std::size_t y, double value) {
    out.image.at(x, y) = value;
    label[y * n + x] = out.shapes.size();
  };

  for (std::size_t r = 0; r < rows; ++r) {
    const bool cross_row = r == spec.circle_rows.size();
    const std::size_t count = cross_row ? spec.crosses.size() : spec.circle_rows[r].diameters.size();
    if (count == 0) continue;
    const double cell_w = size / static_cast<double>(count);
    for (std::size_t c = 0; c < count; ++c) {
      const Cell cell{c * cell_w, r * row_h, (c + 1) * cell_w, (r + 1) * row_h};
      PhantomShape shape;
      shape.center_x = (static_cast<double>(c) + 0.5) * cell_w;
      shape.center_y = (static_cast<double>(r) + 0.5) * row_h;
      if (!cross_row) {
        const double d = spec.circle_rows[r].diameters[c];
        require(d > 0.0, "circle diameter must be positive");
        require(shape.center_x - d / 2 >= cell.x0 && shape.center_x + d / 2 <= cell.x1 &&
                    shape.center_y - d / 2 >= cell.y0 && shape.center_y + d / 2 <= cell.y1,
                "circle of diameter " + std::to_string(d) + " does not fit its cell");
        shape.kind = PhantomShape::Kind::circle;
        shape.diameter = d;
        shape.intensity = spec.background + spec.circle_rows[r].contrast;
        out.shapes.push_back(shape);
        const double r2 = d * d / 4.0;
        const auto ymin = static_cast<std::size_t>(std::max(0.0, std::floor(shape.center_y - d / 2)));
        const auto ymax = std::min(n, static_cast<std::size_t>(std::ceil(shape.center_y + d / 2)) + 1);
        const auto xmin = static_cast<std::size_t>(std::max(0.0, std::floor(shape.center_x - d / 2)));
        const auto xmax = std::min(n, static_cast<std::size_t>(std::ceil(shape.center_x + d / 2)) + 1);
        for (std::size_t y = ymin; y < ymax; ++y) {
          for (std::size_t x = xmin; x < xmax; ++x) {
            const double dx = static_cast<double>(x) + 0.5 - shape.center_x;
            const double dy = static_cast<double>(y) + 0.5 - shape.center_y;
            if (dx * dx + dy * dy <= r2) paint(x, y, shape.intensity);
          }
        }
      } else {
        const CrossSpec& cs = spec.crosses[c];
        require(cs.thickness > 0, "cross thickness must be positive");
        const auto arm = static_cast<std::size_t>(0.6 * std::min(cell_w, row_h));
        require(arm >= cs.thickness, "cross arms shorter than their thickness");
        const auto cxi = static_cast<long>(std::floor(shape.center_x));
        const auto cyi = static_cast<long>(std::floor(shape.center_y));
        const long a0 = -static_cast<long>(arm / 2);
        const long t0 = -static_cast<long>(cs.thickness / 2);
        require(static_cast<double>(cxi + a0) >= cell.x0 &&
                    static_cast<double>(cxi + a0 + static_cast<long>(arm)) <= cell.x1 &&
                    static_cast<double>(cyi + a0) >= cell.y0 &&
                    static_cast<double>(cyi + a0 + static_cast<long>(arm)) <= cell.y1,
                "cross does not fit its cell");
        shape.kind = PhantomShape::Kind::cross;
        shape.thickness = cs.thickness;
        shape.arm_length = arm;
        shape.intensity = spec.background + cs.contrast;
        out.shapes.push_back(shape);
        for (long i = 0; i < static_cast<long>(arm); ++i) {
          for (long j = 0; j < static_cast<long>(cs.thickness); ++j) {
            paint(static_cast<std::size_t>(cxi + a0 + i), static_cast<std::size_t>(cyi + t0 + j),
                  shape.intensity);
            paint(static_cast<std::size_t>(cxi + t0 + j), static_cast<std::size_t>(cyi + a0 + i),
                  shape.intensity);
          }
        }
      }
    }
  }

  if (spec.roi.w > 0 || spec.roi.h > 0) {
    require(spec.roi.inside(n, n), "roi outside the canvas");
    for (std::size_t y = spec.roi.y; y < spec.roi.y + spec.roi.h; ++y)
      for (std::size_t x = spec.roi.x; x < spec.roi.x + spec.roi.w; ++x)
        require(label[y * n + x] == 0, "roi intersects a shape");
  }
  return out;
}

std::string phantom_metadata_json(const Phantom& phantom, const PhantomSpec& spec) {
  nlohmann::ordered_json j;
  j["size"] = spec.size;
  j["background"] = spec.background;
  j["roi"] = {{"x", phantom.roi.x}, {"y", phantom.roi.y}, {"w", phantom.roi.w}, {"h", phantom.roi.h}};
  auto shapes = nlohmann::ordered_json::array();
  for (const auto& s : phantom.shapes) {
    nlohmann::ordered_json e;
    if (s.kind == PhantomShape::Kind::circle) {
      e["type"] = "circle";
      e["center_x"] = s.center_x;
      e["center_y"] = s.center_y;
      e["diameter"] = s.diameter;
    } else {
      e["type"] = "cross";
      e["center_x"] = s.center_x;
      e["center_y"] = s.center_y;
      e["arm_length"] = s.arm_length;
      e["thickness"] = s.thickness;
    }
    e["intensity"] = s.intensity;
    shapes.push_back(std::move(e));
  }
  j["shapes"] = std::move(shapes);
  return j.dump(2) + "\n";
}

RoiRect roi_from_metadata_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto& r = j.at("roi");
  return RoiRect{r.at("x").get<std::size_t>(), r.at("y").get<std::size_t>(),
                 r.at("w").get<std::size_t>(), r.at("h").get<std::size_t>()};
}

}  // namespace pnphqs
