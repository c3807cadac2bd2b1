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

#include <string>
#include <vector>

#include "pnphqs/image.hpp"

namespace pnphqs {

struct CircleRow {
  double contrast = 0.0;
  std::vector<double> diameters;
};

struct CrossSpec {
  std::size_t thickness = 1;
  double contrast = 0.0;
};

/// Synthetic test-object layout. Rows are spaced evenly down the canvas (the
/// circle rows first, then the cross row if it is nonempty); the items of a
/// row are spaced evenly across it, each confined to its own cell.
struct PhantomSpec {
  std::size_t size = 512;
  double background = 50.0;
  std::vector<CircleRow> circle_rows;
  std::vector<CrossSpec> crosses;
  RoiRect roi;

  /// Three circle rows (+10, +30, +60; diameters 64..4 at 512 px) and a row
  /// of crosses with arm thickness 1, 2, 4 at +120, scaled to `size`.
  static PhantomSpec standard(std::size_t size = 512);
};

struct PhantomShape {
  enum class Kind { circle, cross };
  Kind kind = Kind::circle;
  double center_x = 0.0;
  double center_y = 0.0;
  double diameter = 0.0;     // circles
  std::size_t thickness = 0; // crosses
  std::size_t arm_length = 0;
  double intensity = 0.0;
};

struct Phantom {
  Image image;
  RoiRect roi;
  std::vector<PhantomShape> shapes;
};

/// Deterministic rasterization; throws std::invalid_argument if a shape
/// leaves its cell or the ROI touches a shape.
Phantom make_phantom(const PhantomSpec& spec);

/// JSON sidecar with the ROI rectangle and the shape list.
std::string phantom_metadata_json(const Phantom& phantom, const PhantomSpec& spec);

/// Reads the ROI back out of a sidecar written by phantom_metadata_json.
RoiRect roi_from_metadata_json(const std::string& json);

}  // namespace pnphqs
