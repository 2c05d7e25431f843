// Copyright 2026 PASS Contributors
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

#ifndef PASS__IO__CALIBRATION_HPP_
#define PASS__IO__CALIBRATION_HPP_

#include "pass/geometry.hpp"
#include "pass/perception.hpp"

#include <array>
#include <string>

namespace pass::io
{

/// Intersection calibration: how camera pixels relate to the world.
/// File schema in docs/file_formats.md (`pass-calibration v1`).
struct Calibration
{
  int image_width{0};
  int image_height{0};
  std::array<geometry::PixelPoint, 4> pixel_points;  // camera-relative corners
  std::array<geometry::GeoPosition, 4> geo_points;   // their world positions
  geometry::GeoBounds bounds;
  std::string mask_path;  // resolved against the calibration file directory
  perception::RoadMask mask;
  double elevation_m{201.0};
  double pos_accuracy_m{0.54};
  geometry::GeoPosition anchor;
};

/// Parses and validates a calibration file, loading the road mask along
/// the way. Throws ConfigError naming the offending field.
Calibration load_calibration(const std::string & path);

/// Camera-pixel -> top-view homography implied by the calibration: each
/// geo correspondence is pulled back to a top-view pixel through the
/// bounds mapping, then solved against the camera points.
geometry::Homography calibration_homography(const Calibration & calibration);

}  // namespace pass::io

#endif  // PASS__IO__CALIBRATION_HPP_
