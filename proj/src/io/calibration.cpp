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

#include "pass/io/calibration.hpp"

#include "pass/errors.hpp"
#include "text_util.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace pass::io
{

using detail::to_double;
using detail::to_int;
using detail::tokenize;

namespace
{

void require_tokens(
  const std::vector<std::string> & tokens, std::size_t count, const std::string & field)
{
  if (tokens.size() != count) {
    throw ConfigError(
      "field '" + field + "': expected " + std::to_string(count - 1) + " values, got " +
      std::to_string(tokens.size() - 1));
  }
}

}  // namespace

Calibration load_calibration(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open calibration file: " + path);
  }

  std::string header;
  std::getline(in, header);
  if (tokenize(header) != std::vector<std::string>{"pass-calibration", "v1"}) {
    throw ConfigError("field 'header': expected 'pass-calibration v1' in " + path);
  }

  Calibration cal;
  std::size_t correspondences = 0;
  bool have_bounds = false;
  bool have_anchor = false;
  bool have_mask = false;

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string & key = tokens[0];

    if (key == "image_size") {
      require_tokens(tokens, 3, key);
      cal.image_width = static_cast<int>(to_int(tokens[1], "image_size.width"));
      cal.image_height = static_cast<int>(to_int(tokens[2], "image_size.height"));
      if (cal.image_width <= 0 || cal.image_height <= 0) {
        throw ConfigError("field 'image_size': dimensions must be positive");
      }
    } else if (key == "correspondence") {
      require_tokens(tokens, 5, key);
      if (correspondences >= 4) {
        throw ConfigError("field 'correspondence': more than 4 correspondences");
      }
      cal.pixel_points[correspondences] = {
        to_double(tokens[1], "correspondence.px"), to_double(tokens[2], "correspondence.py")};
      cal.geo_points[correspondences] = {
        to_double(tokens[3], "correspondence.lat"), to_double(tokens[4], "correspondence.lon")};
      ++correspondences;
    } else if (key == "bounds") {
      require_tokens(tokens, 9, key);
      cal.bounds.w1 = {to_double(tokens[1], "bounds.w1.lat"), to_double(tokens[2], "bounds.w1.lon")};
      cal.bounds.w2 = {to_double(tokens[3], "bounds.w2.lat"), to_double(tokens[4], "bounds.w2.lon")};
      cal.bounds.w3 = {to_double(tokens[5], "bounds.w3.lat"), to_double(tokens[6], "bounds.w3.lon")};
      cal.bounds.w4 = {to_double(tokens[7], "bounds.w4.lat"), to_double(tokens[8], "bounds.w4.lon")};
      have_bounds = true;
    } else if (key == "mask") {
      require_tokens(tokens, 2, key);
      cal.mask_path = tokens[1];
      have_mask = true;
    } else if (key == "elevation_m") {
      require_tokens(tokens, 2, key);
      cal.elevation_m = to_double(tokens[1], key);
    } else if (key == "positional_accuracy_m") {
      require_tokens(tokens, 2, key);
      cal.pos_accuracy_m = to_double(tokens[1], key);
    } else if (key == "anchor") {
      require_tokens(tokens, 3, key);
      cal.anchor = {to_double(tokens[1], "anchor.lat"), to_double(tokens[2], "anchor.lon")};
      have_anchor = true;
    } else {
      throw ConfigError("field '" + key + "': unknown calibration key");
    }
  }

  if (cal.image_width == 0) throw ConfigError("field 'image_size': missing");
  if (correspondences != 4) {
    throw ConfigError(
      "field 'correspondence': need exactly 4, got " + std::to_string(correspondences));
  }
  if (!have_bounds) throw ConfigError("field 'bounds': missing");
  if (!have_mask) throw ConfigError("field 'mask': missing");
  if (!have_anchor) throw ConfigError("field 'anchor': missing");

  // Axis-aligned patch sanity: nonzero spans, pairwise distinct corners.
  const double lat_span = cal.bounds.w4.lat - cal.bounds.w1.lat;
  const double lon_span = cal.bounds.w2.lon - cal.bounds.w1.lon;
  if (lat_span == 0.0 || lon_span == 0.0) {
    throw ConfigError("field 'bounds': latitude and longitude spans must be nonzero");
  }
  const geometry::GeoPosition corners[4] = {
    cal.bounds.w1, cal.bounds.w2, cal.bounds.w3, cal.bounds.w4};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (corners[i].lat == corners[j].lat && corners[i].lon == corners[j].lon) {
        throw ConfigError("field 'bounds': corners must be pairwise distinct");
      }
    }
  }

  // Resolve the mask relative to the calibration file and load it now so a
  // bad path fails at configuration time, naming the path.
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  const std::filesystem::path mask_file = base / cal.mask_path;
  cal.mask_path = mask_file.string();
  try {
    cal.mask = perception::load_road_mask_pgm(cal.mask_path);
  } catch (const ParseError & e) {
    throw ConfigError("field 'mask': " + std::string(e.what()));
  }

  // Degenerate correspondences surface here rather than mid-pipeline.
  try {
    calibration_homography(cal);
  } catch (const DegenerateCorrespondence & e) {
    throw ConfigError("field 'correspondence': " + std::string(e.what()));
  }

  return cal;
}

geometry::Homography calibration_homography(const Calibration & calibration)
{
  std::array<geometry::PixelPoint, 4> top_view;
  for (std::size_t i = 0; i < 4; ++i) {
    top_view[i] = geometry::geo_to_pixel(calibration.bounds, calibration.geo_points[i]);
  }
  return geometry::homography_from_correspondences(calibration.pixel_points, top_view);
}

}  // namespace pass::io
