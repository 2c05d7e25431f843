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

#ifndef PASS__PERCEPTION_HPP_
#define PASS__PERCEPTION_HPP_

#include "pass/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pass::perception
{

/// One detector bounding box. The anchor is the bottom-center of the box
/// (the ground-contact point); with image y growing downward the box spans
/// [px - box_w/2, px + box_w/2] x [py - box_h, py] in relative coordinates.
struct Detection
{
  int class_flag{0};  // 1 = pedestrian; anything else is ignored downstream
  double confidence{0.0};
  geometry::PixelPoint anchor;
  double box_h{0.0};
  double box_w{0.0};
  std::int64_t frame_ts{0};  // camera capture stamp, epoch ms
};

/// Binary road/crosswalk raster: 1 = drivable/walkable safety-critical
/// region, 0 = off-road. Immutable after load.
struct RoadMask
{
  int width{0};
  int height{0};
  std::vector<std::uint8_t> bits;  // row-major, width*height entries of 0/1

  bool at(int row, int col) const
  {
    return bits[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(col)] != 0;
  }
};

/// Intersection-over-union of the two anchored boxes, in [0,1].
/// Throws ZeroAreaBox when either box has box_h*box_w == 0.
double iou(const Detection & a, const Detection & b);

/// Greedy non-max suppression: keep the highest-confidence box, drop every
/// remaining box overlapping it above iou_threshold, repeat. Confidence
/// ties break by smaller anchor.px, then anchor.py. Output stays sorted by
/// descending confidence.
std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold = 0.5);

/// Keeps detections whose anchor lands on a 1-bit of the mask. Anchors map
/// to the nearest pixel on the (dim-1) scale, so (1.0, 1.0) addresses the
/// last pixel without overflow.
std::vector<Detection> mask_filter(const std::vector<Detection> & dets, const RoadMask & mask);

/// Reads a binary PGM (P5, maxval <= 255); sample values >= 128 become
/// road bits. Throws ParseError on malformed input.
RoadMask load_road_mask_pgm(const std::string & path);

}  // namespace pass::perception

#endif  // PASS__PERCEPTION_HPP_
