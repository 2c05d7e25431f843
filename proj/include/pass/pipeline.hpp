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

#ifndef PASS__PIPELINE_HPP_
#define PASS__PIPELINE_HPP_

#include "pass/geometry.hpp"
#include "pass/messages.hpp"
#include "pass/perception.hpp"
#include "pass/tracking.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace pass::pipeline
{

struct PipelineConfig
{
  double confidence_threshold{0.25};  // detector score cutoff applied before NMS
  double iou_threshold{0.5};
  tracking::TrackerConfig tracker;
  messages::PsmConfig psm;
  std::uint32_t seed{std::random_device{}()};
};

struct FrameResult
{
  std::int64_t frame_ts{0};
  std::vector<tracking::PedestrianTrack> tracks;
  std::vector<messages::Psm> psms;
  std::size_t detections_in{0};
  std::size_t detections_after_filtering{0};
  std::size_t dropped_off_patch{0};  // left the calibrated ground patch
};

/// The per-frame composition: suppress duplicate boxes, keep on-road
/// detections, project anchors to geodetic fixes, update tracks, and
/// quantize broadcast-ready PSMs.
class FramePipeline
{
public:
  FramePipeline(
    geometry::Homography homography, geometry::GeoBounds bounds, perception::RoadMask mask,
    PipelineConfig config = {});

  /// frame_ts is the camera capture stamp and must strictly increase;
  /// now_ms stamps the produced PSMs.
  FrameResult process(
    const std::vector<perception::Detection> & detections, std::int64_t frame_ts,
    std::int64_t now_ms);

  const tracking::Tracker & tracker() const { return tracker_; }
  const PipelineConfig & config() const { return config_; }

private:
  geometry::Homography homography_;
  geometry::GeoBounds bounds_;
  perception::RoadMask mask_;
  PipelineConfig config_;
  tracking::Tracker tracker_;
};

}  // namespace pass::pipeline

#endif  // PASS__PIPELINE_HPP_
