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

#include "pass/pipeline.hpp"

#include "pass/errors.hpp"

#include <algorithm>
#include <utility>

namespace pass::pipeline
{

namespace
{

constexpr double kPatchSlack = 1e-6;  // tolerate round-off on the patch border

}  // namespace

FramePipeline::FramePipeline(
  geometry::Homography homography, geometry::GeoBounds bounds, perception::RoadMask mask,
  PipelineConfig config)
: homography_(std::move(homography)),
  bounds_(bounds),
  mask_(std::move(mask)),
  config_(config),
  tracker_(config.tracker, config.seed)
{
}

FrameResult FramePipeline::process(
  const std::vector<perception::Detection> & detections, std::int64_t frame_ts,
  std::int64_t now_ms)
{
  FrameResult result;
  result.frame_ts = frame_ts;
  result.detections_in = detections.size();

  std::vector<perception::Detection> pedestrians;
  pedestrians.reserve(detections.size());
  for (const auto & d : detections) {
    if (d.class_flag != 1) continue;
    if (d.confidence < config_.confidence_threshold) continue;
    if (d.box_h * d.box_w == 0.0) continue;
    pedestrians.push_back(d);
  }

  const std::vector<perception::Detection> suppressed =
    perception::nms(std::move(pedestrians), config_.iou_threshold);
  const std::vector<perception::Detection> on_road = perception::mask_filter(suppressed, mask_);
  result.detections_after_filtering = on_road.size();

  std::vector<tracking::FrameObservation> observations;
  observations.reserve(on_road.size());
  for (const auto & d : on_road) {
    geometry::PixelPoint top_view;
    try {
      top_view = geometry::apply_homography(homography_, d.anchor);
    } catch (const PointAtInfinity &) {
      ++result.dropped_off_patch;
      continue;
    }
    if (
      top_view.px < -kPatchSlack || top_view.px > 1.0 + kPatchSlack ||
      top_view.py < -kPatchSlack || top_view.py > 1.0 + kPatchSlack) {
      ++result.dropped_off_patch;
      continue;
    }
    top_view.px = std::clamp(top_view.px, 0.0, 1.0);
    top_view.py = std::clamp(top_view.py, 0.0, 1.0);
    observations.push_back(tracking::FrameObservation{
      geometry::pixel_to_geo(bounds_, top_view), frame_ts, d.confidence});
  }

  result.tracks = tracker_.step(observations, frame_ts);
  result.psms.reserve(result.tracks.size());
  for (const auto & track : result.tracks) {
    result.psms.push_back(messages::build_psm(track, now_ms, config_.psm));
  }
  return result;
}

}  // namespace pass::pipeline
