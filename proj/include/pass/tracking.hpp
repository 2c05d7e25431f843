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

#ifndef PASS__TRACKING_HPP_
#define PASS__TRACKING_HPP_

#include "pass/geometry.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <unordered_set>
#include <utility>
#include <vector>

namespace pass::tracking
{

/// Per-pedestrian state maintained across frames and snapshotted for
/// broadcast every 100 ms.
struct PedestrianTrack
{
  std::uint32_t temp_id{0};  // random identifier, stable for the track lifetime
  geometry::GeoPosition position;
  std::int64_t last_ts{0};  // capture stamp of the frame that produced `position`
  double velocity_mps{0.0};
  double heading_rad{0.0};
  geometry::CardinalHeading cardinal{geometry::CardinalHeading::kNorthSouth};
  int misses{0};                // consecutive unmatched frames
  std::uint8_t msg_count{0};    // wraps at 128, bumps on every emitted snapshot
};

/// A geolocated detection handed to the tracker for one frame.
struct FrameObservation
{
  geometry::GeoPosition position;
  std::int64_t ts{0};
  double confidence{0.0};
};

struct TrackerConfig
{
  double gate_m{1.0};  // max match distance per frame (~10 m/s at 10 Hz)
  int max_misses{5};
  // Optional exponential smoothing of the two-frame velocity quotient;
  // disabled by default to keep the raw per-step measurement.
  bool smoothing_enabled{false};
  double smoothing_alpha{0.5};
  geometry::CardinalHeading default_cardinal{geometry::CardinalHeading::kNorthSouth};
  // Temporary-ID rotation period is intentionally not implemented; IDs stay
  // stable for the track lifetime.
};

struct Association
{
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (track idx, obs idx)
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::size_t> unmatched_obs;
};

/// Greedy nearest-neighbor association, globally smallest Haversine
/// distance first. No pair beyond gate_m is matched; every track and
/// observation appears in at most one match.
Association associate(
  const std::vector<PedestrianTrack> & tracks, const std::vector<FrameObservation> & obs,
  double gate_m);

/// Single-owner frame-to-frame tracker. One step() at a time; the returned
/// snapshots are plain values safe to hand to other threads.
class Tracker
{
public:
  explicit Tracker(TrackerConfig config = {}, std::uint32_t seed = std::random_device{}());

  /// Advances the tracker by one frame and returns snapshots of all live
  /// tracks. Throws NonMonotonicTimestamp when ts does not advance.
  std::vector<PedestrianTrack> step(const std::vector<FrameObservation> & frame, std::int64_t ts);

  const std::vector<PedestrianTrack> & tracks() const { return tracks_; }
  std::int64_t last_step_ts() const { return last_ts_; }

private:
  std::uint32_t fresh_temp_id();

  TrackerConfig config_;
  std::vector<PedestrianTrack> tracks_;
  std::mt19937 rng_;
  std::unordered_set<std::uint32_t> issued_ids_;  // never reissued, even after retirement
  std::int64_t last_ts_{std::numeric_limits<std::int64_t>::min()};
};

}  // namespace pass::tracking

#endif  // PASS__TRACKING_HPP_
