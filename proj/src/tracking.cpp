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

#include "pass/tracking.hpp"

#include "pass/errors.hpp"

#include <algorithm>
#include <tuple>

namespace pass::tracking
{

Association associate(
  const std::vector<PedestrianTrack> & tracks, const std::vector<FrameObservation> & obs,
  double gate_m)
{
  struct Candidate
  {
    double distance_m;
    std::size_t track;
    std::size_t ob;
  };
  std::vector<Candidate> candidates;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    for (std::size_t o = 0; o < obs.size(); ++o) {
      const double d = geometry::haversine_distance(tracks[t].position, obs[o].position);
      if (d <= gate_m) candidates.push_back({d, t, o});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate & a, const Candidate & b) {
    return std::tie(a.distance_m, a.track, a.ob) < std::tie(b.distance_m, b.track, b.ob);
  });

  Association result;
  std::vector<bool> track_used(tracks.size(), false);
  std::vector<bool> ob_used(obs.size(), false);
  for (const auto & c : candidates) {
    if (track_used[c.track] || ob_used[c.ob]) continue;
    track_used[c.track] = true;
    ob_used[c.ob] = true;
    result.matches.emplace_back(c.track, c.ob);
  }
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (!track_used[t]) result.unmatched_tracks.push_back(t);
  }
  for (std::size_t o = 0; o < obs.size(); ++o) {
    if (!ob_used[o]) result.unmatched_obs.push_back(o);
  }
  return result;
}

Tracker::Tracker(TrackerConfig config, std::uint32_t seed) : config_(config), rng_(seed) {}

std::uint32_t Tracker::fresh_temp_id()
{
  std::uniform_int_distribution<std::uint32_t> dist;
  std::uint32_t id = dist(rng_);
  while (issued_ids_.count(id) != 0) {
    id = dist(rng_);
  }
  issued_ids_.insert(id);
  return id;
}

std::vector<PedestrianTrack> Tracker::step(
  const std::vector<FrameObservation> & frame, std::int64_t ts)
{
  if (ts <= last_ts_) {
    throw NonMonotonicTimestamp("tracker timestamps must strictly increase");
  }

  const Association assoc = associate(tracks_, frame, config_.gate_m);

  for (const auto & [t, o] : assoc.matches) {
    PedestrianTrack & track = tracks_[t];
    const FrameObservation & ob = frame[o];
    const geometry::Kinematics k =
      geometry::kinematics_between(track.position, ob.position, track.last_ts, ob.ts);
    if (config_.smoothing_enabled) {
      track.velocity_mps = config_.smoothing_alpha * k.velocity_mps +
                           (1.0 - config_.smoothing_alpha) * track.velocity_mps;
    } else {
      track.velocity_mps = k.velocity_mps;
    }
    track.heading_rad = k.heading_rad;
    track.cardinal = geometry::classify_heading(track.position, ob.position, track.cardinal);
    track.position = ob.position;
    track.last_ts = ob.ts;
    track.misses = 0;
  }

  for (const std::size_t t : assoc.unmatched_tracks) {
    ++tracks_[t].misses;
  }
  std::erase_if(tracks_, [this](const PedestrianTrack & t) {
    return t.misses > config_.max_misses;
  });

  for (const std::size_t o : assoc.unmatched_obs) {
    PedestrianTrack track;
    track.temp_id = fresh_temp_id();
    track.position = frame[o].position;
    track.last_ts = frame[o].ts;
    track.velocity_mps = 0.0;
    track.heading_rad = 0.0;
    track.cardinal = config_.default_cardinal;
    track.misses = 0;
    track.msg_count = 0;
    tracks_.push_back(track);
  }

  for (PedestrianTrack & track : tracks_) {
    track.msg_count = static_cast<std::uint8_t>((track.msg_count + 1) & 0x7F);
  }

  last_ts_ = ts;
  return tracks_;
}

}  // namespace pass::tracking
