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

#ifndef PASS__PSCW_HPP_
#define PASS__PSCW_HPP_

#include "pass/geometry.hpp"
#include "pass/messages.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace pass::pscw
{

/// The AASHTO stopping-sight-distance bound: alerts are only meaningful
/// within 8 s of a predicted encounter.
inline constexpr double kMaxTtcS = 8.0;

/// Planar state on the local east-north plane anchored at the intersection
/// reference point. x = east meters, y = north meters.
struct KinematicState
{
  Eigen::Vector2d pos_m{0.0, 0.0};
  Eigen::Vector2d vel_mps{0.0, 0.0};
};

/// Outcome of one time-to-collision solve. ttc_s is present only when the
/// pair comes within the encounter radius inside [0, 8] s.
struct TtcResult
{
  std::optional<double> ttc_s;
  double closest_approach_m{0.0};
};

/// Equirectangular projection of a geodetic fix onto the local plane, with
/// the velocity vector decomposed from speed and wire heading (degrees
/// clockwise from north). Throws OutOfProjectionRange beyond 2 km.
KinematicState to_local(
  geometry::GeoPosition ref, geometry::GeoPosition p, double speed_mps,
  double heading_deg_from_north);

/// Inverse of the projection above.
geometry::GeoPosition local_to_geo(geometry::GeoPosition ref, const Eigen::Vector2d & pos_m);

/// Solves |dp + dv t| = epsilon for the earliest t in [0, 8]. States
/// already within epsilon yield t = 0; relative speeds below ~3e-5 m/s
/// never close. Throws NonPositiveEpsilon.
TtcResult ttc(const KinematicState & ped, const KinematicState & veh, double epsilon_m);

struct EvaluateStats
{
  std::size_t pairs_evaluated{0};
  std::size_t pairs_failed{0};
};

/// Runs the crosswalk-warning check over every (PSM, BSM) pair. The
/// encounter radius is half the decoded vehicle length. Emits at most one
/// alert per pair, sorted ascending by time to collision; per-pair errors
/// are counted without aborting the rest.
std::vector<messages::Alert> evaluate(
  std::span<const messages::Psm> psms, std::span<const messages::Bsm> bsms,
  geometry::GeoPosition ref, std::int64_t now_ms, EvaluateStats * stats = nullptr);

/// Distance covered from speed v0 under constant deceleration: v0^2 / (2a).
/// Throws NonPositiveDeceleration when decel_mps2 <= 0.
double stopping_distance(double v0_mps, double decel_mps2);

/// Per-pair alert cooldown so a hazard broadcasting at 10 Hz does not flood
/// subscribers. Single-owner state, mutated only by the evaluation loop.
class AlertGate
{
public:
  explicit AlertGate(std::int64_t cooldown_ms = 1000) : cooldown_ms_(cooldown_ms) {}

  /// True when the pair may alert now; otherwise counts the suppression.
  bool admit(std::uint32_t pedestrian_id, std::uint32_t vehicle_id, std::int64_t now_ms);

  std::int64_t suppressed_count() const { return suppressed_; }

private:
  std::int64_t cooldown_ms_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> last_admitted_;
  std::int64_t suppressed_{0};
};

}  // namespace pass::pscw

#endif  // PASS__PSCW_HPP_
