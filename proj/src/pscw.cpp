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

#include "pass/pscw.hpp"

#include "pass/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pass::pscw
{

namespace
{

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kProjectionRangeM = 2000.0;
constexpr double kDegenerateRelSpeedSq = 1e-9;

std::int32_t to_e7(double deg)
{
  const double clamped = std::clamp(deg, -180.0, 180.0);
  return static_cast<std::int32_t>(std::llround(clamped / messages::kLatLonUnitDeg));
}

}  // namespace

KinematicState to_local(
  geometry::GeoPosition ref, geometry::GeoPosition p, double speed_mps,
  double heading_deg_from_north)
{
  const double east = geometry::kEarthRadiusM * std::cos(ref.lat * kDegToRad) *
                      ((p.lon - ref.lon) * kDegToRad);
  const double north = geometry::kEarthRadiusM * ((p.lat - ref.lat) * kDegToRad);
  if (east * east + north * north > kProjectionRangeM * kProjectionRangeM) {
    throw OutOfProjectionRange("position beyond 2 km of the intersection anchor");
  }
  const double theta = heading_deg_from_north * kDegToRad;
  KinematicState state;
  state.pos_m = {east, north};
  state.vel_mps = {speed_mps * std::sin(theta), speed_mps * std::cos(theta)};
  return state;
}

geometry::GeoPosition local_to_geo(geometry::GeoPosition ref, const Eigen::Vector2d & pos_m)
{
  const double dlat = (pos_m.y() / geometry::kEarthRadiusM) * kRadToDeg;
  const double dlon =
    (pos_m.x() / (geometry::kEarthRadiusM * std::cos(ref.lat * kDegToRad))) * kRadToDeg;
  return geometry::GeoPosition{ref.lat + dlat, ref.lon + dlon};
}

TtcResult ttc(const KinematicState & ped, const KinematicState & veh, double epsilon_m)
{
  if (!(epsilon_m > 0.0)) {
    throw NonPositiveEpsilon("encounter radius must be positive");
  }

  const Eigen::Vector2d dp = ped.pos_m - veh.pos_m;
  const Eigen::Vector2d dv = ped.vel_mps - veh.vel_mps;
  const double dist0 = dp.norm();

  if (dist0 <= epsilon_m) {
    return TtcResult{0.0, dist0};
  }

  const double a = dv.squaredNorm();
  // Closest approach over t >= 0, informational.
  double closest = dist0;
  if (a >= kDegenerateRelSpeedSq) {
    const double t_star = -dp.dot(dv) / a;
    if (t_star > 0.0) {
      closest = (dp + dv * t_star).norm();
    }
  }
  if (a < kDegenerateRelSpeedSq) {
    return TtcResult{std::nullopt, closest};
  }

  const double b = 2.0 * dp.dot(dv);
  const double c = dp.squaredNorm() - epsilon_m * epsilon_m;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    return TtcResult{std::nullopt, closest};
  }
  const double sq = std::sqrt(disc);
  const double t1 = (-b - sq) / (2.0 * a);
  const double t2 = (-b + sq) / (2.0 * a);

  std::optional<double> earliest;
  for (const double t : {t1, t2}) {
    if (t >= 0.0 && t <= kMaxTtcS && (!earliest || t < *earliest)) {
      earliest = t;
    }
  }
  return TtcResult{earliest, closest};
}

std::vector<messages::Alert> evaluate(
  std::span<const messages::Psm> psms, std::span<const messages::Bsm> bsms,
  geometry::GeoPosition ref, std::int64_t now_ms, EvaluateStats * stats)
{
  std::vector<messages::Alert> alerts;
  EvaluateStats local;

  for (const messages::Psm & psm : psms) {
    for (const messages::Bsm & bsm : bsms) {
      ++local.pairs_evaluated;
      try {
        const KinematicState ped = to_local(
          ref, {psm.lat_deg(), psm.lon_deg()}, psm.speed_mps(), psm.heading_deg());
        const KinematicState veh = to_local(
          ref, {bsm.lat_deg(), bsm.lon_deg()}, bsm.speed_mps(), bsm.heading_deg());
        const double epsilon_m = bsm.length_m() / 2.0;

        const TtcResult result = ttc(ped, veh, epsilon_m);
        if (!result.ttc_s) continue;

        const Eigen::Vector2d encounter = ped.pos_m + ped.vel_mps * (*result.ttc_s);
        const geometry::GeoPosition encounter_geo = local_to_geo(ref, encounter);

        messages::Alert alert;
        alert.timestamp_ms = now_ms;
        alert.pedestrian_temp_id = psm.temp_id;
        alert.vehicle_temp_id = bsm.temp_id;
        alert.ttc_ms = static_cast<std::uint16_t>(std::llround(1000.0 * (*result.ttc_s)));
        alert.collision_lat_e7 = to_e7(encounter_geo.lat);
        alert.collision_lon_e7 = to_e7(encounter_geo.lon);
        alerts.push_back(alert);
      } catch (const Error &) {
        ++local.pairs_failed;
      }
    }
  }

  std::sort(alerts.begin(), alerts.end(), [](const auto & a, const auto & b) {
    if (a.ttc_ms != b.ttc_ms) return a.ttc_ms < b.ttc_ms;
    if (a.pedestrian_temp_id != b.pedestrian_temp_id) {
      return a.pedestrian_temp_id < b.pedestrian_temp_id;
    }
    return a.vehicle_temp_id < b.vehicle_temp_id;
  });

  if (stats != nullptr) *stats = local;
  return alerts;
}

double stopping_distance(double v0_mps, double decel_mps2)
{
  if (!(decel_mps2 > 0.0)) {
    throw NonPositiveDeceleration("deceleration must be positive");
  }
  return v0_mps * v0_mps / (2.0 * decel_mps2);
}

bool AlertGate::admit(std::uint32_t pedestrian_id, std::uint32_t vehicle_id, std::int64_t now_ms)
{
  const auto key = std::make_pair(pedestrian_id, vehicle_id);
  const auto it = last_admitted_.find(key);
  if (it != last_admitted_.end() && now_ms - it->second < cooldown_ms_) {
    ++suppressed_;
    return false;
  }
  last_admitted_[key] = now_ms;
  return true;
}

}  // namespace pass::pscw
