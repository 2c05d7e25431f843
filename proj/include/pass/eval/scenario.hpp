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

#ifndef PASS__EVAL__SCENARIO_HPP_
#define PASS__EVAL__SCENARIO_HPP_

#include "pass/geometry.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace pass::eval
{

/// Desk-scale crosswalk encounter: one pedestrian crossing, one connected
/// vehicle approaching, both on straight constant-speed trajectories until
/// the first warning, after which the vehicle brakes at constant
/// deceleration. Positions are meters east/north of the anchor.
struct ScenarioConfig
{
  std::uint32_t seed{1};
  std::int64_t start_ts_ms{1543609955000};
  double duration_s{12.0};
  std::int64_t frame_period_ms{100};
  geometry::GeoPosition anchor{34.6794, -82.8475};

  bool ped_present{true};
  Eigen::Vector2d ped_start_local{0.0, 0.0};
  double ped_speed_mps{1.4};
  double ped_heading_deg{90.0};  // clockwise from north

  Eigen::Vector2d veh_start_local{0.0, -100.0};
  double veh_speed_mps{17.56};
  double veh_heading_deg{0.0};
  double veh_length_m{5.0};
  double veh_decel_mps2{3.35};

  double pixel_noise_sigma{0.0};  // relative-pixel jitter on synthetic anchors
  std::int64_t alert_cooldown_ms{1000};
};

/// Parses a `pass-scenario v1` file. Throws ConfigError naming the field.
ScenarioConfig load_scenario_config(const std::string & path);

struct ScenarioReport
{
  bool alert_fired{false};
  std::int64_t first_alert_ts_ms{0};
  double first_alert_ttc_s{0.0};
  std::uint32_t pedestrian_temp_id{0};
  std::uint32_t vehicle_temp_id{0};
  geometry::GeoPosition encounter;        // predicted collision point
  double vehicle_speed_at_alert_mps{0.0};
  double stop_distance_m{0.0};            // braking distance from the alert point
  geometry::GeoPosition stop_position;
  double stop_margin_m{0.0};              // along-track gap left before the encounter
  bool halts_short{false};
  std::uint64_t alerts_admitted{0};
  std::uint64_t alerts_suppressed{0};

  std::string report_csv;        // key,value rows
  std::string trajectories_csv;  // per-frame actor positions
};

/// Synthesizes ground truth and detector output (exact inverse of the
/// calibration), drives the full frame pipeline plus the crosswalk-warning
/// evaluation on a virtual clock, and reports the braking outcome.
/// Deterministic: one config and seed always produce identical bytes.
ScenarioReport run_scenario(const ScenarioConfig & config);

/// Writes report.csv and trajectories.csv into dir.
void write_scenario_report(const ScenarioReport & report, const std::string & dir);

}  // namespace pass::eval

#endif  // PASS__EVAL__SCENARIO_HPP_
