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

#ifndef PASS__EVAL__METRICS_HPP_
#define PASS__EVAL__METRICS_HPP_

#include "pass/geometry.hpp"
#include "pass/pscw.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pass::eval
{

/// One ground-truth row: where an actor really was at ts.
struct GroundTruthRecord
{
  std::int64_t ts{0};
  std::string actor_id;
  geometry::GeoPosition position;
  double velocity_mps{0.0};
  geometry::CardinalHeading cardinal{geometry::CardinalHeading::kNorthSouth};
};

/// Detection precision TP / (TP + FP). Throws EmptySample when both are 0.
double detection_accuracy(std::uint64_t tp, std::uint64_t fp);

/// Positional RMSE in meters; the per-sample residual is the Haversine
/// ground distance between truth and estimate. Index-aligned inputs.
/// Throws LengthMismatch / EmptySample.
double rmse_location(
  std::span<const geometry::GeoPosition> truth, std::span<const geometry::GeoPosition> est);

/// Velocity RMSE in m/s over index-aligned samples.
double rmse_velocity(std::span<const double> truth, std::span<const double> est);

/// Independent verifier for the analytic TTC solver: samples the relative
/// distance at 1 ms steps over [0, 8] s and reports the first time it
/// drops to the encounter radius. Shares nothing with pscw::ttc beyond the
/// state types.
pscw::TtcResult ttc_oracle(
  const pscw::KinematicState & ped, const pscw::KinematicState & veh, double epsilon_m);

/// Ground-truth CSV: `ts,actor_id,lat,lon,velocity_mps,cardinal` with an
/// optional header row. Validates strictly increasing ts per actor.
std::vector<GroundTruthRecord> load_ground_truth_csv(const std::string & path);
void write_ground_truth_csv(
  const std::string & path, std::span<const GroundTruthRecord> records);

}  // namespace pass::eval

#endif  // PASS__EVAL__METRICS_HPP_
