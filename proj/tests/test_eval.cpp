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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pass/errors.hpp"
#include "pass/eval/metrics.hpp"
#include "pass/eval/scenario.hpp"
#include "test_support.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

using namespace pass::eval;
using pass::geometry::GeoPosition;
using pass::test::geo_offset_m;
using pass::test::temp_path;
using pass::test::uniform;

namespace
{

// The crosswalk encounter staged so the first velocity-bearing evaluation
// (one frame in) predicts the collision 7.3 s out, and braking at
// 3.35 m/s^2 from 17.56 m/s stops the vehicle in ~46 m.
ScenarioConfig canonical_scenario()
{
  ScenarioConfig cfg;
  cfg.seed = 42;
  cfg.start_ts_ms = 1543609955000;
  cfg.duration_s = 12.0;
  cfg.frame_period_ms = 100;
  cfg.anchor = {34.6794, -82.8475};
  cfg.ped_present = true;
  cfg.ped_start_local = {-10.558686, 0.0};
  cfg.ped_speed_mps = 1.4;
  cfg.ped_heading_deg = 90.0;
  cfg.veh_start_local = {0.0, -132.436092};
  cfg.veh_speed_mps = 17.56;
  cfg.veh_heading_deg = 0.0;
  cfg.veh_length_m = 5.0;
  cfg.veh_decel_mps2 = 3.35;
  cfg.pixel_noise_sigma = 0.0;
  cfg.alert_cooldown_ms = 1000;
  return cfg;
}

ScenarioConfig head_on_scenario(double vehicle_speed)
{
  ScenarioConfig cfg = canonical_scenario();
  cfg.ped_start_local = {0.0, 0.0};
  cfg.ped_speed_mps = 0.0;
  cfg.veh_start_local = {0.0, -60.0};
  cfg.veh_speed_mps = vehicle_speed;
  return cfg;
}

}  // namespace

TEST_CASE("detection accuracy fixtures")
{
  CHECK(detection_accuracy(98, 2) == doctest::Approx(0.98).epsilon(1e-12));
  CHECK(detection_accuracy(42, 0) == 1.0);
  CHECK(detection_accuracy(0, 5) == 0.0);
  CHECK_THROWS_AS(detection_accuracy(0, 0), pass::EmptySample);
}

TEST_CASE("location RMSE fixtures")
{
  const GeoPosition base{34.6794, -82.8475};
  std::vector<GeoPosition> truth;
  std::mt19937 rng(3);
  for (int i = 0; i < 10; ++i) {
    truth.push_back(geo_offset_m(base, uniform(rng, -40, 40), uniform(rng, -40, 40)));
  }

  CHECK(rmse_location(truth, truth) == 0.0);

  // Every estimate displaced exactly 0.25 m: the all-direction headline.
  std::vector<GeoPosition> offset;
  for (const auto & p : truth) offset.push_back(geo_offset_m(p, 0.25, 0.0));
  CHECK(rmse_location(truth, offset) == doctest::Approx(0.25).epsilon(1e-6));

  // Hand fixture anchored near (0,0) so coordinate quantization is far
  // below the 1e-12 comparison: errors {3 m, 4 m} -> sqrt(12.5).
  const GeoPosition origin{0.0005, 0.0005};
  const std::vector<GeoPosition> t2 = {origin, geo_offset_m(origin, 50.0, 0.0)};
  const std::vector<GeoPosition> e2 = {
    geo_offset_m(t2[0], 3.0, 0.0), geo_offset_m(t2[1], 4.0, 0.0)};
  CHECK(std::abs(rmse_location(t2, e2) - std::sqrt(12.5)) < 1e-12);

  CHECK_THROWS_AS(rmse_location(truth, t2), pass::LengthMismatch);
  CHECK_THROWS_AS(
    rmse_location(std::vector<GeoPosition>{}, std::vector<GeoPosition>{}), pass::EmptySample);
}

TEST_CASE("velocity RMSE fixtures")
{
  const std::vector<double> truth = {1.0, 1.1, 0.9, 1.4};
  CHECK(rmse_velocity(truth, truth) == 0.0);

  // Constant 0.39 m/s error reproduces the headline velocity figure.
  std::vector<double> est;
  for (const double v : truth) est.push_back(v + 0.39);
  CHECK(rmse_velocity(truth, est) == doctest::Approx(0.39).epsilon(1e-12));

  const std::vector<double> t2 = {1.0, 2.0};
  const std::vector<double> e2 = {1.3, 1.6};
  CHECK(std::abs(rmse_velocity(t2, e2) - std::sqrt(0.125)) < 1e-12);

  CHECK_THROWS_AS(rmse_velocity(truth, t2), pass::LengthMismatch);
  CHECK_THROWS_AS(
    rmse_velocity(std::vector<double>{}, std::vector<double>{}), pass::EmptySample);
}

TEST_CASE("RMSE scales linearly with uniform error scaling")
{
  const GeoPosition base{34.6794, -82.8475};
  std::mt19937 rng(17);
  std::vector<GeoPosition> truth;
  std::vector<double> errors;
  for (int i = 0; i < 8; ++i) {
    truth.push_back(geo_offset_m(base, uniform(rng, -30, 30), uniform(rng, -30, 30)));
    errors.push_back(uniform(rng, 0.05, 0.5));
  }
  auto displaced = [&](double scale) {
    std::vector<GeoPosition> est;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      est.push_back(geo_offset_m(truth[i], errors[i] * scale, 0.0));
    }
    return est;
  };
  const double base_rmse = rmse_location(truth, displaced(1.0));
  const double scaled_rmse = rmse_location(truth, displaced(3.0));
  CHECK(scaled_rmse == doctest::Approx(3.0 * base_rmse).epsilon(1e-6));
}

TEST_CASE("ttc oracle fixtures")
{
  using pass::pscw::KinematicState;
  KinematicState ped;
  ped.pos_m = {75.5, 0.0};
  KinematicState veh;
  veh.vel_mps = {10.0, 0.0};

  const auto head_on = ttc_oracle(ped, veh, 2.5);
  REQUIRE(head_on.ttc_s.has_value());
  CHECK(*head_on.ttc_s == doctest::Approx(7.300).epsilon(1e-9));
  const auto analytic = pass::pscw::ttc(ped, veh, 2.5);
  CHECK(std::abs(*head_on.ttc_s - *analytic.ttc_s) <= 0.002);

  KinematicState parallel_a;
  parallel_a.pos_m = {0.0, 10.0};
  parallel_a.vel_mps = {5.0, 0.0};
  KinematicState parallel_b;
  parallel_b.vel_mps = {5.0, 0.0};
  CHECK(!ttc_oracle(parallel_a, parallel_b, 2.5).ttc_s.has_value());

  CHECK_THROWS_AS(ttc_oracle(ped, veh, 0.0), pass::NonPositiveEpsilon);
}

TEST_CASE("ground-truth CSV round-trip and validation")
{
  std::vector<GroundTruthRecord> records;
  const GeoPosition base{34.6794, -82.8475};
  for (int i = 0; i < 5; ++i) {
    GroundTruthRecord r;
    r.ts = 1000 + 100 * i;
    r.actor_id = "ped1";
    r.position = geo_offset_m(base, 0.14 * i, 0.0);
    r.velocity_mps = 1.4;
    r.cardinal = pass::geometry::CardinalHeading::kSouthNorth;
    records.push_back(r);
  }
  const std::string path = temp_path("truth", ".csv");
  write_ground_truth_csv(path, records);
  const auto loaded = load_ground_truth_csv(path);
  REQUIRE(loaded.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(loaded[i].ts == records[i].ts);
    CHECK(loaded[i].actor_id == records[i].actor_id);
    // Writer emits 9 decimals (~0.1 mm of latitude).
    CHECK(std::abs(loaded[i].position.lat - records[i].position.lat) < 1e-8);
    CHECK(std::abs(loaded[i].position.lon - records[i].position.lon) < 1e-8);
    CHECK(loaded[i].velocity_mps == doctest::Approx(records[i].velocity_mps));
    CHECK(loaded[i].cardinal == records[i].cardinal);
  }
  std::remove(path.c_str());

  const std::string bad = temp_path("truth-bad", ".csv");
  {
    std::ofstream out(bad);
    out << "1000,ped1,34.0,-82.0,1.0,SN\n900,ped1,34.0,-82.0,1.0,SN\n";
  }
  CHECK_THROWS_AS(load_ground_truth_csv(bad), pass::ParseError);
  std::remove(bad.c_str());

  const std::string garbled = temp_path("truth-garbled", ".csv");
  {
    std::ofstream out(garbled);
    out << "1000,ped1,34.0,-82.0,fast,SN\n";
  }
  CHECK_THROWS_AS(load_ground_truth_csv(garbled), pass::ParseError);
  std::remove(garbled.c_str());
}

TEST_CASE("canonical scenario: first alert at 7.3 s, vehicle halts short")
{
  const ScenarioReport report = run_scenario(canonical_scenario());
  REQUIRE(report.alert_fired);
  // First velocity-bearing frame is one period after start.
  CHECK(report.first_alert_ts_ms == 1543609955100);
  CHECK(std::abs(report.first_alert_ttc_s - 7.3) <= 0.005);
  CHECK(report.vehicle_speed_at_alert_mps == doctest::Approx(17.56).epsilon(1e-9));
  CHECK(std::abs(report.stop_distance_m - 46.0) <= 0.1);
  CHECK(report.halts_short);
  CHECK(report.stop_margin_m > 0.0);
  CHECK(report.vehicle_temp_id == 9001);
}

TEST_CASE("scenario determinism: same config and seed, identical bytes")
{
  const ScenarioReport a = run_scenario(canonical_scenario());
  const ScenarioReport b = run_scenario(canonical_scenario());
  CHECK(a.report_csv == b.report_csv);
  CHECK(a.trajectories_csv == b.trajectories_csv);

  ScenarioConfig reseeded = canonical_scenario();
  reseeded.seed = 43;
  const ScenarioReport c = run_scenario(reseeded);
  // A different seed draws a different pedestrian temp_id.
  CHECK(c.pedestrian_temp_id != a.pedestrian_temp_id);
}

TEST_CASE("pedestrian absent: zero alerts, vehicle passes at constant speed")
{
  ScenarioConfig cfg = canonical_scenario();
  cfg.ped_present = false;
  const ScenarioReport report = run_scenario(cfg);
  CHECK(!report.alert_fired);
  CHECK(report.alerts_admitted == 0);
  // Trajectory CSV still carries the vehicle at its cruise speed.
  CHECK(report.trajectories_csv.find("pedestrian") == std::string::npos);
  CHECK(report.trajectories_csv.find("17.5600") != std::string::npos);
}

TEST_CASE("halving the vehicle speed doubles the first-alert TTC")
{
  const ScenarioReport fast = run_scenario(head_on_scenario(17.56));
  const ScenarioReport slow = run_scenario(head_on_scenario(8.78));
  REQUIRE(fast.alert_fired);
  REQUIRE(slow.alert_fired);
  CHECK(std::abs(slow.first_alert_ttc_s / fast.first_alert_ttc_s - 2.0) <= 0.002);
}

TEST_CASE("scenario config file round-trip and validation")
{
  const std::string path = temp_path("scenario", ".cfg");
  {
    std::ofstream out(path);
    out << "pass-scenario v1\n"
        << "seed 42\n"
        << "start_ts 1543609955000\n"
        << "duration_s 12\n"
        << "frame_period_ms 100\n"
        << "anchor 34.6794 -82.8475\n"
        << "pedestrian present\n"
        << "ped_start_local -10.558686 0.0\n"
        << "ped_speed_mps 1.4\n"
        << "ped_heading_deg 90\n"
        << "vehicle_start_local 0.0 -132.436092\n"
        << "vehicle_speed_mps 17.56\n"
        << "vehicle_heading_deg 0\n"
        << "vehicle_length_m 5.0\n"
        << "vehicle_decel_mps2 3.35\n"
        << "pixel_noise_sigma 0\n"
        << "alert_cooldown_ms 1000\n";
  }
  const ScenarioConfig cfg = load_scenario_config(path);
  CHECK(cfg.seed == 42);
  CHECK(cfg.ped_start_local.x() == doctest::Approx(-10.558686));
  CHECK(cfg.veh_speed_mps == doctest::Approx(17.56));
  const ScenarioReport report = run_scenario(cfg);
  CHECK(std::abs(report.first_alert_ttc_s - 7.3) <= 0.005);
  std::remove(path.c_str());

  const std::string bad = temp_path("scenario-bad", ".cfg");
  {
    std::ofstream out(bad);
    out << "pass-scenario v1\nvehicle_speed_mps lots\n";
  }
  try {
    load_scenario_config(bad);
    FAIL("expected ConfigError");
  } catch (const pass::ConfigError & e) {
    CHECK(std::string(e.what()).find("vehicle_speed_mps") != std::string::npos);
  }
  std::remove(bad.c_str());
}

TEST_CASE("scenario report files land on disk")
{
  const std::string dir = temp_path("scenario-out", "");
  const ScenarioReport report = run_scenario(canonical_scenario());
  write_scenario_report(report, dir);
  std::ifstream report_in(dir + "/report.csv");
  REQUIRE(report_in.good());
  std::string first_line;
  std::getline(report_in, first_line);
  CHECK(first_line == "key,value");
  std::ifstream traj_in(dir + "/trajectories.csv");
  REQUIRE(traj_in.good());
  std::filesystem::remove_all(dir);
}
