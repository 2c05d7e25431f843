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

#include "pass/eval/scenario.hpp"

#include "pass/errors.hpp"
#include "pass/pipeline.hpp"
#include "pass/pscw.hpp"
#include "../io/text_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

namespace pass::eval
{

using io::detail::to_double;
using io::detail::to_int;
using io::detail::tokenize;

namespace
{

Eigen::Vector2d heading_dir(double heading_deg_from_north)
{
  const double theta = heading_deg_from_north * std::numbers::pi / 180.0;
  return {std::sin(theta), std::cos(theta)};
}

// Straight trajectory that switches to constant deceleration when told to.
struct VehicleMotion
{
  Eigen::Vector2d start;
  Eigen::Vector2d dir;
  double v0;
  double decel;

  bool braking{false};
  double brake_t{0.0};
  Eigen::Vector2d brake_pos{0.0, 0.0};
  double brake_v{0.0};

  void begin_braking(double t_s)
  {
    if (braking) return;
    braking = true;
    brake_t = t_s;
    brake_pos = position(t_s);
    brake_v = v0;
  }

  double speed(double t_s) const
  {
    if (!braking || t_s <= brake_t) return v0;
    return std::max(0.0, brake_v - decel * (t_s - brake_t));
  }

  Eigen::Vector2d position(double t_s) const
  {
    if (!braking || t_s <= brake_t) {
      return start + dir * (v0 * t_s);
    }
    const double dt = t_s - brake_t;
    const double t_stop = brake_v / decel;
    const double travelled = dt >= t_stop ? brake_v * brake_v / (2.0 * decel)
                                          : brake_v * dt - 0.5 * decel * dt * dt;
    return brake_pos + dir * travelled;
  }
};

void append_row(
  std::string & csv, std::int64_t ts, double t_s, const char * actor,
  geometry::GeoPosition geo, const Eigen::Vector2d & local, double speed)
{
  char buf[256];
  std::snprintf(
    buf, sizeof(buf), "%lld,%.1f,%s,%.9f,%.9f,%.4f,%.4f,%.4f\n", static_cast<long long>(ts),
    t_s, actor, geo.lat, geo.lon, local.x(), local.y(), speed);
  csv += buf;
}

}  // namespace

ScenarioConfig load_scenario_config(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open scenario file: " + path);
  }
  std::string header;
  std::getline(in, header);
  if (tokenize(header) != std::vector<std::string>{"pass-scenario", "v1"}) {
    throw ConfigError("field 'header': expected 'pass-scenario v1' in " + path);
  }

  ScenarioConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string & key = tokens[0];
    auto need = [&](std::size_t count) {
      if (tokens.size() != count) {
        throw ConfigError(
          "field '" + key + "': expected " + std::to_string(count - 1) + " values");
      }
    };

    if (key == "seed") {
      need(2);
      cfg.seed = static_cast<std::uint32_t>(to_int(tokens[1], key));
    } else if (key == "start_ts") {
      need(2);
      cfg.start_ts_ms = to_int(tokens[1], key);
    } else if (key == "duration_s") {
      need(2);
      cfg.duration_s = to_double(tokens[1], key);
    } else if (key == "frame_period_ms") {
      need(2);
      cfg.frame_period_ms = to_int(tokens[1], key);
    } else if (key == "anchor") {
      need(3);
      cfg.anchor = {to_double(tokens[1], "anchor.lat"), to_double(tokens[2], "anchor.lon")};
    } else if (key == "pedestrian") {
      need(2);
      if (tokens[1] == "present") {
        cfg.ped_present = true;
      } else if (tokens[1] == "absent") {
        cfg.ped_present = false;
      } else {
        throw ConfigError("field 'pedestrian': want 'present' or 'absent'");
      }
    } else if (key == "ped_start_local") {
      need(3);
      cfg.ped_start_local = {
        to_double(tokens[1], "ped_start_local.east"),
        to_double(tokens[2], "ped_start_local.north")};
    } else if (key == "ped_speed_mps") {
      need(2);
      cfg.ped_speed_mps = to_double(tokens[1], key);
    } else if (key == "ped_heading_deg") {
      need(2);
      cfg.ped_heading_deg = to_double(tokens[1], key);
    } else if (key == "vehicle_start_local") {
      need(3);
      cfg.veh_start_local = {
        to_double(tokens[1], "vehicle_start_local.east"),
        to_double(tokens[2], "vehicle_start_local.north")};
    } else if (key == "vehicle_speed_mps") {
      need(2);
      cfg.veh_speed_mps = to_double(tokens[1], key);
    } else if (key == "vehicle_heading_deg") {
      need(2);
      cfg.veh_heading_deg = to_double(tokens[1], key);
    } else if (key == "vehicle_length_m") {
      need(2);
      cfg.veh_length_m = to_double(tokens[1], key);
    } else if (key == "vehicle_decel_mps2") {
      need(2);
      cfg.veh_decel_mps2 = to_double(tokens[1], key);
    } else if (key == "pixel_noise_sigma") {
      need(2);
      cfg.pixel_noise_sigma = to_double(tokens[1], key);
    } else if (key == "alert_cooldown_ms") {
      need(2);
      cfg.alert_cooldown_ms = to_int(tokens[1], key);
    } else {
      throw ConfigError("field '" + key + "': unknown scenario key");
    }
  }

  if (cfg.frame_period_ms <= 0) throw ConfigError("field 'frame_period_ms': must be positive");
  if (cfg.duration_s <= 0.0) throw ConfigError("field 'duration_s': must be positive");
  if (cfg.veh_decel_mps2 <= 0.0) {
    throw ConfigError("field 'vehicle_decel_mps2': must be positive");
  }
  return cfg;
}

ScenarioReport run_scenario(const ScenarioConfig & cfg)
{
  if (cfg.frame_period_ms <= 0) throw ConfigError("field 'frame_period_ms': must be positive");
  if (cfg.duration_s <= 0.0) throw ConfigError("field 'duration_s': must be positive");
  if (cfg.veh_decel_mps2 <= 0.0) {
    throw ConfigError("field 'vehicle_decel_mps2': must be positive");
  }

  const Eigen::Vector2d ped_dir = heading_dir(cfg.ped_heading_deg);
  const Eigen::Vector2d veh_dir = heading_dir(cfg.veh_heading_deg);
  const int frames = static_cast<int>(
    std::floor(cfg.duration_s * 1000.0 / static_cast<double>(cfg.frame_period_ms)));

  // Ground patch sized to the pedestrian's walk plus margin.
  double east_min = -20.0, east_max = 20.0, north_min = -20.0, north_max = 20.0;
  if (cfg.ped_present) {
    const Eigen::Vector2d end =
      cfg.ped_start_local + ped_dir * (cfg.ped_speed_mps * cfg.duration_s);
    east_min = std::min({east_min, cfg.ped_start_local.x(), end.x()}) - 15.0;
    east_max = std::max({east_max, cfg.ped_start_local.x(), end.x()}) + 15.0;
    north_min = std::min({north_min, cfg.ped_start_local.y(), end.y()}) - 15.0;
    north_max = std::max({north_max, cfg.ped_start_local.y(), end.y()}) + 15.0;
  }
  geometry::GeoBounds bounds;
  bounds.w1 = pscw::local_to_geo(cfg.anchor, {east_min, north_max});
  bounds.w2 = pscw::local_to_geo(cfg.anchor, {east_max, north_max});
  bounds.w3 = pscw::local_to_geo(cfg.anchor, {east_max, north_min});
  bounds.w4 = pscw::local_to_geo(cfg.anchor, {east_min, north_min});

  // A representative oblique camera: the visible quad of the ground patch.
  const std::array<geometry::PixelPoint, 4> camera_corners = {
    geometry::PixelPoint{0.08, 0.04}, geometry::PixelPoint{0.97, 0.10},
    geometry::PixelPoint{0.90, 0.94}, geometry::PixelPoint{0.03, 0.88}};
  const std::array<geometry::PixelPoint, 4> top_corners = {
    geometry::PixelPoint{0.0, 0.0}, geometry::PixelPoint{1.0, 0.0},
    geometry::PixelPoint{1.0, 1.0}, geometry::PixelPoint{0.0, 1.0}};
  const geometry::Homography cam_to_top =
    geometry::homography_from_correspondences(camera_corners, top_corners);
  const geometry::Homography top_to_cam = cam_to_top.inverse();

  perception::RoadMask mask;
  mask.width = 64;
  mask.height = 48;
  mask.bits.assign(static_cast<std::size_t>(mask.width) * mask.height, 1);

  pipeline::PipelineConfig pipe_config;
  pipe_config.seed = cfg.seed;
  pipeline::FramePipeline pipe(cam_to_top, bounds, mask, pipe_config);

  pscw::AlertGate gate(cfg.alert_cooldown_ms);
  std::mt19937 noise_rng(cfg.seed ^ 0x9e3779b9u);
  std::normal_distribution<double> noise(0.0, cfg.pixel_noise_sigma);

  VehicleMotion vehicle{cfg.veh_start_local, veh_dir, cfg.veh_speed_mps, cfg.veh_decel_mps2};
  const std::uint32_t vehicle_id = 9001;

  ScenarioReport report;
  report.trajectories_csv = "ts_ms,t_s,actor,lat,lon,east_m,north_m,speed_mps\n";
  Eigen::Vector2d alert_veh_pos{0.0, 0.0};

  for (int k = 0; k <= frames; ++k) {
    const double t_s =
      static_cast<double>(k) * static_cast<double>(cfg.frame_period_ms) / 1000.0;
    const std::int64_t now = cfg.start_ts_ms + k * cfg.frame_period_ms;

    std::vector<perception::Detection> detections;
    Eigen::Vector2d ped_local = cfg.ped_start_local;
    if (cfg.ped_present) {
      ped_local += ped_dir * (cfg.ped_speed_mps * t_s);
      const geometry::GeoPosition ped_geo = pscw::local_to_geo(cfg.anchor, ped_local);
      geometry::PixelPoint camera =
        geometry::apply_homography(top_to_cam, geometry::geo_to_pixel(bounds, ped_geo));
      if (cfg.pixel_noise_sigma > 0.0) {
        camera.px += noise(noise_rng);
        camera.py += noise(noise_rng);
      }
      perception::Detection det;
      det.class_flag = 1;
      det.confidence = 0.9;
      det.anchor = camera;
      det.box_h = 0.12;
      det.box_w = 0.05;
      det.frame_ts = now;
      detections.push_back(det);
      append_row(report.trajectories_csv, now, t_s, "pedestrian", ped_geo, ped_local,
                 cfg.ped_speed_mps);
    }

    const pipeline::FrameResult result = pipe.process(detections, now, now);

    const Eigen::Vector2d veh_pos = vehicle.position(t_s);
    const double veh_speed = vehicle.speed(t_s);
    const geometry::GeoPosition veh_geo = pscw::local_to_geo(cfg.anchor, veh_pos);
    append_row(report.trajectories_csv, now, t_s, "vehicle", veh_geo, veh_pos, veh_speed);

    const messages::Bsm bsm = messages::build_bsm(
      veh_geo, veh_speed, cfg.veh_heading_deg, cfg.veh_length_m, vehicle_id,
      static_cast<std::uint8_t>(k & 0x7F), now);

    const std::vector<messages::Alert> alerts =
      pscw::evaluate(result.psms, {&bsm, 1}, cfg.anchor, now);
    for (const auto & alert : alerts) {
      if (!gate.admit(alert.pedestrian_temp_id, alert.vehicle_temp_id, now)) continue;
      ++report.alerts_admitted;
      if (!report.alert_fired) {
        report.alert_fired = true;
        report.first_alert_ts_ms = now;
        report.first_alert_ttc_s = alert.ttc_ms / 1000.0;
        report.pedestrian_temp_id = alert.pedestrian_temp_id;
        report.vehicle_temp_id = alert.vehicle_temp_id;
        report.encounter = {
          alert.collision_lat_e7 * messages::kLatLonUnitDeg,
          alert.collision_lon_e7 * messages::kLatLonUnitDeg};
        report.vehicle_speed_at_alert_mps = veh_speed;
        alert_veh_pos = veh_pos;
        vehicle.begin_braking(t_s);
      }
    }
  }
  report.alerts_suppressed = static_cast<std::uint64_t>(gate.suppressed_count());

  if (report.alert_fired) {
    report.stop_distance_m =
      pscw::stopping_distance(report.vehicle_speed_at_alert_mps, cfg.veh_decel_mps2);
    const Eigen::Vector2d stop_local = alert_veh_pos + veh_dir * report.stop_distance_m;
    report.stop_position = pscw::local_to_geo(cfg.anchor, stop_local);

    // Where the predicted encounter sits along the vehicle's travel line.
    const Eigen::Vector2d enc_local = [&] {
      const double east =
        geometry::kEarthRadiusM * std::cos(cfg.anchor.lat * std::numbers::pi / 180.0) *
        ((report.encounter.lon - cfg.anchor.lon) * std::numbers::pi / 180.0);
      const double north = geometry::kEarthRadiusM *
                           ((report.encounter.lat - cfg.anchor.lat) * std::numbers::pi / 180.0);
      return Eigen::Vector2d{east, north};
    }();
    const double along_track_gap = (enc_local - alert_veh_pos).dot(veh_dir);
    report.stop_margin_m = along_track_gap - report.stop_distance_m;
    report.halts_short = report.stop_margin_m > 0.0;
  }

  char buf[256];
  std::string & csv = report.report_csv;
  csv = "key,value\n";
  auto kv = [&](const char * key, const char * fmt, auto value) {
    std::snprintf(buf, sizeof(buf), "%s,", key);
    csv += buf;
    std::snprintf(buf, sizeof(buf), fmt, value);
    csv += buf;
    csv += '\n';
  };
  kv("alert_fired", "%d", report.alert_fired ? 1 : 0);
  kv("first_alert_ts_ms", "%lld", static_cast<long long>(report.first_alert_ts_ms));
  kv("first_alert_ttc_s", "%.3f", report.first_alert_ttc_s);
  kv("pedestrian_temp_id", "%u", report.pedestrian_temp_id);
  kv("vehicle_temp_id", "%u", report.vehicle_temp_id);
  kv("encounter_lat", "%.9f", report.encounter.lat);
  kv("encounter_lon", "%.9f", report.encounter.lon);
  kv("vehicle_speed_at_alert_mps", "%.4f", report.vehicle_speed_at_alert_mps);
  kv("stop_distance_m", "%.3f", report.stop_distance_m);
  kv("stop_lat", "%.9f", report.stop_position.lat);
  kv("stop_lon", "%.9f", report.stop_position.lon);
  kv("stop_margin_m", "%.3f", report.stop_margin_m);
  kv("halts_short", "%d", report.halts_short ? 1 : 0);
  kv("alerts_admitted", "%llu", static_cast<unsigned long long>(report.alerts_admitted));
  kv("alerts_suppressed", "%llu", static_cast<unsigned long long>(report.alerts_suppressed));
  return report;
}

void write_scenario_report(const ScenarioReport & report, const std::string & dir)
{
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream report_out(base / "report.csv");
  report_out << report.report_csv;
  std::ofstream traj_out(base / "trajectories.csv");
  traj_out << report.trajectories_csv;
}

}  // namespace pass::eval
