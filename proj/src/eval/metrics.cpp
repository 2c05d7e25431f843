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

#include "pass/eval/metrics.hpp"

#include "pass/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <string_view>

namespace pass::eval
{

double detection_accuracy(std::uint64_t tp, std::uint64_t fp)
{
  if (tp + fp == 0) {
    throw EmptySample("detection accuracy needs at least one observation");
  }
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double rmse_location(
  std::span<const geometry::GeoPosition> truth, std::span<const geometry::GeoPosition> est)
{
  if (truth.size() != est.size()) {
    throw LengthMismatch("location RMSE needs index-aligned samples");
  }
  if (truth.empty()) {
    throw EmptySample("location RMSE needs at least one sample");
  }
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = geometry::haversine_distance(truth[i], est[i]);
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq / static_cast<double>(truth.size()));
}

double rmse_velocity(std::span<const double> truth, std::span<const double> est)
{
  if (truth.size() != est.size()) {
    throw LengthMismatch("velocity RMSE needs index-aligned samples");
  }
  if (truth.empty()) {
    throw EmptySample("velocity RMSE needs at least one sample");
  }
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - est[i];
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq / static_cast<double>(truth.size()));
}

pscw::TtcResult ttc_oracle(
  const pscw::KinematicState & ped, const pscw::KinematicState & veh, double epsilon_m)
{
  if (!(epsilon_m > 0.0)) {
    throw NonPositiveEpsilon("encounter radius must be positive");
  }
  const Eigen::Vector2d dp = ped.pos_m - veh.pos_m;
  const Eigen::Vector2d dv = ped.vel_mps - veh.vel_mps;

  double closest = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 8000; ++k) {
    const double t = static_cast<double>(k) * 0.001;
    const double dist = (dp + dv * t).norm();
    closest = std::min(closest, dist);
    if (dist <= epsilon_m) {
      return pscw::TtcResult{t, dist};
    }
  }
  return pscw::TtcResult{std::nullopt, closest};
}

namespace
{

double parse_double_field(std::string_view text, const std::string & path, int line_no)
{
  double value = 0.0;
  const auto * begin = text.data();
  const auto * end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(
      path + ":" + std::to_string(line_no) + ": bad numeric field '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_int_field(std::string_view text, const std::string & path, int line_no)
{
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(
      path + ":" + std::to_string(line_no) + ": bad integer field '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_csv(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::vector<GroundTruthRecord> load_ground_truth_csv(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open ground-truth CSV: " + path);
  }
  std::vector<GroundTruthRecord> records;
  std::map<std::string, std::int64_t> last_ts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("ts,", 0) == 0) continue;  // header
    const auto fields = split_csv(line);
    if (fields.size() != 6) {
      throw ParseError(
        path + ":" + std::to_string(line_no) + ": expected 6 fields, got " +
        std::to_string(fields.size()));
    }
    GroundTruthRecord r;
    r.ts = parse_int_field(fields[0], path, line_no);
    r.actor_id = std::string(fields[1]);
    r.position.lat = parse_double_field(fields[2], path, line_no);
    r.position.lon = parse_double_field(fields[3], path, line_no);
    r.velocity_mps = parse_double_field(fields[4], path, line_no);
    const auto cardinal = geometry::cardinal_from_string(fields[5]);
    if (!cardinal) {
      throw ParseError(
        path + ":" + std::to_string(line_no) + ": bad cardinal '" + std::string(fields[5]) +
        "' (want EW/WE/NS/SN)");
    }
    r.cardinal = *cardinal;

    const auto it = last_ts.find(r.actor_id);
    if (it != last_ts.end() && r.ts <= it->second) {
      throw ParseError(
        path + ":" + std::to_string(line_no) + ": timestamps must strictly increase per actor");
    }
    last_ts[r.actor_id] = r.ts;
    records.push_back(std::move(r));
  }
  return records;
}

void write_ground_truth_csv(
  const std::string & path, std::span<const GroundTruthRecord> records)
{
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write ground-truth CSV: " + path);
  }
  out << "ts,actor_id,lat,lon,velocity_mps,cardinal\n";
  char buf[256];
  for (const auto & r : records) {
    std::snprintf(
      buf, sizeof(buf), "%lld,%s,%.9f,%.9f,%.6f,%s\n", static_cast<long long>(r.ts),
      r.actor_id.c_str(), r.position.lat, r.position.lon, r.velocity_mps,
      geometry::to_string(r.cardinal));
    out << buf;
  }
}

}  // namespace pass::eval
