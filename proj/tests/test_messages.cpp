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
#include "pass/messages.hpp"
#include "pass/tracking.hpp"
#include "test_support.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace pass::messages;
using pass::geometry::CardinalHeading;
using pass::test::uniform;

namespace
{

constexpr double kPi = std::numbers::pi;

std::string to_hex(const std::vector<std::uint8_t> & bytes)
{
  std::string out;
  char buf[3];
  for (const std::uint8_t b : bytes) {
    std::snprintf(buf, sizeof(buf), "%02x", b);
    out += buf;
  }
  return out;
}

Psm sample_psm()
{
  // The first packet of the sample broadcast log.
  Psm m;
  m.device_user_type = 1;
  m.timestamp_ms = 1543609955382;
  m.dsecond = 35382;
  m.msg_count = 1;
  m.temp_id = 1;
  m.lat_e7 = 346791830;
  m.lon_e7 = -828474140;
  m.elev_dm = 2010;
  m.pos_accuracy_dm = 5;
  m.speed_u = 2;
  m.heading_u = 0;
  m.cardinal = CardinalHeading::kSouthNorth;
  return m;
}

Psm random_psm(std::mt19937 & rng)
{
  auto ir = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  Psm m;
  m.device_user_type = static_cast<std::uint8_t>(ir(0, 255));
  m.timestamp_ms = ir(0, 4000000000000LL);
  m.dsecond = static_cast<std::uint16_t>(ir(0, 60999));
  m.msg_count = static_cast<std::uint8_t>(ir(0, 127));
  m.temp_id = static_cast<std::uint32_t>(ir(0, 0xFFFFFFFFLL));
  m.lat_e7 = static_cast<std::int32_t>(ir(-900000000, 900000000));
  m.lon_e7 = static_cast<std::int32_t>(ir(-1800000000, 1800000000));
  m.elev_dm = static_cast<std::int32_t>(ir(kElevationMinDm, kElevationMaxDm));
  m.pos_accuracy_dm = static_cast<std::uint8_t>(ir(0, 255));
  m.speed_u = static_cast<std::uint16_t>(ir(0, 65535));
  m.heading_u = static_cast<std::uint16_t>(ir(0, 28799));
  m.cardinal = static_cast<CardinalHeading>(ir(0, 3));
  return m;
}

Bsm random_bsm(std::mt19937 & rng)
{
  auto ir = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  Bsm m;
  m.timestamp_ms = ir(0, 4000000000000LL);
  m.msg_count = static_cast<std::uint8_t>(ir(0, 127));
  m.temp_id = static_cast<std::uint32_t>(ir(0, 0xFFFFFFFFLL));
  m.lat_e7 = static_cast<std::int32_t>(ir(-900000000, 900000000));
  m.lon_e7 = static_cast<std::int32_t>(ir(-1800000000, 1800000000));
  m.elev_dm = static_cast<std::int32_t>(ir(kElevationMinDm, kElevationMaxDm));
  m.speed_u = static_cast<std::uint16_t>(ir(0, 65535));
  m.heading_u = static_cast<std::uint16_t>(ir(0, 28799));
  m.length_dm = static_cast<std::uint16_t>(ir(1, 65535));
  return m;
}

Alert random_alert(std::mt19937 & rng)
{
  auto ir = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  Alert m;
  m.timestamp_ms = ir(0, 4000000000000LL);
  m.pedestrian_temp_id = static_cast<std::uint32_t>(ir(0, 0xFFFFFFFFLL));
  m.vehicle_temp_id = static_cast<std::uint32_t>(ir(0, 0xFFFFFFFFLL));
  m.ttc_ms = static_cast<std::uint16_t>(ir(0, 8000));
  m.collision_lat_e7 = static_cast<std::int32_t>(ir(-900000000, 900000000));
  m.collision_lon_e7 = static_cast<std::int32_t>(ir(-1800000000, 1800000000));
  return m;
}

Message random_message(std::mt19937 & rng)
{
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      return random_psm(rng);
    case 1:
      return random_bsm(rng);
    default:
      return random_alert(rng);
  }
}

}  // namespace

TEST_CASE("build_psm reproduces the sample packet values")
{
  pass::tracking::PedestrianTrack track;
  track.temp_id = 1;
  track.msg_count = 1;
  track.position = {34.679183, -82.847414};
  track.velocity_mps = 0.040266;
  track.heading_rad = kPi / 2.0;  // due north
  track.cardinal = CardinalHeading::kSouthNorth;

  const Psm m = build_psm(track, 1543609955382);
  CHECK(m.device_user_type == kDeviceUserTypeVru);
  CHECK(m.lat_e7 == 346791830);
  CHECK(m.lon_e7 == -828474140);
  CHECK(m.speed_u == 2);
  CHECK(m.cardinal == CardinalHeading::kSouthNorth);
  CHECK(m.elev_dm == 2010);
  CHECK(m.pos_accuracy_dm == 5);
  CHECK(m.dsecond == 35382);
  CHECK(m.heading_u == 0);
  CHECK(m.msg_count == 1);
  CHECK(m.temp_id == 1);
}

TEST_CASE("build_psm speed quantization")
{
  pass::tracking::PedestrianTrack track;
  track.position = {34.679183, -82.847414};

  track.velocity_mps = 0.0;
  CHECK(build_psm(track, 0).speed_u == 0);

  track.velocity_mps = 0.478718;
  const Psm m = build_psm(track, 0);
  CHECK(m.speed_u == 24);
  CHECK(std::abs(m.speed_mps() - 0.478718) <= 0.01);
}

TEST_CASE("build_psm rejects out-of-world positions, clamps the rest")
{
  pass::tracking::PedestrianTrack track;
  track.position = {91.0, 0.0};
  CHECK_THROWS_AS(build_psm(track, 0), pass::QuantizationOverflow);
  track.position = {0.0, -180.5};
  CHECK_THROWS_AS(build_psm(track, 0), pass::QuantizationOverflow);

  track.position = {34.679183, -82.847414};
  PsmConfig config;
  config.elevation_m = -10000.0;  // below the representable floor
  config.pos_accuracy_m = 1000.0;
  const Psm m = build_psm(track, 0, config);
  CHECK(m.elev_dm == kElevationMinDm);
  CHECK(m.pos_accuracy_dm == 255);
}

TEST_CASE("heading_to_wire axis fixtures")
{
  CHECK(heading_to_wire(kPi / 2.0) == 0);      // due north
  CHECK(heading_to_wire(0.0) == 7200);         // due east -> 90 deg
  CHECK(heading_to_wire(-kPi / 2.0) == 14400); // due south -> 180 deg
  CHECK(heading_to_wire(kPi) == 21600);        // due west -> 270 deg
}

TEST_CASE("golden frame bytes stay frozen")
{
  // Layout fixtures derived by hand from docs/wire_format.md.
  const Psm psm = sample_psm();
  const auto psm_bytes = encode(psm);
  CHECK(psm_bytes.size() == kPsmFrameSize);
  CHECK(
    to_hex(psm_bytes) ==
    "2001000001676652b4368a36010000000114ab9f96ce9e7ce417da050002000003");
  CHECK(std::get<Psm>(decode(psm_bytes)) == psm);

  Bsm bsm;
  bsm.timestamp_ms = 1543609955382;
  bsm.msg_count = 2;
  bsm.temp_id = 7;
  bsm.lat_e7 = 346791830;
  bsm.lon_e7 = -828474140;
  bsm.elev_dm = 2010;
  bsm.speed_u = 878;
  bsm.heading_u = 0;
  bsm.length_dm = 50;
  const auto bsm_bytes = encode(bsm);
  CHECK(bsm_bytes.size() == kBsmFrameSize);
  CHECK(to_hex(bsm_bytes) == "14000001676652b436020000000714ab9f96ce9e7ce417da036e00000032");
  CHECK(std::get<Bsm>(decode(bsm_bytes)) == bsm);

  Alert alert;
  alert.timestamp_ms = 1543609955382;
  alert.pedestrian_temp_id = 1;
  alert.vehicle_temp_id = 7;
  alert.ttc_ms = 7300;
  alert.collision_lat_e7 = 346791830;
  alert.collision_lon_e7 = -828474140;
  const auto alert_bytes = encode(alert);
  CHECK(alert_bytes.size() == kAlertFrameSize);
  CHECK(to_hex(alert_bytes) == "30000001676652b43600000001000000071c8414ab9f96ce9e7ce4");
  CHECK(std::get<Alert>(decode(alert_bytes)) == alert);
}

TEST_CASE("type tag dispatch")
{
  std::mt19937 rng(1);
  const auto psm = encode(random_psm(rng));
  const auto bsm = encode(random_bsm(rng));
  const auto alert = encode(random_alert(rng));
  CHECK(psm[0] == 0x20);
  CHECK(bsm[0] == 0x14);
  CHECK(alert[0] == 0x30);
  CHECK(std::holds_alternative<Psm>(decode(psm)));
  CHECK(std::holds_alternative<Bsm>(decode(bsm)));
  CHECK(std::holds_alternative<Alert>(decode(alert)));
}

TEST_CASE("random messages round-trip exactly")
{
  std::mt19937 rng(20261543);
  for (int i = 0; i < 3000; ++i) {
    const Message m = random_message(rng);
    const Message back = decode(encode(m));
    CHECK(back == m);
  }
}

TEST_CASE("single-byte mutations never misparse silently")
{
  std::mt19937 rng(606);
  for (int i = 0; i < 120; ++i) {
    const Message m = random_message(rng);
    auto frame = encode(m);
    for (std::size_t pos = 0; pos < frame.size(); ++pos) {
      auto mutated = frame;
      mutated[pos] ^= static_cast<std::uint8_t>(
        std::uniform_int_distribution<int>(1, 255)(rng));
      try {
        const Message back = decode(mutated);
        // A successful decode must surface the mutation.
        CHECK(back != m);
      } catch (const pass::UnknownMessageType &) {
      } catch (const pass::TruncatedFrame &) {
      } catch (const pass::FieldOutOfRange &) {
      }
    }
  }
}

TEST_CASE("quantization error bounds")
{
  std::mt19937 rng(271828);
  for (int i = 0; i < 2000; ++i) {
    pass::tracking::PedestrianTrack track;
    track.position = {uniform(rng, -90.0, 90.0), uniform(rng, -180.0, 180.0)};
    track.velocity_mps = uniform(rng, 0.0, 1300.0);
    track.heading_rad = uniform(rng, -kPi + 1e-9, kPi);
    PsmConfig config;
    config.elevation_m = uniform(rng, -409.5, 6143.9);
    config.pos_accuracy_m = uniform(rng, 0.0, 25.5);
    const std::int64_t now = 1543609955382 + i;

    const Psm m = build_psm(track, now, config);
    CHECK(std::abs(m.lat_deg() - track.position.lat) <= 5e-8 + 1e-12);
    CHECK(std::abs(m.lon_deg() - track.position.lon) <= 5e-8 + 1e-12);
    CHECK(std::abs(m.speed_mps() - track.velocity_mps) <= 0.01 + 1e-12);
    CHECK(std::abs(m.elevation_m() - config.elevation_m) <= 0.05 + 1e-12);

    const double expected_deg =
      std::fmod(std::fmod(90.0 - track.heading_rad * 180.0 / kPi, 360.0) + 360.0, 360.0);
    double delta = std::abs(m.heading_deg() - expected_deg);
    if (delta > 180.0) delta = 360.0 - delta;
    CHECK(delta <= 0.00625 + 1e-12);

    CHECK(m.dsecond == now % 60000);
  }
}

TEST_CASE("decode accepts leap-second dsecond values but build never produces them")
{
  Psm m = sample_psm();
  m.dsecond = 60500;  // leap-second range, decode-legal
  const Message back = decode(encode(m));
  CHECK(std::get<Psm>(back).dsecond == 60500);

  m.dsecond = 61000;
  CHECK_THROWS_AS(encode(m), pass::FieldOutOfRange);

  // Direct byte-level check of the decoder path: patch dsecond (offset 10).
  auto frame = encode(sample_psm());
  frame[10] = 0xEE;
  frame[11] = 0x48;  // 61000
  CHECK_THROWS_AS(decode(frame), pass::FieldOutOfRange);
}

TEST_CASE("decode rejects malformed frames")
{
  CHECK_THROWS_AS(decode(std::vector<std::uint8_t>{}), pass::TruncatedFrame);

  std::vector<std::uint8_t> unknown(kPsmFrameSize, 0);
  unknown[0] = 0x99;
  CHECK_THROWS_AS(decode(unknown), pass::UnknownMessageType);

  auto frame = encode(sample_psm());
  frame.pop_back();
  CHECK_THROWS_AS(decode(frame), pass::TruncatedFrame);
  frame.push_back(0);
  frame.push_back(0);
  CHECK_THROWS_AS(decode(frame), pass::TruncatedFrame);
}

TEST_CASE("decode validates field ranges")
{
  // msg_count byte (offset 12) above 127.
  auto frame = encode(sample_psm());
  frame[12] = 200;
  CHECK_THROWS_AS(decode(frame), pass::FieldOutOfRange);

  // Elevation wire value 0 decodes below the representable floor.
  frame = encode(sample_psm());
  frame[25] = 0;
  frame[26] = 0;
  CHECK_THROWS_AS(decode(frame), pass::FieldOutOfRange);

  // Cardinal byte (offset 32) above 3.
  frame = encode(sample_psm());
  frame[32] = 4;
  CHECK_THROWS_AS(decode(frame), pass::FieldOutOfRange);

  // BSM zero vehicle length.
  Bsm bsm;
  bsm.length_dm = 1;
  auto bframe = encode(bsm);
  bframe[28] = 0;
  bframe[29] = 0;
  CHECK_THROWS_AS(decode(bframe), pass::FieldOutOfRange);

  // Alert TTC above the 8 s bound.
  Alert alert;
  auto aframe = encode(alert);
  aframe[17] = 0x20;
  aframe[18] = 0x00;  // 8192 ms
  CHECK_THROWS_AS(decode(aframe), pass::FieldOutOfRange);
}

TEST_CASE("msg_count strictly increments mod 128 across consecutive PSMs")
{
  pass::tracking::Tracker tracker({}, 7);
  const pass::geometry::GeoPosition pos{34.679183, -82.847414};
  std::uint8_t previous = 0;
  bool first = true;
  for (int step = 0; step < 140; ++step) {
    const auto tracks = tracker.step({{pos, step * 100, 0.9}}, step * 100 + 1);
    REQUIRE(tracks.size() == 1);
    const Psm m = build_psm(tracks[0], step * 100 + 2);
    if (!first) {
      CHECK(m.msg_count == ((previous + 1) & 0x7F));
    }
    previous = m.msg_count;
    first = false;
  }
}

TEST_CASE("build_bsm quantizes vehicle kinematics")
{
  const Bsm m = build_bsm({34.6790, -82.8470}, 17.56, 0.0, 5.0, 42, 3, 1543609955382);
  CHECK(m.speed_u == 878);
  CHECK(m.heading_u == 0);
  CHECK(m.length_dm == 50);
  CHECK(m.temp_id == 42);
  CHECK(std::abs(m.speed_mps() - 17.56) < 1e-9);

  const Bsm west = build_bsm({34.0, -82.0}, 10.0, -90.0, 4.2, 1, 1, 0);
  CHECK(west.heading_u == 21600);
}
