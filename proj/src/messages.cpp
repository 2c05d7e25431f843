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

#include "pass/messages.hpp"

#include "pass/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pass::messages
{

namespace
{

constexpr std::int64_t kElevationBias = 4096;  // wire u16 = elev_dm + 4096

std::int64_t round_away(double value)
{
  return std::llround(value);  // llround rounds halves away from zero
}

std::int64_t clamp_ll(std::int64_t v, std::int64_t lo, std::int64_t hi)
{
  return v < lo ? lo : (v > hi ? hi : v);
}

class ByteWriter
{
public:
  explicit ByteWriter(std::size_t reserve) { out_.reserve(reserve); }

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v)
  {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v)
  {
    out_.push_back(static_cast<std::uint8_t>(v >> 24));
    out_.push_back(static_cast<std::uint8_t>(v >> 16));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
  }
  void u64(std::uint64_t v)
  {
    u32(static_cast<std::uint32_t>(v >> 32));
    u32(static_cast<std::uint32_t>(v));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }

  std::vector<std::uint8_t> take() { return std::move(out_); }

private:
  std::vector<std::uint8_t> out_;
};

class ByteReader
{
public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return data_[pos_++]; }
  std::uint16_t u16()
  {
    const std::uint16_t v = static_cast<std::uint16_t>(
      (static_cast<std::uint16_t>(data_[pos_]) << 8) | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32()
  {
    const std::uint32_t v = (static_cast<std::uint32_t>(data_[pos_]) << 24) |
                            (static_cast<std::uint32_t>(data_[pos_ + 1]) << 16) |
                            (static_cast<std::uint32_t>(data_[pos_ + 2]) << 8) |
                            static_cast<std::uint32_t>(data_[pos_ + 3]);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64()
  {
    const std::uint64_t hi = u32();
    return (hi << 32) | u32();
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_{1};  // the caller consumes the type byte
};

void check(bool ok, const char * what)
{
  if (!ok) {
    throw FieldOutOfRange(std::string("message field out of range: ") + what);
  }
}

void validate(const Psm & m)
{
  check(m.timestamp_ms >= 0, "psm.timestamp_ms");
  check(m.dsecond <= 60999, "psm.dsecond");
  check(m.msg_count <= 127, "psm.msg_count");
  check(m.lat_e7 >= -900000000 && m.lat_e7 <= 900000000, "psm.lat_e7");
  check(m.lon_e7 >= -1800000000 && m.lon_e7 <= 1800000000, "psm.lon_e7");
  check(m.elev_dm >= kElevationMinDm && m.elev_dm <= kElevationMaxDm, "psm.elev_dm");
  check(m.heading_u < kHeadingWireModulus, "psm.heading_u");
  check(static_cast<std::uint8_t>(m.cardinal) <= 3, "psm.cardinal");
}

void validate(const Bsm & m)
{
  check(m.timestamp_ms >= 0, "bsm.timestamp_ms");
  check(m.msg_count <= 127, "bsm.msg_count");
  check(m.lat_e7 >= -900000000 && m.lat_e7 <= 900000000, "bsm.lat_e7");
  check(m.lon_e7 >= -1800000000 && m.lon_e7 <= 1800000000, "bsm.lon_e7");
  check(m.elev_dm >= kElevationMinDm && m.elev_dm <= kElevationMaxDm, "bsm.elev_dm");
  check(m.heading_u < kHeadingWireModulus, "bsm.heading_u");
  check(m.length_dm > 0, "bsm.length_dm");
}

void validate(const Alert & m)
{
  check(m.timestamp_ms >= 0, "alert.timestamp_ms");
  check(m.ttc_ms <= 8000, "alert.ttc_ms");
  check(m.collision_lat_e7 >= -900000000 && m.collision_lat_e7 <= 900000000,
        "alert.collision_lat_e7");
  check(m.collision_lon_e7 >= -1800000000 && m.collision_lon_e7 <= 1800000000,
        "alert.collision_lon_e7");
}

std::uint16_t elevation_to_wire(std::int32_t elev_dm)
{
  return static_cast<std::uint16_t>(elev_dm + kElevationBias);
}

std::int32_t elevation_from_wire(std::uint16_t wire)
{
  return static_cast<std::int32_t>(wire) - static_cast<std::int32_t>(kElevationBias);
}

}  // namespace

std::uint16_t heading_to_wire(double heading_rad)
{
  const double deg = heading_rad * 180.0 / std::numbers::pi;
  double from_north = std::fmod(90.0 - deg, 360.0);
  if (from_north < 0.0) from_north += 360.0;
  const std::int64_t units = round_away(from_north / kHeadingUnitDeg);
  return static_cast<std::uint16_t>(units % kHeadingWireModulus);
}

Psm build_psm(const tracking::PedestrianTrack & track, std::int64_t now_ms,
              const PsmConfig & config)
{
  const geometry::GeoPosition pos = track.position;
  if (pos.lat < -90.0 || pos.lat > 90.0 || pos.lon < -180.0 || pos.lon > 180.0) {
    throw QuantizationOverflow("pedestrian position outside WGS-84 range");
  }

  Psm m;
  m.device_user_type = kDeviceUserTypeVru;
  m.timestamp_ms = now_ms;
  m.dsecond = static_cast<std::uint16_t>(((now_ms % 60000) + 60000) % 60000);
  m.msg_count = track.msg_count;
  m.temp_id = track.temp_id;
  m.lat_e7 = static_cast<std::int32_t>(round_away(pos.lat / kLatLonUnitDeg));
  m.lon_e7 = static_cast<std::int32_t>(round_away(pos.lon / kLatLonUnitDeg));
  m.elev_dm = static_cast<std::int32_t>(clamp_ll(
    round_away(config.elevation_m / kElevationUnitM), kElevationMinDm, kElevationMaxDm));
  m.pos_accuracy_dm = static_cast<std::uint8_t>(
    clamp_ll(round_away(config.pos_accuracy_m / kElevationUnitM), 0, 255));
  m.speed_u = static_cast<std::uint16_t>(
    clamp_ll(round_away(track.velocity_mps / kSpeedUnitMps), 0, 65535));
  m.heading_u = heading_to_wire(track.heading_rad);
  m.cardinal = track.cardinal;
  return m;
}

Bsm build_bsm(
  geometry::GeoPosition position, double speed_mps, double heading_deg_from_north,
  double length_m, std::uint32_t temp_id, std::uint8_t msg_count, std::int64_t now_ms,
  double elevation_m)
{
  if (position.lat < -90.0 || position.lat > 90.0 || position.lon < -180.0 ||
      position.lon > 180.0) {
    throw QuantizationOverflow("vehicle position outside WGS-84 range");
  }

  Bsm m;
  m.timestamp_ms = now_ms;
  m.msg_count = static_cast<std::uint8_t>(msg_count & 0x7F);
  m.temp_id = temp_id;
  m.lat_e7 = static_cast<std::int32_t>(round_away(position.lat / kLatLonUnitDeg));
  m.lon_e7 = static_cast<std::int32_t>(round_away(position.lon / kLatLonUnitDeg));
  m.elev_dm = static_cast<std::int32_t>(
    clamp_ll(round_away(elevation_m / kElevationUnitM), kElevationMinDm, kElevationMaxDm));
  m.speed_u =
    static_cast<std::uint16_t>(clamp_ll(round_away(speed_mps / kSpeedUnitMps), 0, 65535));
  double from_north = std::fmod(heading_deg_from_north, 360.0);
  if (from_north < 0.0) from_north += 360.0;
  m.heading_u = static_cast<std::uint16_t>(
    round_away(from_north / kHeadingUnitDeg) % kHeadingWireModulus);
  m.length_dm =
    static_cast<std::uint16_t>(clamp_ll(round_away(length_m / kElevationUnitM), 1, 65535));
  return m;
}

std::vector<std::uint8_t> encode(const Psm & msg)
{
  validate(msg);
  ByteWriter w(kPsmFrameSize);
  w.u8(kPsmType);
  w.u8(msg.device_user_type);
  w.u64(static_cast<std::uint64_t>(msg.timestamp_ms));
  w.u16(msg.dsecond);
  w.u8(msg.msg_count);
  w.u32(msg.temp_id);
  w.i32(msg.lat_e7);
  w.i32(msg.lon_e7);
  w.u16(elevation_to_wire(msg.elev_dm));
  w.u8(msg.pos_accuracy_dm);
  w.u16(msg.speed_u);
  w.u16(msg.heading_u);
  w.u8(static_cast<std::uint8_t>(msg.cardinal));
  return w.take();
}

std::vector<std::uint8_t> encode(const Bsm & msg)
{
  validate(msg);
  ByteWriter w(kBsmFrameSize);
  w.u8(kBsmType);
  w.u64(static_cast<std::uint64_t>(msg.timestamp_ms));
  w.u8(msg.msg_count);
  w.u32(msg.temp_id);
  w.i32(msg.lat_e7);
  w.i32(msg.lon_e7);
  w.u16(elevation_to_wire(msg.elev_dm));
  w.u16(msg.speed_u);
  w.u16(msg.heading_u);
  w.u16(msg.length_dm);
  return w.take();
}

std::vector<std::uint8_t> encode(const Alert & msg)
{
  validate(msg);
  ByteWriter w(kAlertFrameSize);
  w.u8(kAlertType);
  w.u64(static_cast<std::uint64_t>(msg.timestamp_ms));
  w.u32(msg.pedestrian_temp_id);
  w.u32(msg.vehicle_temp_id);
  w.u16(msg.ttc_ms);
  w.i32(msg.collision_lat_e7);
  w.i32(msg.collision_lon_e7);
  return w.take();
}

std::vector<std::uint8_t> encode(const Message & msg)
{
  return std::visit([](const auto & m) { return encode(m); }, msg);
}

Message decode(std::span<const std::uint8_t> frame)
{
  if (frame.empty()) {
    throw TruncatedFrame("empty datagram");
  }
  const std::uint8_t type = frame[0];

  std::size_t expected = 0;
  switch (type) {
    case kPsmType:
      expected = kPsmFrameSize;
      break;
    case kBsmType:
      expected = kBsmFrameSize;
      break;
    case kAlertType:
      expected = kAlertFrameSize;
      break;
    default:
      throw UnknownMessageType("unknown message type tag " + std::to_string(type));
  }
  if (frame.size() != expected) {
    throw TruncatedFrame(
      "frame length " + std::to_string(frame.size()) + " does not match type (expected " +
      std::to_string(expected) + ")");
  }

  ByteReader r(frame);
  if (type == kPsmType) {
    Psm m;
    m.device_user_type = r.u8();
    const std::uint64_t ts = r.u64();
    check(ts <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()),
          "psm.timestamp_ms");
    m.timestamp_ms = static_cast<std::int64_t>(ts);
    m.dsecond = r.u16();
    m.msg_count = r.u8();
    m.temp_id = r.u32();
    m.lat_e7 = r.i32();
    m.lon_e7 = r.i32();
    m.elev_dm = elevation_from_wire(r.u16());
    m.pos_accuracy_dm = r.u8();
    m.speed_u = r.u16();
    m.heading_u = r.u16();
    const std::uint8_t cardinal = r.u8();
    check(cardinal <= 3, "psm.cardinal");
    m.cardinal = static_cast<geometry::CardinalHeading>(cardinal);
    validate(m);
    return m;
  }
  if (type == kBsmType) {
    Bsm m;
    const std::uint64_t ts = r.u64();
    check(ts <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()),
          "bsm.timestamp_ms");
    m.timestamp_ms = static_cast<std::int64_t>(ts);
    m.msg_count = r.u8();
    m.temp_id = r.u32();
    m.lat_e7 = r.i32();
    m.lon_e7 = r.i32();
    m.elev_dm = elevation_from_wire(r.u16());
    m.speed_u = r.u16();
    m.heading_u = r.u16();
    m.length_dm = r.u16();
    validate(m);
    return m;
  }
  Alert m;
  const std::uint64_t ts = r.u64();
  check(ts <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()),
        "alert.timestamp_ms");
  m.timestamp_ms = static_cast<std::int64_t>(ts);
  m.pedestrian_temp_id = r.u32();
  m.vehicle_temp_id = r.u32();
  m.ttc_ms = r.u16();
  m.collision_lat_e7 = r.i32();
  m.collision_lon_e7 = r.i32();
  validate(m);
  return m;
}

std::uint8_t message_type(const Message & msg)
{
  return std::visit([](const auto & m) { return m.kMsgType; }, msg);
}

}  // namespace pass::messages
