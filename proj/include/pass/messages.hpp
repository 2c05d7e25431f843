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

#ifndef PASS__MESSAGES_HPP_
#define PASS__MESSAGES_HPP_

#include "pass/geometry.hpp"
#include "pass/tracking.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace pass::messages
{

// Message-type tags, the first byte of every frame.
inline constexpr std::uint8_t kPsmType = 0x20;
inline constexpr std::uint8_t kBsmType = 0x14;
inline constexpr std::uint8_t kAlertType = 0x30;

inline constexpr std::uint8_t kDeviceUserTypeVru = 1;

// Fixed frame sizes including the type byte. See docs/wire_format.md.
inline constexpr std::size_t kPsmFrameSize = 33;
inline constexpr std::size_t kBsmFrameSize = 30;
inline constexpr std::size_t kAlertFrameSize = 27;

// Quantization units.
inline constexpr double kLatLonUnitDeg = 1e-7;
inline constexpr double kSpeedUnitMps = 0.02;
inline constexpr double kHeadingUnitDeg = 0.0125;
inline constexpr std::uint16_t kHeadingWireModulus = 28800;
inline constexpr double kElevationUnitM = 0.1;
inline constexpr std::int32_t kElevationMinDm = -4095;
inline constexpr std::int32_t kElevationMaxDm = 61439;

/// Personal Safety Message: quantized pedestrian state per the SAE-style
/// field model. All *_u / *_e7 / *_dm fields hold wire units.
struct Psm
{
  static constexpr std::uint8_t kMsgType = kPsmType;

  std::uint8_t device_user_type{kDeviceUserTypeVru};
  std::int64_t timestamp_ms{0};   // UTC epoch milliseconds (13-digit format)
  std::uint16_t dsecond{0};       // milliseconds within the minute, 0..60999
  std::uint8_t msg_count{0};      // 0..127
  std::uint32_t temp_id{0};
  std::int32_t lat_e7{0};         // 1e-7 degree units
  std::int32_t lon_e7{0};
  std::int32_t elev_dm{0};        // 0.1 m units, asymmetric range [-4095, 61439]
  std::uint8_t pos_accuracy_dm{0};
  std::uint16_t speed_u{0};       // 0.02 m/s units
  std::uint16_t heading_u{0};     // 0.0125 deg clockwise from north, 0..28799
  geometry::CardinalHeading cardinal{geometry::CardinalHeading::kNorthSouth};

  double lat_deg() const { return lat_e7 * kLatLonUnitDeg; }
  double lon_deg() const { return lon_e7 * kLatLonUnitDeg; }
  double elevation_m() const { return elev_dm * kElevationUnitM; }
  double accuracy_m() const { return pos_accuracy_dm * kElevationUnitM; }
  double speed_mps() const { return speed_u * kSpeedUnitMps; }
  double heading_deg() const { return heading_u * kHeadingUnitDeg; }

  bool operator==(const Psm &) const = default;
};

/// Basic Safety Message: the minimal vehicle-side counterpart.
struct Bsm
{
  static constexpr std::uint8_t kMsgType = kBsmType;

  std::int64_t timestamp_ms{0};
  std::uint8_t msg_count{0};
  std::uint32_t temp_id{0};
  std::int32_t lat_e7{0};
  std::int32_t lon_e7{0};
  std::int32_t elev_dm{0};
  std::uint16_t speed_u{0};
  std::uint16_t heading_u{0};
  std::uint16_t length_dm{50};  // vehicle length, 0.1 m units, > 0

  double lat_deg() const { return lat_e7 * kLatLonUnitDeg; }
  double lon_deg() const { return lon_e7 * kLatLonUnitDeg; }
  double speed_mps() const { return speed_u * kSpeedUnitMps; }
  double heading_deg() const { return heading_u * kHeadingUnitDeg; }
  double length_m() const { return length_dm * 0.1; }

  bool operator==(const Bsm &) const = default;
};

/// Pedestrian-crash warning for one (pedestrian, vehicle) pair.
struct Alert
{
  static constexpr std::uint8_t kMsgType = kAlertType;

  std::int64_t timestamp_ms{0};
  std::uint32_t pedestrian_temp_id{0};
  std::uint32_t vehicle_temp_id{0};
  std::uint16_t ttc_ms{0};  // 0..8000
  std::int32_t collision_lat_e7{0};
  std::int32_t collision_lon_e7{0};

  double ttc_s() const { return ttc_ms / 1000.0; }

  bool operator==(const Alert &) const = default;
};

using Message = std::variant<Psm, Bsm, Alert>;

/// Static PSM fields supplied by intersection calibration.
struct PsmConfig
{
  double elevation_m{201.0};
  double pos_accuracy_m{0.54};
};

/// Quantizes a track into a PSM stamped `now_ms`. Rounding is
/// half-away-from-zero; elevation/accuracy/speed clamp silently to their
/// field ranges. Throws QuantizationOverflow when the position leaves the
/// WGS-84 domain.
Psm build_psm(const tracking::PedestrianTrack & track, std::int64_t now_ms,
              const PsmConfig & config = {});

/// Quantizes explicit vehicle kinematics into a BSM; same rounding rules.
Bsm build_bsm(
  geometry::GeoPosition position, double speed_mps, double heading_deg_from_north,
  double length_m, std::uint32_t temp_id, std::uint8_t msg_count, std::int64_t now_ms,
  double elevation_m = 201.0);

/// Converts the internal heading angle (radians from east, (-pi, pi]) to
/// wire units of 0.0125 degrees clockwise from north.
std::uint16_t heading_to_wire(double heading_rad);

/// Fixed-layout big-endian encoding; every field in declaration order
/// behind a 1-byte type tag. decode(encode(m)) == m exactly.
std::vector<std::uint8_t> encode(const Psm & msg);
std::vector<std::uint8_t> encode(const Bsm & msg);
std::vector<std::uint8_t> encode(const Alert & msg);
std::vector<std::uint8_t> encode(const Message & msg);

/// Parses one frame, validating the type tag, the exact frame length for
/// that type, and every field-range invariant. Throws UnknownMessageType,
/// TruncatedFrame, or FieldOutOfRange.
Message decode(std::span<const std::uint8_t> frame);

std::uint8_t message_type(const Message & msg);

}  // namespace pass::messages

#endif  // PASS__MESSAGES_HPP_
