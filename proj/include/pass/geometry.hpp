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

#ifndef PASS__GEOMETRY_HPP_
#define PASS__GEOMETRY_HPP_

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace pass::geometry
{

/// Mean earth radius in meters, the spherical-distance convention.
inline constexpr double kEarthRadiusM = 6371000.0;

/// Image-relative coordinates: px is the fraction of the image width,
/// py the fraction of the image height, y increasing downward. Camera
/// detections live in [0,1]^2; intermediate projective results may fall
/// outside and are validated at ingestion instead.
struct PixelPoint
{
  double px{0.0};
  double py{0.0};
};

/// WGS-84 latitude/longitude in degrees.
struct GeoPosition
{
  double lat{0.0};
  double lon{0.0};
};

/// World coordinates of the four image corners: w1 top-left, w2 top-right,
/// w3 bottom-right, w4 bottom-left. The patch is treated as axis-aligned:
/// the vertical image axis spans latitude (w1 -> w4), the horizontal axis
/// spans longitude (w1 -> w2).
struct GeoBounds
{
  GeoPosition w1;
  GeoPosition w2;
  GeoPosition w3;
  GeoPosition w4;
};

/// Coarse movement direction, with the on-wire 2-bit codes.
enum class CardinalHeading : std::uint8_t {
  kEastWest = 0,
  kWestEast = 1,
  kNorthSouth = 2,
  kSouthNorth = 3,
};

const char * to_string(CardinalHeading heading);
std::optional<CardinalHeading> cardinal_from_string(std::string_view text);

/// 3x3 projective transform from camera pixels to top-view pixels.
/// Invariants: non-singular; normalized so m(2,2) == 1 whenever m(2,2) != 0.
class Homography
{
public:
  /// Normalizes and validates an explicit matrix.
  /// Throws DegenerateCorrespondence when |det| <= 1e-12.
  static Homography from_matrix(const Eigen::Matrix3d & m);

  const Eigen::Matrix3d & matrix() const { return m_; }
  Homography inverse() const;

private:
  explicit Homography(const Eigen::Matrix3d & m) : m_(m) {}
  Eigen::Matrix3d m_;
};

/// Two-fix motion summary: ground distance, speed, and heading angle
/// (radians from the east axis, in (-pi, pi]).
struct Kinematics
{
  double distance_m{0.0};
  double velocity_mps{0.0};
  double heading_rad{0.0};
};

/// Estimates the projective transform taking src[i] to dst[i] via the
/// 4-point direct linear solve. Throws DegenerateCorrespondence when the
/// 8x8 system has reciprocal condition number below 1e-12 (three collinear
/// points, repeated points, ...).
Homography homography_from_correspondences(
  const std::array<PixelPoint, 4> & src, const std::array<PixelPoint, 4> & dst);

/// Applies h to the augmented pixel [px, py, 1] and dehomogenizes.
/// Throws PointAtInfinity when the transformed third component |z'| <= 1e-12.
PixelPoint apply_homography(const Homography & h, PixelPoint p);

/// Linear pixel->geodetic mapping over an axis-aligned ground patch:
/// py interpolates latitude from w1 to w4, px interpolates longitude from
/// w1 to w2. Endpoint-exact by construction.
GeoPosition pixel_to_geo(const GeoBounds & bounds, PixelPoint p);

/// Inverse of pixel_to_geo over the same patch: recovers the top-view
/// pixel whose linear mapping lands on g.
PixelPoint geo_to_pixel(const GeoBounds & bounds, GeoPosition g);

/// Great-circle distance in meters on the mean-radius sphere.
double haversine_distance(GeoPosition l1, GeoPosition l2);

/// Ground speed between two timed fixes, meters/second.
/// Throws ZeroTimeDelta when t1_ms == t2_ms.
double velocity_mps(GeoPosition l1, GeoPosition l2, std::int64_t t1_ms, std::int64_t t2_ms);

/// Heading angle atan2(delta_lat, delta_lon) over the radian deltas, in
/// (-pi, pi] measured from the east axis. A zero displacement yields 0;
/// callers treat that as "no displacement".
double heading_rad(GeoPosition from, GeoPosition to);

/// Dominant-axis classification of a displacement into the four cardinal
/// directions, on meter-scaled components (cos-latitude corrected east).
/// Displacements under 1e-6 m on both axes retain `previous`; exact ties
/// resolve to the east-west axis.
CardinalHeading classify_heading(GeoPosition from, GeoPosition to, CardinalHeading previous);

/// Distance, velocity and heading of the step l1@t1 -> l2@t2.
Kinematics kinematics_between(
  GeoPosition l1, GeoPosition l2, std::int64_t t1_ms, std::int64_t t2_ms);

}  // namespace pass::geometry

#endif  // PASS__GEOMETRY_HPP_
