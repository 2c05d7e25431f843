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

#include "pass/geometry.hpp"

#include "pass/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pass::geometry
{

namespace
{

constexpr double kDegToRad = std::numbers::pi / 180.0;

double lerp_exact(double a, double b, double t)
{
  // Endpoint-exact form: t=0 gives a, t=1 gives b bit-for-bit.
  return a * (1.0 - t) + b * t;
}

}  // namespace

const char * to_string(CardinalHeading heading)
{
  switch (heading) {
    case CardinalHeading::kEastWest:
      return "EW";
    case CardinalHeading::kWestEast:
      return "WE";
    case CardinalHeading::kNorthSouth:
      return "NS";
    case CardinalHeading::kSouthNorth:
      return "SN";
  }
  return "NS";
}

std::optional<CardinalHeading> cardinal_from_string(std::string_view text)
{
  if (text == "EW") return CardinalHeading::kEastWest;
  if (text == "WE") return CardinalHeading::kWestEast;
  if (text == "NS") return CardinalHeading::kNorthSouth;
  if (text == "SN") return CardinalHeading::kSouthNorth;
  return std::nullopt;
}

Homography Homography::from_matrix(const Eigen::Matrix3d & m)
{
  Eigen::Matrix3d n = m;
  if (std::abs(n(2, 2)) > 1e-12) {
    n /= n(2, 2);
  }
  if (std::abs(n.determinant()) <= 1e-12) {
    throw DegenerateCorrespondence("homography matrix is singular");
  }
  return Homography(n);
}

Homography Homography::inverse() const
{
  return from_matrix(m_.inverse());
}

Homography homography_from_correspondences(
  const std::array<PixelPoint, 4> & src, const std::array<PixelPoint, 4> & dst)
{
  // Unknowns h = (h00 h01 h02 h10 h11 h12 h20 h21), h22 fixed to 1.
  // Each correspondence (x,y) -> (u,v) contributes two rows:
  //   x*h00 + y*h01 + h02 - u*x*h20 - u*y*h21 = u
  //   x*h10 + y*h11 + h12 - v*x*h20 - v*y*h21 = v
  Eigen::Matrix<double, 8, 8> a = Eigen::Matrix<double, 8, 8>::Zero();
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const double x = src[static_cast<std::size_t>(i)].px;
    const double y = src[static_cast<std::size_t>(i)].py;
    const double u = dst[static_cast<std::size_t>(i)].px;
    const double v = dst[static_cast<std::size_t>(i)].py;
    a(2 * i, 0) = x;
    a(2 * i, 1) = y;
    a(2 * i, 2) = 1.0;
    a(2 * i, 6) = -u * x;
    a(2 * i, 7) = -u * y;
    b(2 * i) = u;
    a(2 * i + 1, 3) = x;
    a(2 * i + 1, 4) = y;
    a(2 * i + 1, 5) = 1.0;
    a(2 * i + 1, 6) = -v * x;
    a(2 * i + 1, 7) = -v * y;
    b(2 * i + 1) = v;
  }

  Eigen::JacobiSVD<Eigen::Matrix<double, 8, 8>> svd(
    a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(7);
  if (!(smax > 0.0) || smin / smax < 1e-12) {
    throw DegenerateCorrespondence("4-point correspondence system is singular");
  }
  const Eigen::Matrix<double, 8, 1> h = svd.solve(b);

  Eigen::Matrix3d m;
  m << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
  return Homography::from_matrix(m);
}

PixelPoint apply_homography(const Homography & h, PixelPoint p)
{
  const Eigen::Vector3d out = h.matrix() * Eigen::Vector3d(p.px, p.py, 1.0);
  if (std::abs(out.z()) <= 1e-12) {
    throw PointAtInfinity("homogeneous component vanished under homography");
  }
  return PixelPoint{out.x() / out.z(), out.y() / out.z()};
}

GeoPosition pixel_to_geo(const GeoBounds & bounds, PixelPoint p)
{
  return GeoPosition{
    lerp_exact(bounds.w1.lat, bounds.w4.lat, p.py),
    lerp_exact(bounds.w1.lon, bounds.w2.lon, p.px)};
}

PixelPoint geo_to_pixel(const GeoBounds & bounds, GeoPosition g)
{
  return PixelPoint{
    (g.lon - bounds.w1.lon) / (bounds.w2.lon - bounds.w1.lon),
    (g.lat - bounds.w1.lat) / (bounds.w4.lat - bounds.w1.lat)};
}

double haversine_distance(GeoPosition l1, GeoPosition l2)
{
  const double phi1 = l1.lat * kDegToRad;
  const double phi2 = l2.lat * kDegToRad;
  const double dphi = (l2.lat - l1.lat) * kDegToRad;
  const double dgamma = (l2.lon - l1.lon) * kDegToRad;

  const double sin_dphi = std::sin(dphi / 2.0);
  const double sin_dgamma = std::sin(dgamma / 2.0);
  double a = sin_dphi * sin_dphi + std::cos(phi1) * std::cos(phi2) * sin_dgamma * sin_dgamma;
  a = std::clamp(a, 0.0, 1.0);
  return kEarthRadiusM * 2.0 * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

double velocity_mps(GeoPosition l1, GeoPosition l2, std::int64_t t1_ms, std::int64_t t2_ms)
{
  if (t1_ms == t2_ms) {
    throw ZeroTimeDelta("velocity requires two distinct timestamps");
  }
  const double dt_s = static_cast<double>(std::abs(t2_ms - t1_ms)) / 1000.0;
  return haversine_distance(l1, l2) / dt_s;
}

double heading_rad(GeoPosition from, GeoPosition to)
{
  const double dphi = (to.lat - from.lat) * kDegToRad;
  const double dgamma = (to.lon - from.lon) * kDegToRad;
  return std::atan2(dphi, dgamma);
}

CardinalHeading classify_heading(GeoPosition from, GeoPosition to, CardinalHeading previous)
{
  const double dphi = (to.lat - from.lat) * kDegToRad;
  const double dgamma = (to.lon - from.lon) * kDegToRad;
  const double north_m = kEarthRadiusM * dphi;
  const double east_m = kEarthRadiusM * std::cos(from.lat * kDegToRad) * dgamma;

  if (std::abs(north_m) < 1e-6 && std::abs(east_m) < 1e-6) {
    return previous;
  }
  if (std::abs(east_m) >= std::abs(north_m)) {
    return east_m > 0.0 ? CardinalHeading::kWestEast : CardinalHeading::kEastWest;
  }
  return north_m > 0.0 ? CardinalHeading::kSouthNorth : CardinalHeading::kNorthSouth;
}

Kinematics kinematics_between(
  GeoPosition l1, GeoPosition l2, std::int64_t t1_ms, std::int64_t t2_ms)
{
  Kinematics k;
  k.distance_m = haversine_distance(l1, l2);
  k.velocity_mps = velocity_mps(l1, l2, t1_ms, t2_ms);
  k.heading_rad = heading_rad(l1, l2);
  return k;
}

}  // namespace pass::geometry
