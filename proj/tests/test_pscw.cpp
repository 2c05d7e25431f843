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
#include "pass/pscw.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace pass::pscw;
using pass::eval::ttc_oracle;
using pass::geometry::GeoPosition;
using pass::test::uniform;

namespace
{

const GeoPosition kAnchor{34.6794, -82.8475};

KinematicState state(double east, double north, double vel_east, double vel_north)
{
  KinematicState s;
  s.pos_m = {east, north};
  s.vel_mps = {vel_east, vel_north};
  return s;
}

KinematicState random_state(std::mt19937 & rng)
{
  return state(
    uniform(rng, -120.0, 120.0), uniform(rng, -120.0, 120.0), uniform(rng, -20.0, 20.0),
    uniform(rng, -20.0, 20.0));
}

}  // namespace

TEST_CASE("to_local anchors, projects, and decomposes velocity")
{
  const KinematicState at_ref = to_local(kAnchor, kAnchor, 0.0, 0.0);
  CHECK(at_ref.pos_m.x() == 0.0);
  CHECK(at_ref.pos_m.y() == 0.0);

  // One arc-second north of the anchor.
  const GeoPosition north_sec{kAnchor.lat + 1.0 / 3600.0, kAnchor.lon};
  const KinematicState s = to_local(kAnchor, north_sec, 0.0, 0.0);
  CHECK(s.pos_m.y() == doctest::Approx(30.88).epsilon(1e-3));
  CHECK(std::abs(s.pos_m.x()) < 1e-9);

  const KinematicState east_bound = to_local(kAnchor, kAnchor, 10.0, 90.0);
  CHECK(east_bound.vel_mps.x() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(std::abs(east_bound.vel_mps.y()) < 1e-9);
}

TEST_CASE("to_local rejects positions beyond the projection range")
{
  const GeoPosition far{kAnchor.lat + 0.05, kAnchor.lon};  // ~5.6 km north
  CHECK_THROWS_AS(to_local(kAnchor, far, 0.0, 0.0), pass::OutOfProjectionRange);
}

TEST_CASE("local_to_geo inverts to_local")
{
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector2d p{uniform(rng, -1500, 1500), uniform(rng, -1500, 1500)};
    const GeoPosition geo = local_to_geo(kAnchor, p);
    const KinematicState back = to_local(kAnchor, geo, 0.0, 0.0);
    CHECK(std::abs(back.pos_m.x() - p.x()) < 1e-6);
    CHECK(std::abs(back.pos_m.y() - p.y()) < 1e-6);
  }
}

TEST_CASE("ttc head-on fixture: 7.3 s")
{
  // Stationary pedestrian 75.5 m ahead of a 10 m/s vehicle, encounter
  // radius 2.5 m: (75.5 - 2.5) / 10.
  const KinematicState ped = state(75.5, 0.0, 0.0, 0.0);
  const KinematicState veh = state(0.0, 0.0, 10.0, 0.0);
  const TtcResult result = ttc(ped, veh, 2.5);
  REQUIRE(result.ttc_s.has_value());
  CHECK(std::abs(*result.ttc_s - 7.3) < 1e-6);
}

TEST_CASE("ttc degenerate branches")
{
  // Parallel motion, identical velocities: never closes.
  const TtcResult parallel = ttc(state(0, 0, 3, 0), state(10, 0, 3, 0), 2.5);
  CHECK(!parallel.ttc_s.has_value());
  CHECK(parallel.closest_approach_m == doctest::Approx(10.0));

  // Already inside the encounter radius.
  const TtcResult inside = ttc(state(0.5, 0.5, 1, 0), state(0, 0, 0, 0), 2.5);
  REQUIRE(inside.ttc_s.has_value());
  CHECK(*inside.ttc_s == 0.0);

  // Receding: roots are negative.
  const TtcResult receding = ttc(state(10, 0, 5, 0), state(0, 0, -5, 0), 2.5);
  CHECK(!receding.ttc_s.has_value());

  // Encounter beyond the 8 s horizon.
  const TtcResult beyond = ttc(state(100, 0, 0, 0), state(0, 0, 10.0, 0), 2.5);
  CHECK(!beyond.ttc_s.has_value());

  CHECK_THROWS_AS(ttc(state(0, 0, 0, 0), state(5, 0, 0, 0), 0.0), pass::NonPositiveEpsilon);
  CHECK_THROWS_AS(ttc(state(0, 0, 0, 0), state(5, 0, 0, 0), -1.0), pass::NonPositiveEpsilon);
}

TEST_CASE("ttc agrees with the 1 ms sampling oracle")
{
  std::mt19937 rng(20260501);
  for (int i = 0; i < 300; ++i) {
    const KinematicState ped = random_state(rng);
    const KinematicState veh = random_state(rng);
    const double eps = uniform(rng, 0.5, 4.0);
    const TtcResult analytic = ttc(ped, veh, eps);
    const TtcResult sampled = ttc_oracle(ped, veh, eps);
    CHECK(analytic.ttc_s.has_value() == sampled.ttc_s.has_value());
    if (analytic.ttc_s && sampled.ttc_s) {
      CHECK(std::abs(*analytic.ttc_s - *sampled.ttc_s) <= 0.002);
    }
  }
}

TEST_CASE("ttc invariances")
{
  std::mt19937 rng(31415);
  for (int i = 0; i < 300; ++i) {
    const KinematicState a = random_state(rng);
    const KinematicState b = random_state(rng);
    const double eps = uniform(rng, 0.5, 4.0);

    // Swapping the roles negates dp and dv; the quadratic is unchanged.
    const TtcResult fwd = ttc(a, b, eps);
    const TtcResult rev = ttc(b, a, eps);
    CHECK(fwd.ttc_s.has_value() == rev.ttc_s.has_value());
    if (fwd.ttc_s) CHECK(*fwd.ttc_s == doctest::Approx(*rev.ttc_s).epsilon(1e-12));

    // Translation and Galilean invariance.
    const Eigen::Vector2d dx{uniform(rng, -50, 50), uniform(rng, -50, 50)};
    const Eigen::Vector2d dv{uniform(rng, -5, 5), uniform(rng, -5, 5)};
    KinematicState a2 = a;
    KinematicState b2 = b;
    a2.pos_m += dx;
    b2.pos_m += dx;
    a2.vel_mps += dv;
    b2.vel_mps += dv;
    const TtcResult shifted = ttc(a2, b2, eps);
    CHECK(fwd.ttc_s.has_value() == shifted.ttc_s.has_value());
    if (fwd.ttc_s) CHECK(*fwd.ttc_s == doctest::Approx(*shifted.ttc_s).epsilon(1e-9));

    // At a present root the sampled separation equals the radius.
    if (fwd.ttc_s && *fwd.ttc_s > 0.0) {
      const Eigen::Vector2d dp = a.pos_m - b.pos_m;
      const Eigen::Vector2d dvel = a.vel_mps - b.vel_mps;
      const double sampled = (dp + dvel * (*fwd.ttc_s)).norm();
      CHECK(std::abs(sampled - eps) <= 1e-6 * (1.0 + dp.norm()));
    }

    // Growing the encounter radius never delays first contact.
    const TtcResult wider = ttc(a, b, eps + 1.0);
    if (fwd.ttc_s) {
      REQUIRE(wider.ttc_s.has_value());
      CHECK(*wider.ttc_s <= *fwd.ttc_s + 1e-12);
    }
  }
}

TEST_CASE("evaluate pairs PSMs with BSMs")
{
  using pass::messages::Alert;
  using pass::messages::Bsm;
  using pass::messages::Psm;

  // No vehicles, no alerts.
  Psm lone_psm;
  lone_psm.temp_id = 1;
  CHECK(evaluate({&lone_psm, 1}, {}, kAnchor, 0).empty());

  // The head-on fixture expressed as quantized messages.
  auto make_psm = [&](std::uint32_t id, const Eigen::Vector2d & local, double speed,
                      double heading_deg) {
    Psm psm;
    psm.temp_id = id;
    const GeoPosition geo = local_to_geo(kAnchor, local);
    psm.lat_e7 = static_cast<std::int32_t>(std::llround(geo.lat * 1e7));
    psm.lon_e7 = static_cast<std::int32_t>(std::llround(geo.lon * 1e7));
    psm.speed_u = static_cast<std::uint16_t>(std::llround(speed / 0.02));
    psm.heading_u = static_cast<std::uint16_t>(std::llround(heading_deg / 0.0125)) % 28800;
    return psm;
  };
  auto make_bsm = [&](std::uint32_t id, const Eigen::Vector2d & local, double speed,
                      double heading_deg, double length_m) {
    const GeoPosition geo = local_to_geo(kAnchor, local);
    return pass::messages::build_bsm(geo, speed, heading_deg, length_m, id, 0, 0);
  };

  const Psm ped = make_psm(11, {75.5, 0.0}, 0.0, 0.0);
  const Bsm veh = make_bsm(21, {0.0, 0.0}, 10.0, 90.0, 5.0);  // eastbound, length 5 -> eps 2.5
  const auto alerts = evaluate({&ped, 1}, {&veh, 1}, kAnchor, 777);
  REQUIRE(alerts.size() == 1);
  CHECK(alerts[0].pedestrian_temp_id == 11);
  CHECK(alerts[0].vehicle_temp_id == 21);
  CHECK(alerts[0].timestamp_ms == 777);
  CHECK(std::abs(static_cast<int>(alerts[0].ttc_ms) - 7300) <= 2);

  // 3 pedestrians x 2 vehicles with exactly one colliding pair; verify
  // pair selection against the sampling oracle.
  std::vector<Psm> psms = {
    make_psm(1, {40.0, 55.0}, 1.4, 180.0),   // far north, walking away
    make_psm(2, {60.0, 0.0}, 0.0, 0.0),      // in the vehicle 21 path
    make_psm(3, {-70.0, -40.0}, 1.0, 270.0),
  };
  std::vector<Bsm> bsms = {
    veh,                                      // eastbound through ped 2
    make_bsm(22, {0.0, -90.0}, 8.0, 180.0, 5.0),  // southbound, away from all
  };
  const auto multi = evaluate(psms, bsms, kAnchor, 1000);
  REQUIRE(multi.size() == 1);
  CHECK(multi[0].pedestrian_temp_id == 2);
  CHECK(multi[0].vehicle_temp_id == 21);
  int oracle_hits = 0;
  for (const auto & psm : psms) {
    for (const auto & bsm : bsms) {
      const KinematicState ps =
        to_local(kAnchor, {psm.lat_deg(), psm.lon_deg()}, psm.speed_mps(), psm.heading_deg());
      const KinematicState vs =
        to_local(kAnchor, {bsm.lat_deg(), bsm.lon_deg()}, bsm.speed_mps(), bsm.heading_deg());
      if (ttc_oracle(ps, vs, bsm.length_m() / 2.0).ttc_s.has_value()) ++oracle_hits;
    }
  }
  CHECK(oracle_hits == 1);
}

TEST_CASE("evaluate sorts by ttc, caps at 8000 ms, skips bad pairs")
{
  using pass::messages::Bsm;
  using pass::messages::Psm;

  auto psm_at = [&](std::uint32_t id, double east) {
    Psm psm;
    psm.temp_id = id;
    const GeoPosition geo = local_to_geo(kAnchor, {east, 0.0});
    psm.lat_e7 = static_cast<std::int32_t>(std::llround(geo.lat * 1e7));
    psm.lon_e7 = static_cast<std::int32_t>(std::llround(geo.lon * 1e7));
    return psm;
  };
  const Psm near = psm_at(1, 30.0);
  const Psm far = psm_at(2, 70.0);
  const Bsm veh = pass::messages::build_bsm(kAnchor, 10.0, 90.0, 5.0, 9, 0, 0);

  std::vector<Psm> psms = {far, near};
  EvaluateStats stats;
  const auto alerts = evaluate(psms, {&veh, 1}, kAnchor, 0, &stats);
  REQUIRE(alerts.size() == 2);
  CHECK(alerts[0].ttc_ms < alerts[1].ttc_ms);
  CHECK(alerts[0].pedestrian_temp_id == 1);
  for (const auto & a : alerts) CHECK(a.ttc_ms <= 8000);
  CHECK(stats.pairs_evaluated == 2);
  CHECK(stats.pairs_failed == 0);

  // A pedestrian far outside the projection range fails its pairs without
  // killing the rest.
  Psm outside = psm_at(3, 0.0);
  outside.lat_e7 += 500000;  // ~5.5 km north
  psms.push_back(outside);
  const auto partial = evaluate(psms, {&veh, 1}, kAnchor, 0, &stats);
  CHECK(partial.size() == 2);
  CHECK(stats.pairs_evaluated == 3);
  CHECK(stats.pairs_failed == 1);
}

TEST_CASE("stopping distance formula")
{
  CHECK(stopping_distance(0.0, 3.35) == 0.0);
  CHECK(stopping_distance(17.55, 3.35) == doctest::Approx(45.97).epsilon(1e-3));
  CHECK(stopping_distance(10.0, 3.35) == doctest::Approx(14.925).epsilon(1e-3));
  CHECK_THROWS_AS(stopping_distance(10.0, 0.0), pass::NonPositiveDeceleration);
  CHECK_THROWS_AS(stopping_distance(10.0, -1.0), pass::NonPositiveDeceleration);
}

TEST_CASE("alert gate cooldown")
{
  AlertGate gate(1000);
  CHECK(gate.admit(1, 2, 0));
  CHECK(!gate.admit(1, 2, 500));   // cooling down
  CHECK(gate.admit(1, 3, 500));    // different pair
  CHECK(gate.admit(1, 2, 1000));   // cooldown elapsed
  CHECK(gate.suppressed_count() == 1);
}
