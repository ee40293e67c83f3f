#include "boidplaus/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace boidplaus;

namespace {

bool straight_between(const RoadModel& road, double s0, double s1) {
  for (double s = s0; s <= s1; s += 1.0)
    if (road.curvature_at(s) != 0.0) return false;
  return true;
}

}  // namespace

TEST_CASE("default scenario kinematics") {
  const ScenarioConfig c = build_default_scenario();
  CHECK(c.vehicle(0).speed == 25.0);
  CHECK(c.vehicle(1).speed == 33.0);
  CHECK(c.vehicle(2).speed == 25.0);
  CHECK(c.vehicle(3).speed == 23.0);
  CHECK(c.vehicle(2).initial_offset / c.vehicle(2).speed == doctest::Approx(1.2));
  CHECK(c.lateral_position(c.vehicle(1)) - c.lateral_position(c.vehicle(2)) == doctest::Approx(3.2));
  CHECK(c.lateral_position(c.vehicle(2)) - c.lateral_position(c.vehicle(3)) == doctest::Approx(3.7));
  CHECK(c.vehicle(1).initial_offset < 0);
  for (const auto& seg : c.road.segments())
    if (seg.curvature != 0) CHECK(1.0 / std::abs(seg.curvature) >= RoadModel::kMinCurveRadius);
}

TEST_CASE("advance moves 2 m per cycle at 25 m/s") {
  const ScenarioConfig c = build_default_scenario();
  ScenarioState s(c);
  const double before = s.vehicles()[0].driven;
  s.advance(0.08);
  CHECK(s.vehicles()[0].driven - before == doctest::Approx(2.0));
}

TEST_CASE("distance travelled is v t across segment boundaries") {
  const ScenarioConfig c = build_default_scenario();
  ScenarioState s(c);
  for (int k = 0; k < 750; ++k) s.advance(0.08);
  for (std::size_t i = 0; i < c.vehicles.size(); ++i) {
    const auto& v = s.vehicles()[i];
    CHECK(v.driven == doctest::Approx(c.vehicles[i].speed * 60.0).epsilon(1e-12));
    // the arc length along the offset curve agrees with the driven distance
    const double start = c.ego_start_s + c.vehicles[i].initial_offset;
    CHECK(c.road.offset_distance(start, v.s, v.offset) == doctest::Approx(v.driven).epsilon(1e-9));
  }
}

TEST_CASE("road geometry") {
  const RoadModel road = RoadModel::alternating(500, 1000, 400, 3200, 3.5);
  CHECK(road.total_length() >= 3200);
  // arc length equals the polyline length for fine sampling
  double poly = 0;
  Vec2 prev = road.reference_pose(0).position;
  for (double s = 0.5; s <= 2000; s += 0.5) {
    const Vec2 p = road.reference_pose(s).position;
    poly += (p - prev).norm();
    prev = p;
  }
  CHECK(poly == doctest::Approx(2000).epsilon(1e-6));
  // heading is continuous
  for (double s = 1; s < 3000; s += 1)
    CHECK(std::abs(normalize_angle(road.reference_pose(s).heading - road.reference_pose(s - 1).heading)) < 0.01);
  // offset poses sit on the normal
  const Pose ref = road.reference_pose(700);
  const Pose off = road.offset_pose(700, -3.7);
  const Vec2 normal(-std::sin(ref.heading), std::cos(ref.heading));
  CHECK((off.position - (ref.position - 3.7 * normal)).norm() < 1e-9);
  const double s1 = road.advance_along_offset(650, 123.0, 3.2);
  CHECK(road.offset_distance(650, s1, 3.2) == doctest::Approx(123.0).epsilon(1e-9));
  CHECK_THROWS(RoadModel({{100, 1.0 / 100}}, 3.5));
}

TEST_CASE("ground truth frames") {
  const ScenarioConfig c = build_default_scenario();
  const auto frames = generate_ground_truth(c, 0.08);
  CHECK(frames.size() == 750);
  int straight_checks = 0;
  for (const auto& f : frames) {
    CHECK(f.find(0) == nullptr);
    REQUIRE(f.targets.size() == 3);
    const auto* v2 = f.find(2);
    REQUIRE(v2);
    // ID:2 keeps its time gap to the ego along the lane
    if (f.cycle == 0) CHECK(v2->pose.position.norm() == doctest::Approx(30.0).epsilon(1e-9));
    const double ego_s = c.ego_start_s + 25.0 * 0.08 * static_cast<double>(f.cycle);
    const auto* v1 = f.find(1);
    const auto* v3 = f.find(3);
    const bool near = std::abs(v1->pose.position.x()) < 100 && std::abs(v3->pose.position.x()) < 100;
    if (near && straight_between(c.road, ego_s - 120, ego_s + 120)) {
      CHECK(v1->pose.position.y() - v2->pose.position.y() == doctest::Approx(3.2).epsilon(1e-9));
      CHECK(v2->pose.position.y() - v3->pose.position.y() == doctest::Approx(3.7).epsilon(1e-9));
      CHECK(std::abs(v3->velocity.y()) < 1e-9);
      ++straight_checks;
    }
  }
  CHECK(straight_checks > 50);
}

TEST_CASE("ID:1 passes the ego at the relative speed") {
  const ScenarioConfig c = build_default_scenario();
  const auto frames = generate_ground_truth(c, 0.08);
  std::int64_t pass_cycle = -1;
  for (const auto& f : frames)
    if (pass_cycle < 0 && f.find(1)->pose.position.x() >= 0) pass_cycle = f.cycle;
  REQUIRE(pass_cycle > 0);
  // 60 m gap closed at 8 m/s; the curve changes the chord slightly
  CHECK(static_cast<double>(pass_cycle) * 0.08 == doctest::Approx(60.0 / 8.0).epsilon(0.02));
}

TEST_CASE("frame transforms round trip") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-1000, 1000), h(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const Pose ego(u(gen), u(gen), h(gen));
    const Vec2 p(u(gen), u(gen));
    const auto to_ego = RigidTransform::into_frame(ego);
    CHECK((to_ego.inverse().apply_point(to_ego.apply_point(p)) - p).norm() < 1e-9);
    // ego_motion carries previous-frame coordinates to the current frame
    const Pose next(ego.position + Vec2(2, 0.1), ego.heading + 0.002);
    const auto m = ego_motion(ego, next);
    const Vec2 via = m.apply_point(to_ego.apply_point(p));
    const Vec2 direct = RigidTransform::into_frame(next).apply_point(p);
    CHECK((via - direct).norm() < 1e-9);
  }
}

TEST_CASE("scenario validation") {
  ScenarioConfig c = build_default_scenario();
  c.vehicles[1].speed = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = build_default_scenario();
  c.vehicles.push_back(c.vehicles[1]);
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
