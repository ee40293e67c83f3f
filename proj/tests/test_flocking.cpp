#include "boidplaus/flocking.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace boidplaus;

namespace {

Boid boid_at(double x, double y, double vx = 1, double vy = 0, std::int64_t id = 0) {
  Boid b;
  b.id = id;
  b.position = Vec2(x, y);
  b.velocity = Vec2(vx, vy);
  return b;
}

bool same(const Vec2& a, const Vec2& b) { return (a - b).cwiseAbs().maxCoeff() <= 1e-12; }

}  // namespace

TEST_CASE("visible_set") {
  const FovEllipse e(10, 2);
  std::vector<Boid> flock{boid_at(0, 0, 1, 0, 0)};
  CHECK(visible_set<double>(flock[0], flock, e).empty());
  flock.push_back(boid_at(5, 0, 1, 0, 1));
  flock.push_back(boid_at(0, 3, 1, 0, 2));
  const auto v = visible_set<double>(flock[0], flock, e);
  REQUIRE(v.size() == 1);
  CHECK(v[0].id == 1);
  CHECK(visible_set<double>(flock[0], flock, FovEllipse(1e6, 1e6)).size() == 2);
}

TEST_CASE("intra-flock rule examples") {
  const Boid o = boid_at(0, 0, 0, 0);
  const std::vector<Boid> none;
  CHECK(rule_separation<double>(o, none) == Vec2::Zero());
  CHECK(rule_cohesion<double>(o, none) == Vec2::Zero());
  CHECK(rule_alignment<double>(o, none) == Vec2::Zero());

  const std::vector<Boid> sym{boid_at(1, 0), boid_at(-1, 0)};
  CHECK(rule_separation<double>(o, sym) == Vec2::Zero());
  const std::vector<Boid> one{boid_at(2, 1)};
  CHECK(rule_separation<double>(o, one) == Vec2(-2, -1));

  const std::vector<Boid> pair{boid_at(2, 0), boid_at(4, 0)};
  CHECK(rule_cohesion<double>(o, pair) == Vec2(3, 0));
  CHECK(rule_cohesion<double>(boid_at(3, 0), pair) == Vec2::Zero());

  CHECK(rule_leader_cohesion(boid_at(10, 0), Vec2(10, 0)) == Vec2::Zero());
  CHECK(rule_leader_cohesion(boid_at(4, -1), Vec2(10, 0)) == Vec2(6, 1));
  CHECK(rule_leader_cohesion(boid_at(12, 0), Vec2(10, 0)) == Vec2(-2, 0));

  const std::vector<Boid> vels{boid_at(0, 0, 2, 0), boid_at(0, 0, 0, 2)};
  CHECK(rule_alignment<double>(boid_at(0, 0, 1, 1), vels) == Vec2::Zero());
  const std::vector<Boid> v1{boid_at(0, 0, 2, 0)};
  CHECK(rule_alignment<double>(boid_at(0, 0, 0, 0), v1) == Vec2(2, 0));

  CHECK(rule_leader_alignment(boid_at(0, 0, 20, 1), Vec2(25, 0)) == Vec2(5, -1));
}

TEST_CASE("neighbor flock centers and repulsion examples") {
  const FovEllipse e(30, 4);
  const Boid o = boid_at(10, 4, 1, 0);
  std::vector<Flock> foreign(1);
  foreign[0].boids = {boid_at(10, 3), boid_at(12, 5), boid_at(200, 0)};
  const auto centers = neighbor_flock_centers<double>(o, foreign, e);
  REQUIRE(centers.cols() == 1);
  CHECK(same(centers.col(0), Vec2(11, 4)));

  std::vector<Flock> two(2);
  two[0].boids = {boid_at(5, 3.5)};
  two[1].boids = {boid_at(5, -3.5)};
  CHECK(neighbor_flock_centers<double>(boid_at(0, 0), two, e).cols() == 2);

  std::vector<Flock> far(1);
  far[0].boids = {boid_at(100, 0)};
  CHECK(neighbor_flock_centers<double>(boid_at(0, 0), far, e).cols() == 0);

  CHECK(rule_flock_repulsion(o, NeighborFlockCenters(2, 0), 1.5) == Vec2::Zero());
  NeighborFlockCenters c(2, 1);
  c << 0, -1.5;
  const Vec2 r = rule_flock_repulsion(boid_at(0, 2), c, 1.5);
  CHECK(r.x() == 0.0);
  CHECK(r.y() == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  c << 0, 1.5;
  const Vec2 r2 = rule_flock_repulsion(boid_at(0, 0), c, 1.5);
  CHECK(r2.x() == 0.0);
  CHECK(r2.y() == doctest::Approx(-1.0));
}

TEST_CASE("velocity and position update examples") {
  const Boid b = boid_at(0, 0, 2, 0);
  RuleWeights w;
  RuleOutputs zero;
  CHECK(velocity_update(b, zero, w) == b.velocity);
  RuleOutputs r;
  r.cohesion = Vec2(1, 0.5);
  w.cohesion = Vec2(0.4, 0.4);
  const Vec2 v = velocity_update(b, r, w);
  CHECK(v.x() == doctest::Approx(2.4));
  CHECK(v.y() == doctest::Approx(0.2));

  CHECK(position_update(boid_at(0, 0), Vec2(2, 0.1)) == Vec2(2, 0.1));
  CHECK(position_update(boid_at(7, -3), Vec2(0, 0)) == Vec2(7, -3));
  const Vec2 p = position_update(boid_at(100, 3.5), Vec2(1.8, -0.05));
  CHECK(p.x() == doctest::Approx(101.8));
  CHECK(p.y() == doctest::Approx(3.45));
  // with a time step, velocities are per second
  CHECK(same(position_update(boid_at(1, 1), Vec2(25, -1), 0.08), Vec2(3, 0.92)));
}

TEST_CASE("leader velocity matching off reproduces the plain update") {
  RuleWeights w;
  w.leader_alignment = Vec2::Zero();
  RuleOutputs r;
  r.leader_alignment = Vec2(5, 5);
  const Boid b = boid_at(0, 0, 3, 1);
  CHECK(velocity_update(b, r, w) == b.velocity);
}

TEST_CASE("rule weights validation") {
  RuleWeights w;
  CHECK_NOTHROW(w.validate());
  w.separation = Vec2(-0.1, 0);
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w = RuleWeights{};
  w.repulsion_gain = 0;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}

TEST_CASE("rules agree with brute force on random flocks") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> pos(-20, 20), vel(-30, 30);
  std::uniform_int_distribution<int> count(1, 10);
  const FovEllipse e(30, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = count(gen);
    std::vector<Boid> flock;
    std::vector<oracle::B> ref;
    for (int i = 0; i < n; ++i) {
      flock.push_back(boid_at(pos(gen), pos(gen) / 5, vel(gen), vel(gen) / 10, i));
      ref.push_back({{flock.back().position.x(), flock.back().position.y()},
                     {flock.back().velocity.x(), flock.back().velocity.y()}});
    }
    for (int i = 0; i < n; ++i) {
      const auto vis = visible_set<double>(flock[static_cast<std::size_t>(i)], flock, e);
      const auto nb = oracle::neighbours(ref, static_cast<std::size_t>(i), 30, 4);
      REQUIRE(vis.size() == nb.size());
      const auto& o = flock[static_cast<std::size_t>(i)];
      const auto& ro = ref[static_cast<std::size_t>(i)];
      const oracle::P2 s = oracle::separation(ro, nb), c = oracle::cohesion(ro, nb), a = oracle::alignment(ro, nb);
      CHECK(same(rule_separation<double>(o, vis), Vec2(s.x, s.y)));
      CHECK(same(rule_cohesion<double>(o, vis), Vec2(c.x, c.y)));
      CHECK(same(rule_alignment<double>(o, vis), Vec2(a.x, a.y)));
    }
  }
}
