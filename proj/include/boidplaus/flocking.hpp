#ifndef BOIDPLAUS_FLOCKING_HPP
#define BOIDPLAUS_FLOCKING_HPP

// Boid and flock state plus the steering rules.

#include "boidplaus/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace boidplaus {

template <typename Scalar>
struct BoidT {
  std::int64_t id = 0;
  Vec2T<Scalar> position = Vec2T<Scalar>::Zero();
  Vec2T<Scalar> velocity = Vec2T<Scalar>::Zero();  // meters per second
  std::int64_t age_cycles = 0;

  Scalar heading() const { return heading_of(velocity); }
};

using Boid = BoidT<double>;

/// Lead vehicle state as seen by a flock. Velocity is in meters per second.
template <typename Scalar>
struct LeadStateT {
  Vec2T<Scalar> position = Vec2T<Scalar>::Zero();
  Vec2T<Scalar> velocity = Vec2T<Scalar>::Zero();
};

using LeadState = LeadStateT<double>;

template <typename Scalar>
struct FlockT {
  std::int64_t flock_id = 0;
  std::vector<BoidT<Scalar>> boids;
  LeadStateT<Scalar> lead;                          // current cycle
  std::optional<LeadStateT<Scalar>> previous_lead;  // previous cycle, if tracked then
  std::int64_t next_boid_id = 0;
};

using Flock = FlockT<double>;

/// Per-axis rule weights; products with rule outputs are componentwise.
template <typename Scalar>
struct RuleWeightsT {
  Vec2T<Scalar> separation{0.15, 0.07};
  Vec2T<Scalar> cohesion{0.4, 0.4};
  Vec2T<Scalar> leader_cohesion{0.4, 0.2};
  Vec2T<Scalar> alignment{0.3, 0.3};
  Vec2T<Scalar> leader_alignment{0.8, 0.8};
  Scalar repulsion_gain = 1.5;  // meters

  void validate() const {
    for (const auto* w : {&separation, &cohesion, &leader_cohesion, &alignment, &leader_alignment})
      if ((w->array() < 0).any() || !w->allFinite())
        throw std::invalid_argument("rule weights must be finite and non-negative");
    if (!(repulsion_gain > 0) || !std::isfinite(repulsion_gain))
      throw std::invalid_argument("repulsion gain must be positive");
  }
};

using RuleWeights = RuleWeightsT<double>;

/// Perceived centers of visible foreign flocks, one column per flock.
template <typename Scalar>
using NeighborFlockCentersT = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

using NeighborFlockCenters = NeighborFlockCentersT<double>;

template <typename Scalar>
struct RuleOutputsT {
  Vec2T<Scalar> cohesion = Vec2T<Scalar>::Zero();
  Vec2T<Scalar> leader_cohesion = Vec2T<Scalar>::Zero();
  Vec2T<Scalar> alignment = Vec2T<Scalar>::Zero();
  Vec2T<Scalar> leader_alignment = Vec2T<Scalar>::Zero();
  Vec2T<Scalar> separation = Vec2T<Scalar>::Zero();
  Vec2T<Scalar> repulsion = Vec2T<Scalar>::Zero();  // already weighted
};

using RuleOutputs = RuleOutputsT<double>;

/// Peers of `observer` (matched by id) that lie inside its view ellipse.
template <typename Scalar>
std::vector<BoidT<Scalar>> visible_set(const BoidT<Scalar>& observer,
                                       std::span<const BoidT<Scalar>> flock,
                                       const FovEllipseT<Scalar>& ellipse) {
  std::vector<BoidT<Scalar>> visible;
  const Scalar heading = observer.heading();
  for (const auto& other : flock) {
    if (other.id == observer.id) continue;
    if (ellipse_contains(observer.position, heading, ellipse, other.position)) visible.push_back(other);
  }
  return visible;
}

template <typename Scalar>
Vec2T<Scalar> rule_separation(const BoidT<Scalar>& observer, std::span<const BoidT<Scalar>> visible) {
  Vec2T<Scalar> sum = Vec2T<Scalar>::Zero();
  for (const auto& other : visible) sum += observer.position - other.position;
  return sum;
}

template <typename Scalar>
Vec2T<Scalar> rule_cohesion(const BoidT<Scalar>& observer, std::span<const BoidT<Scalar>> visible) {
  if (visible.empty()) return Vec2T<Scalar>::Zero();
  Vec2T<Scalar> center = Vec2T<Scalar>::Zero();
  for (const auto& other : visible) center += other.position;
  center /= static_cast<Scalar>(visible.size());
  return center - observer.position;
}

template <typename Scalar>
Vec2T<Scalar> rule_leader_cohesion(const BoidT<Scalar>& observer, const Vec2T<Scalar>& lead_position) {
  return lead_position - observer.position;
}

template <typename Scalar>
Vec2T<Scalar> rule_alignment(const BoidT<Scalar>& observer, std::span<const BoidT<Scalar>> visible) {
  if (visible.empty()) return Vec2T<Scalar>::Zero();
  Vec2T<Scalar> mean_velocity = Vec2T<Scalar>::Zero();
  for (const auto& other : visible) mean_velocity += other.velocity;
  mean_velocity /= static_cast<Scalar>(visible.size());
  return mean_velocity - observer.velocity;
}

/// Velocity matching toward the lead.
template <typename Scalar>
Vec2T<Scalar> rule_leader_alignment(const BoidT<Scalar>& observer, const Vec2T<Scalar>& lead_velocity) {
  return lead_velocity - observer.velocity;
}

/// Mean position of the visible members of each foreign flock; flocks with
/// no visible member contribute no column.
template <typename Scalar>
NeighborFlockCentersT<Scalar> neighbor_flock_centers(const BoidT<Scalar>& observer,
                                                     std::span<const FlockT<Scalar>> foreign_flocks,
                                                     const FovEllipseT<Scalar>& ellipse) {
  std::vector<Vec2T<Scalar>> centers;
  const Scalar heading = observer.heading();
  for (const auto& flock : foreign_flocks) {
    Vec2T<Scalar> sum = Vec2T<Scalar>::Zero();
    std::size_t count = 0;
    for (const auto& other : flock.boids) {
      if (ellipse_contains(observer.position, heading, ellipse, other.position)) {
        sum += other.position;
        ++count;
      }
    }
    if (count > 0) centers.push_back(sum / static_cast<Scalar>(count));
  }
  NeighborFlockCentersT<Scalar> out(2, static_cast<Eigen::Index>(centers.size()));
  for (std::size_t k = 0; k < centers.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = centers[k];
  return out;
}

/// Weighted inter-flock repulsion W * r, where r_k = exp(g - |p - c_k|) and
/// W has a zero x row and a y row of sgn(p_y - c_k,y).
template <typename Scalar>
Vec2T<Scalar> rule_flock_repulsion(const BoidT<Scalar>& observer, const NeighborFlockCentersT<Scalar>& centers,
                                   Scalar repulsion_gain) {
  const Eigen::Index n = centers.cols();
  if (n == 0) return Vec2T<Scalar>::Zero();
  const auto offsets = (-centers).colwise() + observer.position;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> magnitudes =
      (repulsion_gain - offsets.colwise().norm().array()).exp().matrix().transpose();
  Eigen::Matrix<Scalar, 2, Eigen::Dynamic> weights = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>::Zero(2, n);
  for (Eigen::Index k = 0; k < n; ++k) weights(1, k) = sign(offsets(1, k));
  return weights * magnitudes;
}

template <typename Scalar>
Vec2T<Scalar> velocity_update(const BoidT<Scalar>& observer, const RuleOutputsT<Scalar>& rules,
                              const RuleWeightsT<Scalar>& weights) {
  return observer.velocity + weights.cohesion.cwiseProduct(rules.cohesion) +
         weights.leader_cohesion.cwiseProduct(rules.leader_cohesion) +
         weights.alignment.cwiseProduct(rules.alignment) +
         weights.leader_alignment.cwiseProduct(rules.leader_alignment) +
         weights.separation.cwiseProduct(rules.separation) + rules.repulsion;
}

template <typename Scalar>
Vec2T<Scalar> position_update(const BoidT<Scalar>& observer, const Vec2T<Scalar>& new_velocity, Scalar step = 1) {
  return observer.position + step * new_velocity;
}

}  // namespace boidplaus

#endif  // BOIDPLAUS_FLOCKING_HPP
