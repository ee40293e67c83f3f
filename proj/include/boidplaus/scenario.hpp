#ifndef BOIDPLAUS_SCENARIO_HPP
#define BOIDPLAUS_SCENARIO_HPP

// Ground-truth highway world: a piecewise straight/arc reference line,
// constant-speed lane following, and ego-relative frames.

#include "boidplaus/geometry.hpp"

#include <cstdint>
#include <vector>

namespace boidplaus {

struct RoadSegment {
  double length = 0.0;     // meters
  double curvature = 0.0;  // 1/m, positive turns left
};

/// Reference line along the center lane. Lateral offsets are measured
/// along the left normal; positive lane indices are to the left.
class RoadModel {
 public:
  static constexpr double kMinCurveRadius = 250.0;

  RoadModel() = default;
  RoadModel(std::vector<RoadSegment> segments, double lane_width);

  const std::vector<RoadSegment>& segments() const { return segments_; }
  double lane_width() const { return lane_width_; }
  double total_length() const;

  /// Reference-line pose at arc length s. Beyond the last segment the road continues straight.
  Pose reference_pose(double s) const;

  /// Curvature of the reference line at arc length s.
  double curvature_at(double s) const;

  /// Pose at reference arc length s shifted by `offset` along the left normal.
  Pose offset_pose(double s, double offset) const;

  /// Distance driven along the offset curve between reference arc lengths s0 and s1 (s1 >= s0).
  double offset_distance(double s0, double s1, double offset) const;

  /// Reference arc length reached after driving `distance` along the offset curve from s0.
  double advance_along_offset(double s0, double distance, double offset) const;

  /// Alternating straights and arcs (left, then right) covering at least `min_length`.
  static RoadModel alternating(double straight_length, double arc_radius, double arc_length, double min_length,
                               double lane_width);

 private:
  struct Node {
    double s0;
    Pose pose;
  };
  std::vector<RoadSegment> segments_;
  std::vector<Node> nodes_;  // start of each segment, plus the end of the last
  double lane_width_ = 3.5;

  std::size_t segment_index(double s) const;
};

enum class Lane { right = -1, ego = 0, left = 1 };

struct VehicleSpec {
  std::int64_t id = 0;
  Lane lane = Lane::ego;
  double speed = 25.0;                 // m/s
  double initial_offset = 0.0;         // longitudinal, meters relative to ego along the road
  double lateral_offset_in_lane = 0.0; // meters, left positive
};

struct ScenarioConfig {
  RoadModel road;
  std::vector<VehicleSpec> vehicles;  // vehicles[0] with id ego_id is the ego
  std::int64_t ego_id = 0;
  double ego_start_s = 200.0;  // reference arc length of the ego at t = 0
  double duration = 60.0;      // seconds

  void validate() const;
  const VehicleSpec& vehicle(std::int64_t id) const;
  double lateral_position(const VehicleSpec& v) const;
};

/// Four-vehicle highway scene (ego, ID:1 overtaking left, ID:2 ahead, ID:3 right) on the default alternating road.
ScenarioConfig build_default_scenario();

struct VehicleState {
  std::int64_t id = 0;
  double s = 0.0;         // reference arc length
  double driven = 0.0;    // distance along its own lane, meters
  double offset = 0.0;    // lateral offset from the reference line
  double speed = 0.0;
};

struct VehicleGroundTruth {
  std::int64_t id = 0;
  Pose pose;                       // ego frame
  Vec2 velocity = Vec2::Zero();    // over-ground velocity in ego-frame axes, m/s
};

struct GroundTruthFrame {
  std::int64_t cycle = 0;
  Pose ego_world;                          // ego pose in the world frame
  std::vector<VehicleGroundTruth> targets; // every vehicle except the ego

  const VehicleGroundTruth* find(std::int64_t id) const;
};

class ScenarioState {
 public:
  explicit ScenarioState(const ScenarioConfig& config);

  const std::vector<VehicleState>& vehicles() const { return vehicles_; }
  std::int64_t cycle() const { return cycle_; }
  double time() const { return time_; }

  /// Moves every vehicle v * dt along its lane.
  void advance(double cycle_duration);

  Pose world_pose(const VehicleState& v) const;
  Vec2 world_velocity(const VehicleState& v) const;
  GroundTruthFrame frame() const;

 private:
  const ScenarioConfig* config_;
  std::vector<VehicleState> vehicles_;
  std::vector<double> start_s_;
  std::int64_t cycle_ = 0;
  double time_ = 0.0;
};

/// Rigid transform carrying ego-frame quantities of `previous` into the ego frame of `current`.
RigidTransform ego_motion(const Pose& previous_ego_world, const Pose& current_ego_world);

/// All frames for cycles 0..n-1.
std::vector<GroundTruthFrame> generate_ground_truth(const ScenarioConfig& config, double cycle_duration);

}  // namespace boidplaus

#endif  // BOIDPLAUS_SCENARIO_HPP
