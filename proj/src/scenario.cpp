#include "boidplaus/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace boidplaus {
namespace {

Pose advance_along(const Pose& start, double curvature, double u) {
  const double h0 = start.heading;
  if (curvature == 0.0) return {start.position + u * start.direction(), h0};
  const double h1 = h0 + curvature * u;
  const Vec2 delta((std::sin(h1) - std::sin(h0)) / curvature, -(std::cos(h1) - std::cos(h0)) / curvature);
  return {start.position + delta, h1};
}

}  // namespace

RoadModel::RoadModel(std::vector<RoadSegment> segments, double lane_width)
    : segments_(std::move(segments)), lane_width_(lane_width) {
  if (!(lane_width_ > 0)) throw std::invalid_argument("road: lane_width must be positive");
  nodes_.reserve(segments_.size() + 1);
  Node node{0.0, Pose(0.0, 0.0, 0.0)};
  nodes_.push_back(node);
  for (const auto& seg : segments_) {
    if (!(seg.length > 0)) throw std::invalid_argument("road: segment length must be positive");
    if (std::abs(seg.curvature) * kMinCurveRadius > 1.0)
      throw std::invalid_argument("road: curve radius below " + std::to_string(kMinCurveRadius) + " m");
    node = Node{node.s0 + seg.length, advance_along(node.pose, seg.curvature, seg.length)};
    nodes_.push_back(node);
  }
}

double RoadModel::total_length() const { return nodes_.empty() ? 0.0 : nodes_.back().s0; }

std::size_t RoadModel::segment_index(double s) const {
  // index of the segment containing s; segments_.size() means "past the end"
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s,
                                   [](double value, const Node& n) { return value < n.s0; });
  if (it == nodes_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(nodes_.begin(), it) - 1);
}

Pose RoadModel::reference_pose(double s) const {
  if (nodes_.empty()) return {s, 0.0, 0.0};
  if (s < 0.0) return advance_along(nodes_.front().pose, 0.0, s);
  const std::size_t k = segment_index(s);
  if (k >= segments_.size()) return advance_along(nodes_.back().pose, 0.0, s - nodes_.back().s0);
  return advance_along(nodes_[k].pose, segments_[k].curvature, s - nodes_[k].s0);
}

double RoadModel::curvature_at(double s) const {
  if (s < 0.0 || segments_.empty()) return 0.0;
  const std::size_t k = segment_index(s);
  return k < segments_.size() ? segments_[k].curvature : 0.0;
}

Pose RoadModel::offset_pose(double s, double offset) const {
  const Pose ref = reference_pose(s);
  const Vec2 normal(-std::sin(ref.heading), std::cos(ref.heading));
  return {ref.position + offset * normal, ref.heading};
}

double RoadModel::offset_distance(double s0, double s1, double offset) const {
  double total = 0.0;
  double s = s0;
  while (s < s1) {
    double end = s1;
    double curvature = 0.0;
    if (s >= 0.0 && !segments_.empty()) {
      const std::size_t k = segment_index(s);
      if (k < segments_.size()) {
        end = std::min(s1, nodes_[k + 1].s0);
        curvature = segments_[k].curvature;
      }
    } else if (s < 0.0) {
      end = std::min(s1, 0.0);
    }
    total += (1.0 - curvature * offset) * (end - s);
    s = end;
  }
  return total;
}

double RoadModel::advance_along_offset(double s0, double distance, double offset) const {
  double s = s0;
  double remaining = distance;
  while (remaining > 0.0) {
    double end = std::numeric_limits<double>::infinity();
    double curvature = 0.0;
    if (s < 0.0) {
      end = 0.0;
    } else if (!segments_.empty()) {
      const std::size_t k = segment_index(s);
      if (k < segments_.size()) {
        end = nodes_[k + 1].s0;
        curvature = segments_[k].curvature;
      }
    }
    const double factor = 1.0 - curvature * offset;
    const double available = factor * (end - s);
    if (available >= remaining) return s + remaining / factor;
    remaining -= available;
    s = end;
  }
  return s;
}

RoadModel RoadModel::alternating(double straight_length, double arc_radius, double arc_length, double min_length,
                                 double lane_width) {
  std::vector<RoadSegment> segments;
  double total = 0.0;
  double turn = 1.0;
  while (total < min_length) {
    segments.push_back({straight_length, 0.0});
    segments.push_back({arc_length, turn / arc_radius});
    total += straight_length + arc_length;
    turn = -turn;
  }
  return RoadModel(std::move(segments), lane_width);
}

void ScenarioConfig::validate() const {
  if (!(duration > 0)) throw std::invalid_argument("scenario: duration must be positive");
  std::set<std::int64_t> ids;
  bool has_ego = false;
  for (const auto& v : vehicles) {
    if (!ids.insert(v.id).second) throw std::invalid_argument("scenario: duplicate vehicle id " + std::to_string(v.id));
    if (!(v.speed > 0)) throw std::invalid_argument("scenario: vehicle " + std::to_string(v.id) + " speed must be positive");
    has_ego = has_ego || v.id == ego_id;
  }
  if (!has_ego) throw std::invalid_argument("scenario: ego vehicle id " + std::to_string(ego_id) + " missing");
}

const VehicleSpec& ScenarioConfig::vehicle(std::int64_t id) const {
  for (const auto& v : vehicles)
    if (v.id == id) return v;
  throw std::out_of_range("scenario: unknown vehicle id " + std::to_string(id));
}

double ScenarioConfig::lateral_position(const VehicleSpec& v) const {
  return static_cast<double>(static_cast<int>(v.lane)) * road.lane_width() + v.lateral_offset_in_lane;
}

ScenarioConfig build_default_scenario() {
  ScenarioConfig config;
  config.road = RoadModel::alternating(500.0, 1000.0, 400.0, 3200.0, 3.5);
  config.ego_id = 0;
  config.ego_start_s = 200.0;
  config.duration = 60.0;
  // d12 = 3.2 m between ID:1 and ID:2, d23 = 3.7 m between ID:2 and ID:3
  config.vehicles = {
      {0, Lane::ego, 25.0, 0.0, 0.0},
      {1, Lane::left, 33.0, -60.0, -0.3},
      {2, Lane::ego, 25.0, 30.0, 0.0},
      {3, Lane::right, 23.0, 40.0, -0.2},
  };
  return config;
}

const VehicleGroundTruth* GroundTruthFrame::find(std::int64_t id) const {
  for (const auto& t : targets)
    if (t.id == id) return &t;
  return nullptr;
}

ScenarioState::ScenarioState(const ScenarioConfig& config) : config_(&config) {
  config.validate();
  for (const auto& spec : config.vehicles) {
    VehicleState v;
    v.id = spec.id;
    v.s = config.ego_start_s + spec.initial_offset;
    v.offset = config.lateral_position(spec);
    v.speed = spec.speed;
    start_s_.push_back(v.s);
    vehicles_.push_back(v);
  }
}

void ScenarioState::advance(double cycle_duration) {
  ++cycle_;
  time_ = static_cast<double>(cycle_) * cycle_duration;
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    auto& v = vehicles_[i];
    v.driven = v.speed * time_;
    v.s = config_->road.advance_along_offset(start_s_[i], v.driven, v.offset);
  }
}

Pose ScenarioState::world_pose(const VehicleState& v) const { return config_->road.offset_pose(v.s, v.offset); }

Vec2 ScenarioState::world_velocity(const VehicleState& v) const { return v.speed * world_pose(v).direction(); }

GroundTruthFrame ScenarioState::frame() const {
  GroundTruthFrame frame;
  frame.cycle = cycle_;
  for (const auto& v : vehicles_)
    if (v.id == config_->ego_id) frame.ego_world = world_pose(v);
  const RigidTransform to_ego = RigidTransform::into_frame(frame.ego_world);
  for (const auto& v : vehicles_) {
    if (v.id == config_->ego_id) continue;
    frame.targets.push_back({v.id, to_ego.apply(world_pose(v)), to_ego.apply_vector(world_velocity(v))});
  }
  return frame;
}

RigidTransform ego_motion(const Pose& previous_ego_world, const Pose& current_ego_world) {
  const RigidTransform to_world = RigidTransform::into_frame(previous_ego_world).inverse();
  const RigidTransform to_current = RigidTransform::into_frame(current_ego_world);
  RigidTransform t;
  t.angle = to_world.angle + to_current.angle;
  t.translation = rotation(to_current.angle) * to_world.translation + to_current.translation;
  return t;
}

std::vector<GroundTruthFrame> generate_ground_truth(const ScenarioConfig& config, double cycle_duration) {
  if (!(cycle_duration > 0)) throw std::invalid_argument("scenario: cycle duration must be positive");
  const auto cycles = static_cast<std::int64_t>(std::llround(config.duration / cycle_duration));
  ScenarioState state(config);
  std::vector<GroundTruthFrame> frames;
  frames.reserve(static_cast<std::size_t>(cycles));
  for (std::int64_t k = 0; k < cycles; ++k) {
    if (k > 0) state.advance(cycle_duration);
    frames.push_back(state.frame());
  }
  return frames;
}

}  // namespace boidplaus
