#ifndef BOIDPLAUS_DUBINS_HPP
#define BOIDPLAUS_DUBINS_HPP

// Shortest forward-only paths under a minimum turning radius, and the
// reachability filter applied to proposed boid updates.

#include "boidplaus/geometry.hpp"
#include "boidplaus/random.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace boidplaus {

enum class DubinsWord { LSL, RSR, LSR, RSL, RLR, LRL };

inline constexpr std::array<DubinsWord, 6> kDubinsWords = {DubinsWord::LSL, DubinsWord::RSR, DubinsWord::LSR,
                                                           DubinsWord::RSL, DubinsWord::RLR, DubinsWord::LRL};

std::string_view to_string(DubinsWord word);

enum class SegmentKind { left, straight, right };

std::array<SegmentKind, 3> segment_kinds(DubinsWord word);

struct DubinsPath {
  Pose start;
  DubinsWord word = DubinsWord::LSL;
  std::array<double, 3> segment_lengths{};  // meters
  double radius = 1.0;
  double total_length = 0.0;
};

/// The shortest path of a single word, if the word admits a solution.
std::optional<DubinsPath> dubins_word_path(const Pose& start, const Pose& target, double radius, DubinsWord word);

/// Shortest path over all six words; ties resolve in word order.
DubinsPath shortest_dubins_path(const Pose& start, const Pose& target, double radius);

/// Pose after travelling `distance` meters along the path.
Pose sample_path(const DubinsPath& path, double distance);

/// Polyline of poses every `step` meters, always including both end points.
std::vector<Pose> sample_polyline(const DubinsPath& path, double step);

/// r = v^2 / a_lat, floored at `radius_floor`. Throws on non-positive acceleration.
double min_turn_radius(double speed, double max_lateral_accel, double radius_floor = 1.0);

enum class AdjustmentMode { random_disc, line_search };

struct ReachabilityPolicy {
  AdjustmentMode mode = AdjustmentMode::line_search;
  double detour_factor = 1.2;            // kappa
  int max_iterations = 10;
  double position_perturbation_radius = 0.5;  // meters
  double heading_perturbation = 0.2;          // radians
  double min_reference_length = 0.1;          // meters, guards near-coincident poses
  double max_lateral_accel = 9.0;             // m/s^2
  double radius_floor = 1.0;                  // meters

  void validate() const;
};

/// Length of the shortest path within detour_factor times the endpoint distance.
bool is_reachable(const Pose& start, const Pose& target, double radius, const ReachabilityPolicy& policy);

enum class UpdateOutcome { accepted, adjusted, kept_previous };

std::string_view to_string(UpdateOutcome outcome);

struct ConstrainedUpdate {
  Pose pose;
  Vec2 velocity = Vec2::Zero();
  UpdateOutcome outcome = UpdateOutcome::accepted;
};

/// Filters a proposed pose update. In line_search mode an unreachable proposal is
/// pulled back toward `previous_velocity` by bisection (max_iterations halvings),
/// keeping the largest reachable fraction. In random_disc mode it is perturbed up
/// to max_iterations times. When nothing is reachable the current pose is advanced
/// by `previous_velocity`. Velocities share the position units per step.
ConstrainedUpdate constrain_update(const Pose& current, const Vec2& previous_velocity, const Pose& proposed,
                                   const Vec2& proposed_velocity, double radius, const ReachabilityPolicy& policy,
                                   Rng& rng);

}  // namespace boidplaus

#endif  // BOIDPLAUS_DUBINS_HPP
