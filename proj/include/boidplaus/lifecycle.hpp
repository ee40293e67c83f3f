#ifndef BOIDPLAUS_LIFECYCLE_HPP
#define BOIDPLAUS_LIFECYCLE_HPP

// Flock bookkeeping bound to tracked objects: creation and removal, boid
// spawning and retirement, and the per-cycle update of every boid.

#include "boidplaus/dubins.hpp"
#include "boidplaus/flocking.hpp"
#include "boidplaus/sensing.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace boidplaus {

struct LifecycleConfig {
  double cycle_duration = 0.08;  // seconds
  double spawn_interval = 0.1;   // seconds
  int target_flock_size = 7;     // N_b
  std::int64_t max_boid_age = 300;  // cycles
  double spawn_jitter = 0.2;     // meters, uniform in each axis

  void validate() const;
};

/// Cycle indices at which a fresh flock spawns its boids until it holds `flock_size`.
std::vector<std::int64_t> spawn_schedule(const LifecycleConfig& config, int flock_size);

struct StepStatistics {
  std::int64_t accepted = 0;
  std::int64_t adjusted = 0;
  std::int64_t kept_previous = 0;
  std::int64_t retired = 0;
};

/// Everything needed to move one boid through a cycle.
struct StepContext {
  RuleWeights weights;
  FovEllipse ellipse;
  ReachabilityPolicy policy;
  double cycle_duration = 0.08;
  bool reachability_filter = true;
  // Per-axis weights act along and across the lead's direction of travel
  // instead of the ego axes. Identical when the lead heads along ego x.
  bool lead_aligned_axes = true;
};

/// Copy of `flock` with every position, velocity and lead state mapped by `transform`.
Flock transformed(const Flock& flock, const RigidTransform& transform);

struct BoidUpdate {
  Boid boid;
  RuleOutputs rules;
  UpdateOutcome outcome = UpdateOutcome::accepted;
};

/// Next state of `observer` given the frozen cycle snapshot. `foreign` excludes `own`.
BoidUpdate update_boid(const Boid& observer, const Flock& own, std::span<const Flock> foreign,
                       const StepContext& context, Rng& rng);

class FlockManager {
 public:
  explicit FlockManager(std::uint64_t run_seed = 0) : run_seed_(run_seed) {}

  const std::map<std::int64_t, Flock>& flocks() const { return flocks_; }
  const Flock* find(std::int64_t id) const;
  std::int64_t cycle() const { return cycle_; }
  std::size_t boid_count() const;

  /// One flock per tracked id: new ids get an empty flock, vanished ids lose theirs.
  void sync_flocks(std::span<const TrackedObject> tracked);

  /// Appends at most one boid per flock whose spawn interval has elapsed.
  void spawn_boids(const LifecycleConfig& config);

  /// Re-expresses all stored states after the reference frame moved.
  void compensate_frame_motion(const RigidTransform& motion);

  /// Moves every boid against the start-of-cycle snapshot, then ages and retires boids.
  StepStatistics step_cycle(const StepContext& context, const LifecycleConfig& config);

 private:
  std::uint64_t run_seed_;
  std::map<std::int64_t, Flock> flocks_;
  std::map<std::int64_t, std::int64_t> last_spawn_cycle_;
  std::int64_t cycle_ = 0;
};

}  // namespace boidplaus

#endif  // BOIDPLAUS_LIFECYCLE_HPP
