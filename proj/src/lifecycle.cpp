#include "boidplaus/lifecycle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace boidplaus {
namespace {

// Elapsed-time comparisons are made on cycle counts scaled by the cycle
// duration; the slack absorbs representation error of e.g. 0.08 and 0.1.
constexpr double kTimeSlack = 1e-9;

bool spawn_due(std::optional<std::int64_t> last_spawn, std::int64_t cycle, const LifecycleConfig& config) {
  if (!last_spawn) return true;
  const double elapsed = static_cast<double>(cycle - *last_spawn) * config.cycle_duration;
  return elapsed + kTimeSlack >= config.spawn_interval;
}

}  // namespace

void LifecycleConfig::validate() const {
  if (!(cycle_duration > 0)) throw std::invalid_argument("lifecycle: cycle_duration must be positive");
  if (!(spawn_interval > 0)) throw std::invalid_argument("lifecycle: spawn_interval must be positive");
  if (target_flock_size < 1) throw std::invalid_argument("lifecycle: target_flock_size must be at least 1");
  if (max_boid_age < 1) throw std::invalid_argument("lifecycle: max_boid_age must be at least 1");
  if (!(spawn_jitter >= 0)) throw std::invalid_argument("lifecycle: spawn_jitter must be non-negative");
}

std::vector<std::int64_t> spawn_schedule(const LifecycleConfig& config, int flock_size) {
  std::vector<std::int64_t> cycles;
  std::optional<std::int64_t> last;
  for (std::int64_t cycle = 0; static_cast<int>(cycles.size()) < flock_size; ++cycle) {
    if (spawn_due(last, cycle, config)) {
      cycles.push_back(cycle);
      last = cycle;
    }
  }
  return cycles;
}

BoidUpdate update_boid(const Boid& observer, const Flock& own, std::span<const Flock> foreign,
                       const StepContext& context, Rng& rng) {
  BoidUpdate update;
  const std::vector<Boid> visible = visible_set<double>(observer, own.boids, context.ellipse);
  const std::span<const Boid> peers(visible);

  update.rules.cohesion = rule_cohesion(observer, peers);
  update.rules.leader_cohesion = rule_leader_cohesion(observer, own.lead.position);
  update.rules.alignment = rule_alignment(observer, peers);
  update.rules.leader_alignment = rule_leader_alignment(observer, own.lead.velocity);
  update.rules.separation = rule_separation(observer, peers);
  const NeighborFlockCenters centers = neighbor_flock_centers(observer, foreign, context.ellipse);
  update.rules.repulsion = rule_flock_repulsion(observer, centers, context.weights.repulsion_gain);

  const Vec2 velocity = velocity_update(observer, update.rules, context.weights);
  const double dt = context.cycle_duration;
  const Vec2 position = position_update(observer, velocity, dt);

  update.boid = observer;
  if (!context.reachability_filter) {
    update.boid.position = position;
    update.boid.velocity = velocity;
    return update;
  }

  const double speed = observer.velocity.norm();
  const double radius =
      min_turn_radius(speed, context.policy.max_lateral_accel, context.policy.radius_floor);
  const Pose current(observer.position, heading_of(observer.velocity));
  const Pose proposed(position, heading_of(velocity));
  const ConstrainedUpdate constrained =
      constrain_update(current, observer.velocity * dt, proposed, velocity * dt, radius, context.policy, rng);
  update.boid.position = constrained.pose.position;
  update.boid.velocity = constrained.velocity / dt;
  update.outcome = constrained.outcome;
  return update;
}

Flock transformed(const Flock& flock, const RigidTransform& transform) {
  Flock out = flock;
  for (auto& boid : out.boids) {
    boid.position = transform.apply_point(boid.position);
    boid.velocity = transform.apply_vector(boid.velocity);
  }
  auto map_lead = [&](LeadState& lead) {
    lead.position = transform.apply_point(lead.position);
    lead.velocity = transform.apply_vector(lead.velocity);
  };
  map_lead(out.lead);
  if (out.previous_lead) map_lead(*out.previous_lead);
  return out;
}

const Flock* FlockManager::find(std::int64_t id) const {
  const auto it = flocks_.find(id);
  return it == flocks_.end() ? nullptr : &it->second;
}

std::size_t FlockManager::boid_count() const {
  std::size_t n = 0;
  for (const auto& [id, flock] : flocks_) n += flock.boids.size();
  return n;
}

void FlockManager::sync_flocks(std::span<const TrackedObject> tracked) {
  std::set<std::int64_t> alive;
  for (const auto& obj : tracked) {
    if (!alive.insert(obj.id).second) throw std::invalid_argument("sync_flocks: duplicate tracked id");
    const LeadState lead{obj.position, obj.velocity};
    auto it = flocks_.find(obj.id);
    if (it == flocks_.end()) {
      Flock flock;
      flock.flock_id = obj.id;
      flock.lead = lead;
      flocks_.emplace(obj.id, std::move(flock));
    } else {
      it->second.previous_lead = it->second.lead;
      it->second.lead = lead;
    }
  }
  std::erase_if(flocks_, [&](const auto& entry) { return !alive.contains(entry.first); });
  std::erase_if(last_spawn_cycle_, [&](const auto& entry) { return !alive.contains(entry.first); });
}

void FlockManager::spawn_boids(const LifecycleConfig& config) {
  for (auto& [id, flock] : flocks_) {
    if (static_cast<int>(flock.boids.size()) >= config.target_flock_size) continue;
    const auto last = last_spawn_cycle_.find(id);
    const std::optional<std::int64_t> last_cycle =
        last == last_spawn_cycle_.end() ? std::nullopt : std::optional<std::int64_t>(last->second);
    if (!spawn_due(last_cycle, cycle_, config)) continue;

    const LeadState& source = flock.lead;
    Boid boid;
    boid.id = flock.next_boid_id++;
    Rng rng(derive_seed({run_seed_, static_cast<std::uint64_t>(Stream::spawn), static_cast<std::uint64_t>(id),
                         static_cast<std::uint64_t>(boid.id), static_cast<std::uint64_t>(cycle_)}));
    const double jx = rng.uniform(-config.spawn_jitter, config.spawn_jitter);
    const double jy = rng.uniform(-config.spawn_jitter, config.spawn_jitter);
    boid.position = source.position + Vec2(jx, jy);
    boid.velocity = source.velocity;
    flock.boids.push_back(boid);
    last_spawn_cycle_[id] = cycle_;
  }
}

void FlockManager::compensate_frame_motion(const RigidTransform& motion) {
  for (auto& [id, flock] : flocks_) flock = transformed(flock, motion);
}

StepStatistics FlockManager::step_cycle(const StepContext& context, const LifecycleConfig& config) {
  StepStatistics stats;
  std::vector<Flock> snapshot;
  snapshot.reserve(flocks_.size());
  for (const auto& [id, flock] : flocks_) snapshot.push_back(flock);

  std::vector<Flock> foreign;
  for (std::size_t f = 0; f < snapshot.size(); ++f) {
    RigidTransform frame;
    if (context.lead_aligned_axes) {
      const LeadState& lead = snapshot[f].lead;
      frame = RigidTransform::into_frame(Pose(lead.position, heading_of(lead.velocity)));
    }
    const RigidTransform back = frame.inverse();
    const Flock own = transformed(snapshot[f], frame);
    foreign.clear();
    for (std::size_t g = 0; g < snapshot.size(); ++g)
      if (g != f) foreign.push_back(transformed(snapshot[g], frame));

    Flock& target = flocks_.at(own.flock_id);
    for (std::size_t i = 0; i < own.boids.size(); ++i) {
      const Boid& boid = own.boids[i];
      Rng rng(derive_seed({run_seed_, static_cast<std::uint64_t>(Stream::reachability),
                           static_cast<std::uint64_t>(own.flock_id), static_cast<std::uint64_t>(boid.id),
                           static_cast<std::uint64_t>(cycle_)}));
      const BoidUpdate update = update_boid(boid, own, foreign, context, rng);
      Boid& out = target.boids[i];
      out = update.boid;
      out.position = back.apply_point(out.position);
      out.velocity = back.apply_vector(out.velocity);
      switch (update.outcome) {
        case UpdateOutcome::accepted: ++stats.accepted; break;
        case UpdateOutcome::adjusted: ++stats.adjusted; break;
        case UpdateOutcome::kept_previous: ++stats.kept_previous; break;
      }
    }
  }

  for (auto& [id, flock] : flocks_) {
    for (auto& boid : flock.boids) ++boid.age_cycles;
    const auto before = flock.boids.size();
    std::erase_if(flock.boids, [&](const Boid& b) { return b.age_cycles > config.max_boid_age; });
    stats.retired += static_cast<std::int64_t>(before - flock.boids.size());
  }
  ++cycle_;
  return stats;
}

}  // namespace boidplaus
