#ifndef BOIDPLAUS_SENSING_HPP
#define BOIDPLAUS_SENSING_HPP

// Tracker surrogate: turns ground truth into tracked objects with Gaussian
// position noise, lateral bias episodes and merged tracks for ambiguous pairs.

#include "boidplaus/geometry.hpp"
#include "boidplaus/random.hpp"
#include "boidplaus/scenario.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace boidplaus {

struct TrackedObject {
  std::int64_t id = 0;
  Vec2 position = Vec2::Zero();  // ego frame, meters
  Vec2 velocity = Vec2::Zero();  // ego-frame axes, m/s
};

/// Defaults are calibration targets for the surrogate, not measured sensor values.
struct NoiseModel {
  double lateral_sigma = 0.35;       // meters
  double longitudinal_sigma = 0.5;   // meters
  double bias_event_rate = 0.5;      // events per second per ambiguous pair
  double bias_magnitude = 1.8;       // meters, toward the partner
  double bias_duration = 2.0;        // seconds
  double merge_probability_per_cycle = 0.002;
  double merge_speed_gate = 2.5;     // m/s
  double merge_range_gate = 60.0;    // meters
  double merge_duration = 1.0;       // seconds

  void validate() const;
  /// Every noise source switched off.
  static NoiseModel noiseless();
};

enum class EventKind { bias, merge };

struct SensorEvent {
  EventKind kind = EventKind::bias;
  std::int64_t subject = 0;  // biased vehicle, or the id kept by a merge
  std::int64_t partner = 0;
  std::int64_t start_cycle = 0;
  std::int64_t duration_cycles = 0;

  bool active(std::int64_t cycle) const { return cycle >= start_cycle && cycle < start_cycle + duration_cycles; }
};

using EventTimeline = std::vector<SensorEvent>;

/// True when two targets are close enough in speed and range to be confused.
bool ambiguous_pair(const VehicleGroundTruth& a, const VehicleGroundTruth& b, const NoiseModel& model);

/// Draws bias and merge episodes for ambiguous target pairs cycle by cycle.
EventTimeline schedule_events(const NoiseModel& model, std::span<const GroundTruthFrame> frames,
                              double cycle_duration, Rng& rng);

/// Tracked objects for one frame, sorted by id.
std::vector<TrackedObject> observe(const GroundTruthFrame& frame, const NoiseModel& model,
                                   const EventTimeline& events, Rng& rng);

}  // namespace boidplaus

#endif  // BOIDPLAUS_SENSING_HPP
