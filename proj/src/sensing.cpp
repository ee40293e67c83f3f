#include "boidplaus/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boidplaus {

void NoiseModel::validate() const {
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument(std::string("noise: ") + name + " must be finite and >= 0");
  };
  non_negative(lateral_sigma, "lateral_sigma");
  non_negative(longitudinal_sigma, "longitudinal_sigma");
  non_negative(bias_event_rate, "bias_event_rate");
  non_negative(bias_magnitude, "bias_magnitude");
  non_negative(bias_duration, "bias_duration");
  non_negative(merge_speed_gate, "merge_speed_gate");
  non_negative(merge_range_gate, "merge_range_gate");
  non_negative(merge_duration, "merge_duration");
  if (!(merge_probability_per_cycle >= 0 && merge_probability_per_cycle <= 1))
    throw std::invalid_argument("noise: merge_probability_per_cycle must lie in [0, 1]");
}

NoiseModel NoiseModel::noiseless() {
  NoiseModel m;
  m.lateral_sigma = 0.0;
  m.longitudinal_sigma = 0.0;
  m.bias_event_rate = 0.0;
  m.bias_magnitude = 0.0;
  m.merge_probability_per_cycle = 0.0;
  return m;
}

bool ambiguous_pair(const VehicleGroundTruth& a, const VehicleGroundTruth& b, const NoiseModel& model) {
  return (a.velocity - b.velocity).norm() <= model.merge_speed_gate &&
         std::abs(a.pose.position.x() - b.pose.position.x()) <= model.merge_range_gate;
}

EventTimeline schedule_events(const NoiseModel& model, std::span<const GroundTruthFrame> frames,
                              double cycle_duration, Rng& rng) {
  EventTimeline events;
  const double bias_probability = std::min(1.0, model.bias_event_rate * cycle_duration);
  const auto bias_cycles = static_cast<std::int64_t>(std::llround(model.bias_duration / cycle_duration));
  const auto merge_cycles = static_cast<std::int64_t>(std::llround(model.merge_duration / cycle_duration));

  auto merge_active = [&](std::int64_t id, std::int64_t cycle) {
    return std::any_of(events.begin(), events.end(), [&](const SensorEvent& e) {
      return e.kind == EventKind::merge && e.active(cycle) && (e.subject == id || e.partner == id);
    });
  };

  for (const auto& frame : frames) {
    std::vector<const VehicleGroundTruth*> targets;
    for (const auto& t : frame.targets) targets.push_back(&t);
    std::sort(targets.begin(), targets.end(), [](auto* x, auto* y) { return x->id < y->id; });

    for (std::size_t i = 0; i < targets.size(); ++i) {
      for (std::size_t j = i + 1; j < targets.size(); ++j) {
        const auto& a = *targets[i];
        const auto& b = *targets[j];
        if (!ambiguous_pair(a, b, model)) continue;
        if (bias_probability > 0 && bias_cycles > 0 && rng.bernoulli(bias_probability)) {
          const bool first = rng.uniform() < 0.5;
          events.push_back({EventKind::bias, first ? a.id : b.id, first ? b.id : a.id, frame.cycle, bias_cycles});
        }
        if (model.merge_probability_per_cycle > 0 && merge_cycles > 0 && !merge_active(a.id, frame.cycle) &&
            !merge_active(b.id, frame.cycle) && rng.bernoulli(model.merge_probability_per_cycle)) {
          events.push_back({EventKind::merge, a.id, b.id, frame.cycle, merge_cycles});
        }
      }
    }
  }
  return events;
}

std::vector<TrackedObject> observe(const GroundTruthFrame& frame, const NoiseModel& model,
                                   const EventTimeline& events, Rng& rng) {
  std::vector<const VehicleGroundTruth*> targets;
  for (const auto& t : frame.targets) targets.push_back(&t);
  std::sort(targets.begin(), targets.end(), [](auto* x, auto* y) { return x->id < y->id; });

  std::vector<TrackedObject> objects;
  objects.reserve(targets.size());
  for (const auto* t : targets) {
    TrackedObject obj{t->id, t->pose.position, t->velocity};
    const double dx = rng.normal();
    const double dy = rng.normal();
    obj.position += Vec2(model.longitudinal_sigma * dx, model.lateral_sigma * dy);

    const auto bias = std::find_if(events.begin(), events.end(), [&](const SensorEvent& e) {
      return e.kind == EventKind::bias && e.subject == t->id && e.active(frame.cycle);
    });
    if (bias != events.end()) {
      if (const auto* partner = frame.find(bias->partner))
        obj.position.y() += model.bias_magnitude * sign(partner->pose.position.y() - t->pose.position.y());
    }
    objects.push_back(obj);
  }

  for (const auto& e : events) {
    if (e.kind != EventKind::merge || !e.active(frame.cycle)) continue;
    auto a = std::find_if(objects.begin(), objects.end(), [&](const auto& o) { return o.id == e.subject; });
    auto b = std::find_if(objects.begin(), objects.end(), [&](const auto& o) { return o.id == e.partner; });
    if (a == objects.end() || b == objects.end()) continue;
    const std::int64_t kept = std::min(a->id, b->id);
    const std::int64_t dropped = std::max(a->id, b->id);
    const TrackedObject merged{kept, 0.5 * (a->position + b->position), 0.5 * (a->velocity + b->velocity)};
    (a->id == kept ? *a : *b) = merged;
    std::erase_if(objects, [&](const TrackedObject& o) { return o.id == dropped; });
  }
  return objects;
}

}  // namespace boidplaus
