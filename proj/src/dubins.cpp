#include "boidplaus/dubins.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace boidplaus {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mod2pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0) r += kTwoPi;
  // fmod can land exactly on 2*pi after the shift for tiny negative inputs
  if (r >= kTwoPi) r = 0;
  return r;
}

// Normalized problem: start at the origin heading alpha, target at (d, 0)
// heading beta, unit radius. Results are (t, p, q) in radians / unit lengths.
struct Normalized {
  double d, alpha, beta;
  double sa, ca, sb, cb, c_ab;
};

using Params = std::optional<std::array<double, 3>>;

Params solve_lsl(const Normalized& n) {
  const double p_sq = 2 + n.d * n.d - 2 * n.c_ab + 2 * n.d * (n.sa - n.sb);
  if (p_sq < 0) return std::nullopt;
  const double tmp = std::atan2(n.cb - n.ca, n.d + n.sa - n.sb);
  return std::array{mod2pi(tmp - n.alpha), std::sqrt(p_sq), mod2pi(n.beta - tmp)};
}

Params solve_rsr(const Normalized& n) {
  const double p_sq = 2 + n.d * n.d - 2 * n.c_ab + 2 * n.d * (n.sb - n.sa);
  if (p_sq < 0) return std::nullopt;
  const double tmp = std::atan2(n.ca - n.cb, n.d - n.sa + n.sb);
  return std::array{mod2pi(n.alpha - tmp), std::sqrt(p_sq), mod2pi(tmp - n.beta)};
}

Params solve_lsr(const Normalized& n) {
  const double p_sq = -2 + n.d * n.d + 2 * n.c_ab + 2 * n.d * (n.sa + n.sb);
  if (p_sq < 0) return std::nullopt;
  const double p = std::sqrt(p_sq);
  const double tmp = std::atan2(-n.ca - n.cb, n.d + n.sa + n.sb) - std::atan2(-2.0, p);
  return std::array{mod2pi(tmp - n.alpha), p, mod2pi(tmp - n.beta)};
}

Params solve_rsl(const Normalized& n) {
  const double p_sq = -2 + n.d * n.d + 2 * n.c_ab - 2 * n.d * (n.sa + n.sb);
  if (p_sq < 0) return std::nullopt;
  const double p = std::sqrt(p_sq);
  const double tmp = std::atan2(n.ca + n.cb, n.d - n.sa - n.sb) - std::atan2(2.0, p);
  return std::array{mod2pi(n.alpha - tmp), p, mod2pi(n.beta - tmp)};
}

double clamp_cosine(double c, bool& ok) {
  constexpr double slack = 1e-12;
  ok = std::abs(c) <= 1 + slack;
  return std::clamp(c, -1.0, 1.0);
}

// Both middle-arc roots are considered; the shorter one is kept.
Params solve_rlr(const Normalized& n) {
  bool ok = false;
  const double c = clamp_cosine((6 - n.d * n.d + 2 * n.c_ab + 2 * n.d * (n.sa - n.sb)) / 8, ok);
  if (!ok) return std::nullopt;
  const double phi = std::atan2(n.ca - n.cb, n.d - n.sa + n.sb);
  Params best;
  double best_len = std::numeric_limits<double>::infinity();
  for (double p : {mod2pi(kTwoPi - std::acos(c)), mod2pi(std::acos(c))}) {
    const double t = mod2pi(n.alpha - phi + p / 2);
    const double q = mod2pi(n.alpha - n.beta - t + p);
    if (t + p + q < best_len) {
      best_len = t + p + q;
      best = std::array{t, p, q};
    }
  }
  return best;
}

Params solve_lrl(const Normalized& n) {
  bool ok = false;
  const double c = clamp_cosine((6 - n.d * n.d + 2 * n.c_ab + 2 * n.d * (n.sb - n.sa)) / 8, ok);
  if (!ok) return std::nullopt;
  const double phi = std::atan2(n.ca - n.cb, n.d + n.sa - n.sb);
  Params best;
  double best_len = std::numeric_limits<double>::infinity();
  for (double p : {mod2pi(kTwoPi - std::acos(c)), mod2pi(std::acos(c))}) {
    const double t = mod2pi(-n.alpha - phi + p / 2);
    const double q = mod2pi(n.beta - n.alpha - t + p);
    if (t + p + q < best_len) {
      best_len = t + p + q;
      best = std::array{t, p, q};
    }
  }
  return best;
}

Normalized normalize(const Pose& start, const Pose& target, double radius) {
  const Vec2 delta = target.position - start.position;
  const double theta = heading_of(delta);
  Normalized n{};
  n.d = delta.norm() / radius;
  n.alpha = mod2pi(start.heading - theta);
  n.beta = mod2pi(target.heading - theta);
  n.sa = std::sin(n.alpha);
  n.ca = std::cos(n.alpha);
  n.sb = std::sin(n.beta);
  n.cb = std::cos(n.beta);
  n.c_ab = std::cos(n.alpha - n.beta);
  return n;
}

Params solve(const Normalized& n, DubinsWord word) {
  switch (word) {
    case DubinsWord::LSL: return solve_lsl(n);
    case DubinsWord::RSR: return solve_rsr(n);
    case DubinsWord::LSR: return solve_lsr(n);
    case DubinsWord::RSL: return solve_rsl(n);
    case DubinsWord::RLR: return solve_rlr(n);
    case DubinsWord::LRL: return solve_lrl(n);
  }
  return std::nullopt;
}

Pose advance_segment(const Pose& pose, SegmentKind kind, double length, double radius) {
  const double x = pose.position.x();
  const double y = pose.position.y();
  const double h = pose.heading;
  switch (kind) {
    case SegmentKind::straight:
      return {x + length * std::cos(h), y + length * std::sin(h), h};
    case SegmentKind::left: {
      const double dh = length / radius;
      return {x + radius * (std::sin(h + dh) - std::sin(h)), y - radius * (std::cos(h + dh) - std::cos(h)), h + dh};
    }
    case SegmentKind::right: {
      const double dh = length / radius;
      return {x - radius * (std::sin(h - dh) - std::sin(h)), y + radius * (std::cos(h - dh) - std::cos(h)), h - dh};
    }
  }
  return pose;
}

}  // namespace

std::string_view to_string(DubinsWord word) {
  switch (word) {
    case DubinsWord::LSL: return "LSL";
    case DubinsWord::RSR: return "RSR";
    case DubinsWord::LSR: return "LSR";
    case DubinsWord::RSL: return "RSL";
    case DubinsWord::RLR: return "RLR";
    case DubinsWord::LRL: return "LRL";
  }
  return "?";
}

std::array<SegmentKind, 3> segment_kinds(DubinsWord word) {
  using enum SegmentKind;
  switch (word) {
    case DubinsWord::LSL: return {left, straight, left};
    case DubinsWord::RSR: return {right, straight, right};
    case DubinsWord::LSR: return {left, straight, right};
    case DubinsWord::RSL: return {right, straight, left};
    case DubinsWord::RLR: return {right, left, right};
    case DubinsWord::LRL: return {left, right, left};
  }
  return {straight, straight, straight};
}

std::optional<DubinsPath> dubins_word_path(const Pose& start, const Pose& target, double radius, DubinsWord word) {
  if (!(radius > 0)) throw std::invalid_argument("dubins: radius must be positive");
  const auto params = solve(normalize(start, target, radius), word);
  if (!params) return std::nullopt;
  DubinsPath path;
  path.start = start;
  path.word = word;
  path.radius = radius;
  for (std::size_t i = 0; i < 3; ++i) path.segment_lengths[i] = (*params)[i] * radius;
  path.total_length = path.segment_lengths[0] + path.segment_lengths[1] + path.segment_lengths[2];
  return path;
}

DubinsPath shortest_dubins_path(const Pose& start, const Pose& target, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("dubins: radius must be positive");
  const Normalized n = normalize(start, target, radius);
  std::optional<DubinsPath> best;
  for (DubinsWord word : kDubinsWords) {
    const auto params = solve(n, word);
    if (!params) continue;
    const double length = ((*params)[0] + (*params)[1] + (*params)[2]) * radius;
    if (best && !(length < best->total_length)) continue;
    DubinsPath path;
    path.start = start;
    path.word = word;
    path.radius = radius;
    for (std::size_t i = 0; i < 3; ++i) path.segment_lengths[i] = (*params)[i] * radius;
    path.total_length = length;
    best = path;
  }
  // LSL and RSR always admit a solution, so best is set.
  return *best;
}

Pose sample_path(const DubinsPath& path, double distance) {
  const auto kinds = segment_kinds(path.word);
  Pose pose = path.start;
  double remaining = std::clamp(distance, 0.0, path.total_length);
  for (std::size_t i = 0; i < 3; ++i) {
    const double len = std::min(remaining, path.segment_lengths[i]);
    pose = advance_segment(pose, kinds[i], len, path.radius);
    remaining -= len;
    if (remaining <= 0) break;
  }
  return pose;
}

std::vector<Pose> sample_polyline(const DubinsPath& path, double step) {
  if (!(step > 0)) throw std::invalid_argument("dubins: sample step must be positive");
  std::vector<Pose> points;
  const auto n = static_cast<std::size_t>(std::floor(path.total_length / step));
  points.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) points.push_back(sample_path(path, static_cast<double>(i) * step));
  if (points.size() == 1 || static_cast<double>(n) * step < path.total_length)
    points.push_back(sample_path(path, path.total_length));
  return points;
}

double min_turn_radius(double speed, double max_lateral_accel, double radius_floor) {
  if (!(max_lateral_accel > 0)) throw std::invalid_argument("min_turn_radius: max lateral acceleration must be positive");
  if (speed < 0) throw std::invalid_argument("min_turn_radius: speed must be non-negative");
  return std::max(speed * speed / max_lateral_accel, radius_floor);
}

void ReachabilityPolicy::validate() const {
  if (!(detour_factor > 1)) throw std::invalid_argument("reachability: detour_factor must exceed 1");
  if (max_iterations < 1) throw std::invalid_argument("reachability: max_iterations must be at least 1");
  if (!(position_perturbation_radius > 0) || !(heading_perturbation > 0))
    throw std::invalid_argument("reachability: perturbation magnitudes must be positive");
  if (!(min_reference_length > 0)) throw std::invalid_argument("reachability: min_reference_length must be positive");
  if (!(max_lateral_accel > 0)) throw std::invalid_argument("reachability: max_lateral_accel must be positive");
  if (!(radius_floor > 0)) throw std::invalid_argument("reachability: radius_floor must be positive");
}

bool is_reachable(const Pose& start, const Pose& target, double radius, const ReachabilityPolicy& policy) {
  const double direct = (target.position - start.position).norm();
  const double length = shortest_dubins_path(start, target, radius).total_length;
  return length <= policy.detour_factor * std::max(direct, policy.min_reference_length);
}

std::string_view to_string(UpdateOutcome outcome) {
  switch (outcome) {
    case UpdateOutcome::accepted: return "accepted";
    case UpdateOutcome::adjusted: return "adjusted";
    case UpdateOutcome::kept_previous: return "kept-previous";
  }
  return "?";
}

ConstrainedUpdate constrain_update(const Pose& current, const Vec2& previous_velocity, const Pose& proposed,
                                   const Vec2& proposed_velocity, double radius, const ReachabilityPolicy& policy,
                                   Rng& rng) {
  if (is_reachable(current, proposed, radius, policy))
    return {proposed, proposed_velocity, UpdateOutcome::accepted};

  if (policy.mode == AdjustmentMode::line_search) {
    double lo = 0.0, hi = 1.0;
    std::optional<ConstrainedUpdate> best;
    for (int i = 0; i < policy.max_iterations; ++i) {
      const double mid = 0.5 * (lo + hi);
      const Vec2 v = previous_velocity + mid * (proposed_velocity - previous_velocity);
      const Pose candidate(current.position + v, heading_of(v));
      if (is_reachable(current, candidate, radius, policy)) {
        lo = mid;
        best = ConstrainedUpdate{candidate, v, UpdateOutcome::adjusted};
      } else {
        hi = mid;
      }
    }
    if (best) return *best;
  } else {
    for (int i = 0; i < policy.max_iterations; ++i) {
      const double r = policy.position_perturbation_radius * std::sqrt(rng.uniform());
      const double angle = rng.uniform(0.0, kTwoPi);
      const double dh = rng.uniform(-policy.heading_perturbation, policy.heading_perturbation);
      const Pose candidate(proposed.position + r * Vec2(std::cos(angle), std::sin(angle)), proposed.heading + dh);
      if (is_reachable(current, candidate, radius, policy))
        return {candidate, candidate.position - current.position, UpdateOutcome::adjusted};
    }
  }

  const Pose dead_reckoned(current.position + previous_velocity, heading_of(previous_velocity));
  return {dead_reckoned, previous_velocity, UpdateOutcome::kept_previous};
}

}  // namespace boidplaus
