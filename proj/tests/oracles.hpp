#ifndef BOIDPLAUS_TESTS_ORACLES_HPP
#define BOIDPLAUS_TESTS_ORACLES_HPP

// Reference implementations used only by the tests. They work on plain
// doubles and std::array so they share no code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

struct P2 {
  double x = 0, y = 0;
};

inline P2 operator+(P2 a, P2 b) { return {a.x + b.x, a.y + b.y}; }
inline P2 operator-(P2 a, P2 b) { return {a.x - b.x, a.y - b.y}; }
inline P2 operator*(double s, P2 a) { return {s * a.x, s * a.y}; }
inline double norm(P2 a) { return std::hypot(a.x, a.y); }

struct B {
  P2 p, v;
};

// Brute-force rules, written straight from the defining sums.

inline bool sees(const B& obs, const P2& q, double a, double b) {
  double h = 0;
  if (obs.v.x != 0 || obs.v.y != 0) h = std::atan2(obs.v.y, obs.v.x);
  const double dx = q.x - obs.p.x, dy = q.y - obs.p.y;
  // rotate the offset by -h
  const double u = std::cos(h) * dx + std::sin(h) * dy;
  const double w = -std::sin(h) * dx + std::cos(h) * dy;
  return (u * u) / (a * a) + (w * w) / (b * b) <= 1.0;
}

inline std::vector<B> neighbours(const std::vector<B>& flock, std::size_t self, double a, double b) {
  std::vector<B> out;
  for (std::size_t j = 0; j < flock.size(); ++j)
    if (j != self && sees(flock[self], flock[j].p, a, b)) out.push_back(flock[j]);
  return out;
}

inline P2 separation(const B& o, const std::vector<B>& nb) {
  P2 s;
  for (const auto& n : nb) s = s + (o.p - n.p);
  return s;
}

inline P2 cohesion(const B& o, const std::vector<B>& nb) {
  if (nb.empty()) return {};
  P2 s;
  for (const auto& n : nb) s = s + n.p;
  return (1.0 / static_cast<double>(nb.size())) * s - o.p;
}

inline P2 alignment(const B& o, const std::vector<B>& nb) {
  if (nb.empty()) return {};
  P2 s;
  for (const auto& n : nb) s = s + n.v;
  return (1.0 / static_cast<double>(nb.size())) * s - o.v;
}

inline P2 repulsion(const B& o, const std::vector<std::vector<B>>& foreign, double a, double b, double g) {
  P2 out;
  for (const auto& flock : foreign) {
    P2 c;
    int n = 0;
    for (const auto& f : flock)
      if (sees(o, f.p, a, b)) {
        c = c + f.p;
        ++n;
      }
    if (n == 0) continue;
    c = (1.0 / n) * c;
    const double dy = o.p.y - c.y;
    const double s = dy > 0 ? 1.0 : (dy < 0 ? -1.0 : 0.0);
    out.y += s * std::exp(g - norm(o.p - c));
  }
  return out;
}

// Dubins paths from explicit turning circles and tangent lines.

struct Q {
  double x = 0, y = 0, h = 0;
};

inline double wrap2pi(double a) {
  const double t = 2 * std::numbers::pi;
  a = std::fmod(a, t);
  if (a < 0) a += t;
  if (a >= t) a -= t;
  return a;
}

inline double angle_gap(double a, double b) {
  const double d = wrap2pi(a - b);
  return std::min(d, 2 * std::numbers::pi - d);
}

// kind: 'L', 'S' or 'R'. Arc lengths in meters.
inline Q drive(Q q, char kind, double len, double r) {
  if (kind == 'S') return {q.x + len * std::cos(q.h), q.y + len * std::sin(q.h), q.h};
  const double side = kind == 'L' ? 1.0 : -1.0;
  const double cx = q.x - side * r * std::sin(q.h);
  const double cy = q.y + side * r * std::cos(q.h);
  const double phi = side * len / r;
  const double rx = q.x - cx, ry = q.y - cy;
  return {cx + std::cos(phi) * rx - std::sin(phi) * ry, cy + std::sin(phi) * rx + std::cos(phi) * ry, q.h + phi};
}

inline Q drive_word(Q q, const std::string& word, const std::array<double, 3>& lens, double r) {
  for (int i = 0; i < 3; ++i) q = drive(q, word[static_cast<std::size_t>(i)], lens[static_cast<std::size_t>(i)], r);
  return q;
}

inline bool lands_on(const Q& got, const Q& want, double r) {
  const double scale = std::max(1.0, r);
  return std::hypot(got.x - want.x, got.y - want.y) <= 1e-7 * scale && angle_gap(got.h, want.h) <= 1e-7;
}

inline P2 circle_center(const Q& q, char kind, double r) {
  const double side = kind == 'L' ? 1.0 : -1.0;
  return {q.x - side * r * std::sin(q.h), q.y + side * r * std::cos(q.h)};
}

// Turn needed to go from heading h0 to h1 on an arc of the given kind.
inline double turn(double h0, double h1, char kind) { return kind == 'L' ? wrap2pi(h1 - h0) : wrap2pi(h0 - h1); }

// Shortest valid length of one word, or nothing. Candidates are checked by
// driving them forward; a construction that misses the target is discarded.
inline std::optional<double> word_length(const Q& s, const Q& t, double r, const std::string& word) {
  std::optional<double> best;
  auto consider = [&](const std::array<double, 3>& lens) {
    if (lens[0] < 0 || lens[1] < 0 || lens[2] < 0) return;
    if (!lands_on(drive_word(s, word, lens, r), t, r)) return;
    const double total = lens[0] + lens[1] + lens[2];
    if (!best || total < *best) best = total;
  };
  const P2 c1 = circle_center(s, word[0], r);
  const P2 c2 = circle_center(t, word[2], r);
  const P2 d = c2 - c1;
  const double dist = norm(d);
  if (word[1] == 'S') {
    std::vector<double> headings;
    double straight = 0;
    if (word[0] == word[2]) {
      // outer tangent: parallel to the center line
      straight = dist;
      headings.push_back(std::atan2(d.y, d.x));
      if (dist == 0) headings.push_back(s.h);
    } else {
      if (dist < 2 * r) return best;
      straight = std::sqrt(std::max(0.0, dist * dist - 4 * r * r));
      const double base = std::atan2(d.y, d.x);
      const double off = std::atan2(2 * r, straight);
      headings = {base + off, base - off};
    }
    for (double h : headings)
      consider({r * turn(s.h, h, word[0]), straight, r * turn(h, t.h, word[2])});
  } else {
    if (dist > 4 * r || dist == 0) {
      if (dist == 0) {
        // coincident circles: a single arc of the first kind, or a full loop through the middle circle
        consider({r * turn(s.h, t.h, word[0]), 0, 0});
      }
      if (dist > 4 * r) return best;
    }
    if (dist > 0) {
      // middle circle tangent to both: its center sits 2r from each end circle
      const double half = dist / 2;
      const double hgt = std::sqrt(std::max(0.0, 4 * r * r - half * half));
      const P2 mid = c1 + 0.5 * d;
      const P2 perp{-d.y / dist, d.x / dist};
      for (double sgn : {1.0, -1.0}) {
        const P2 cm = mid + (sgn * hgt) * perp;
        // tangent points lie halfway between the centers; heading there is perpendicular to the radius
        const P2 a = c1 + 0.5 * (cm - c1);
        const P2 b = cm + 0.5 * (c2 - cm);
        const double side0 = word[0] == 'L' ? 1.0 : -1.0;
        const double side1 = -side0;
        auto tangent_heading = [&](P2 point, P2 center, double side) {
          // heading h with center = point + side * r * (-sin h, cos h)
          return std::atan2(-(center.x - point.x) * side, (center.y - point.y) * side);
        };
        const double ha = tangent_heading(a, c1, side0);
        const double hb = tangent_heading(b, cm, side1);
        consider({r * turn(s.h, ha, word[0]), r * turn(ha, hb, word[1]), r * turn(hb, t.h, word[2])});
        // the middle arc may also run the long way round
        consider({r * turn(s.h, ha, word[0]), r * (turn(ha, hb, word[1]) + 2 * std::numbers::pi),
                  r * turn(hb, t.h, word[2])});
      }
    }
  }
  return best;
}

inline const std::array<std::string, 6>& words() {
  static const std::array<std::string, 6> w{"LSL", "RSR", "LSR", "RSL", "RLR", "LRL"};
  return w;
}

// Linear interpolation between closest ranks, written from the definition.
inline double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Spawn cycles by stepping a wall clock in cycle_duration increments.
inline std::vector<long> spawn_cycles(double dt, double interval, int n) {
  std::vector<long> out;
  double last = -std::numeric_limits<double>::infinity();
  for (long k = 0; static_cast<int>(out.size()) < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t - last >= interval - 1e-9) {
      out.push_back(k);
      last = t;
    }
  }
  return out;
}

}  // namespace oracle

#endif  // BOIDPLAUS_TESTS_ORACLES_HPP
