#include "boidplaus/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>

namespace boidplaus {
namespace {

std::string shortest(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw std::invalid_argument("config field '" + field + "': " + what);
}

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) field_error(where, "expected a mapping");
  std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& entry : node) {
    const auto key = entry.first.as<std::string>();
    if (!names.contains(key)) field_error(where.empty() ? key : where + "." + key, "unknown key");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& target, const std::string& where) {
  const YAML::Node value = node[key];
  if (!value) return;
  const std::string field = where.empty() ? std::string(key) : where + "." + key;
  try {
    target = value.as<T>();
  } catch (const YAML::Exception&) {
    field_error(field, "cannot parse value '" + YAML::Dump(value) + "'");
  }
}

void read_vec2(const YAML::Node& node, const char* key, Vec2& target, const std::string& where) {
  const YAML::Node value = node[key];
  if (!value) return;
  const std::string field = where + "." + key;
  if (!value.IsSequence() || value.size() != 2) field_error(field, "expected a two-element list");
  try {
    target = Vec2(value[0].as<double>(), value[1].as<double>());
  } catch (const YAML::Exception&) {
    field_error(field, "cannot parse value '" + YAML::Dump(value) + "'");
  }
}

AdjustmentMode parse_mode(const std::string& text, const std::string& field) {
  if (text == "line_search") return AdjustmentMode::line_search;
  if (text == "random_disc") return AdjustmentMode::random_disc;
  field_error(field, "expected line_search or random_disc, got '" + text + "'");
}

const char* mode_name(AdjustmentMode mode) {
  return mode == AdjustmentMode::line_search ? "line_search" : "random_disc";
}

Lane parse_lane(const std::string& text, const std::string& field) {
  if (text == "left") return Lane::left;
  if (text == "ego") return Lane::ego;
  if (text == "right") return Lane::right;
  field_error(field, "lane must be one of left, ego, right");
}

const char* lane_name(Lane lane) {
  switch (lane) {
    case Lane::left: return "left";
    case Lane::ego: return "ego";
    case Lane::right: return "right";
  }
  return "ego";
}

void parse_scenario(const YAML::Node& node, ScenarioConfig& s) {
  const std::string where = "scenario";
  check_keys(node, where, {"duration", "lane_width", "ego_id", "ego_start_s", "road", "vehicles"});
  read(node, "duration", s.duration, where);
  read(node, "ego_id", s.ego_id, where);
  read(node, "ego_start_s", s.ego_start_s, where);
  double lane_width = s.road.lane_width();
  read(node, "lane_width", lane_width, where);
  std::vector<RoadSegment> segments = s.road.segments();
  if (const YAML::Node road = node["road"]) {
    if (!road.IsSequence()) field_error("scenario.road", "expected a list of segments");
    segments.clear();
    for (std::size_t i = 0; i < road.size(); ++i) {
      const std::string item = "scenario.road[" + std::to_string(i) + "]";
      check_keys(road[i], item, {"length", "curvature"});
      RoadSegment seg;
      read(road[i], "length", seg.length, item);
      read(road[i], "curvature", seg.curvature, item);
      segments.push_back(seg);
    }
  }
  try {
    s.road = RoadModel(segments, lane_width);
  } catch (const std::invalid_argument& e) {
    field_error("scenario.road", e.what());
  }
  if (const YAML::Node vehicles = node["vehicles"]) {
    if (!vehicles.IsSequence()) field_error("scenario.vehicles", "expected a list of vehicles");
    s.vehicles.clear();
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
      const std::string item = "scenario.vehicles[" + std::to_string(i) + "]";
      check_keys(vehicles[i], item, {"id", "lane", "speed", "initial_offset", "lateral_offset_in_lane"});
      VehicleSpec v;
      read(vehicles[i], "id", v.id, item);
      std::string lane = lane_name(v.lane);
      read(vehicles[i], "lane", lane, item);
      v.lane = parse_lane(lane, item + ".lane");
      read(vehicles[i], "speed", v.speed, item);
      read(vehicles[i], "initial_offset", v.initial_offset, item);
      read(vehicles[i], "lateral_offset_in_lane", v.lateral_offset_in_lane, item);
      s.vehicles.push_back(v);
    }
  }
}

void rethrow_as_field(const std::string& field, const auto& validate) {
  try {
    validate();
  } catch (const std::invalid_argument& e) {
    field_error(field, e.what());
  }
}

// Emits "key: value  # comment" entries into an open map.
class Writer {
 public:
  explicit Writer(YAML::Emitter& out) : out_(out) {}

  void scalar(const char* key, double value, const char* comment = nullptr) {
    out_ << YAML::Key << key << YAML::Value << shortest(value);
    if (comment) out_ << YAML::Comment(comment);
  }
  void integer(const char* key, std::int64_t value, const char* comment = nullptr) {
    out_ << YAML::Key << key << YAML::Value << value;
    if (comment) out_ << YAML::Comment(comment);
  }
  void vec2(const char* key, const Vec2& v, const char* comment = nullptr) {
    out_ << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq << shortest(v.x()) << shortest(v.y())
         << YAML::EndSeq;
    if (comment) out_ << YAML::Comment(comment);
  }

 private:
  YAML::Emitter& out_;
};

}  // namespace

void RunConfig::validate() const {
  rethrow_as_field("scenario", [&] { scenario.validate(); });
  rethrow_as_field("flocking", [&] { weights.validate(); });
  rethrow_as_field("fov", [&] { ellipse.validate(); });
  rethrow_as_field("lifecycle", [&] { lifecycle.validate(); });
  rethrow_as_field("reachability", [&] { reachability.validate(); });
  rethrow_as_field("noise", [&] { noise.validate(); });
  rethrow_as_field("metrics", [&] { metrics.validate(); });
  if (flock_size < 1) field_error("experiment.N_b", "must be at least 1");
  if (sweep_flock_sizes.empty()) field_error("experiment.sweep_N_b", "must not be empty");
  for (int nb : sweep_flock_sizes)
    if (nb < 1) field_error("experiment.sweep_N_b", "entries must be at least 1");
  if (runs < 1) field_error("experiment.runs", "must be at least 1");
}

RunConfig default_run_config() { return RunConfig{}; }

RunConfig parse_run_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("config: malformed YAML: ") + e.what());
  }
  RunConfig c = default_run_config();
  if (!root || root.IsNull()) return c;
  check_keys(root, "", {"scenario", "flocking", "fov", "lifecycle", "reachability", "noise", "metrics", "experiment"});

  if (const YAML::Node n = root["scenario"]) parse_scenario(n, c.scenario);

  if (const YAML::Node n = root["flocking"]) {
    check_keys(n, "flocking", {"w_sep", "w_coh", "w_cohl", "w_ali", "w_vell", "g_rep", "lead_aligned_axes"});
    read_vec2(n, "w_sep", c.weights.separation, "flocking");
    read_vec2(n, "w_coh", c.weights.cohesion, "flocking");
    read_vec2(n, "w_cohl", c.weights.leader_cohesion, "flocking");
    read_vec2(n, "w_ali", c.weights.alignment, "flocking");
    read_vec2(n, "w_vell", c.weights.leader_alignment, "flocking");
    read(n, "g_rep", c.weights.repulsion_gain, "flocking");
    read(n, "lead_aligned_axes", c.lead_aligned_axes, "flocking");
  }

  if (const YAML::Node n = root["fov"]) {
    check_keys(n, "fov", {"a", "b"});
    read(n, "a", c.ellipse.semi_axis_long, "fov");
    read(n, "b", c.ellipse.semi_axis_lat, "fov");
  }

  if (const YAML::Node n = root["lifecycle"]) {
    check_keys(n, "lifecycle", {"cycle_duration", "spawn_interval", "max_boid_age", "spawn_jitter"});
    read(n, "cycle_duration", c.lifecycle.cycle_duration, "lifecycle");
    read(n, "spawn_interval", c.lifecycle.spawn_interval, "lifecycle");
    read(n, "max_boid_age", c.lifecycle.max_boid_age, "lifecycle");
    read(n, "spawn_jitter", c.lifecycle.spawn_jitter, "lifecycle");
  }

  if (const YAML::Node n = root["reachability"]) {
    const std::string w = "reachability";
    check_keys(n, w, {"enabled", "mode", "detour_factor", "max_iterations", "position_perturbation_radius",
                      "heading_perturbation", "min_reference_length", "max_lateral_accel", "radius_floor"});
    read(n, "enabled", c.reachability_filter, w);
    if (n["mode"]) {
      std::string mode;
      read(n, "mode", mode, w);
      c.reachability.mode = parse_mode(mode, w + ".mode");
    }
    read(n, "detour_factor", c.reachability.detour_factor, w);
    read(n, "max_iterations", c.reachability.max_iterations, w);
    read(n, "position_perturbation_radius", c.reachability.position_perturbation_radius, w);
    read(n, "heading_perturbation", c.reachability.heading_perturbation, w);
    read(n, "min_reference_length", c.reachability.min_reference_length, w);
    read(n, "max_lateral_accel", c.reachability.max_lateral_accel, w);
    read(n, "radius_floor", c.reachability.radius_floor, w);
  }

  if (const YAML::Node n = root["noise"]) {
    const std::string w = "noise";
    check_keys(n, w, {"lateral_sigma", "longitudinal_sigma", "bias_event_rate", "bias_magnitude", "bias_duration",
                      "merge_probability_per_cycle", "merge_speed_gate", "merge_range_gate", "merge_duration"});
    read(n, "lateral_sigma", c.noise.lateral_sigma, w);
    read(n, "longitudinal_sigma", c.noise.longitudinal_sigma, w);
    read(n, "bias_event_rate", c.noise.bias_event_rate, w);
    read(n, "bias_magnitude", c.noise.bias_magnitude, w);
    read(n, "bias_duration", c.noise.bias_duration, w);
    read(n, "merge_probability_per_cycle", c.noise.merge_probability_per_cycle, w);
    read(n, "merge_speed_gate", c.noise.merge_speed_gate, w);
    read(n, "merge_range_gate", c.noise.merge_range_gate, w);
    read(n, "merge_duration", c.noise.merge_duration, w);
  }

  if (const YAML::Node n = root["metrics"]) {
    check_keys(n, "metrics", {"parallel_gate", "ego_left", "ego_right"});
    read(n, "parallel_gate", c.metrics.parallel_gate, "metrics");
    for (const char* key : {"ego_left", "ego_right"}) {
      const YAML::Node pair = n[key];
      if (!pair) continue;
      const std::string field = std::string("metrics.") + key;
      if (!pair.IsSequence() || pair.size() != 2) field_error(field, "expected two vehicle ids");
      PairDefinition def;
      try {
        def = {pair[0].as<std::int64_t>(), pair[1].as<std::int64_t>()};
      } catch (const YAML::Exception&) {
        field_error(field, "vehicle ids must be integers");
      }
      (std::string(key) == "ego_left" ? c.metrics.ego_left : c.metrics.ego_right) = def;
    }
  }

  if (const YAML::Node n = root["experiment"]) {
    const std::string w = "experiment";
    check_keys(n, w, {"N_b", "sweep_N_b", "runs", "seed", "output"});
    read(n, "N_b", c.flock_size, w);
    read(n, "sweep_N_b", c.sweep_flock_sizes, w);
    read(n, "runs", c.runs, w);
    read(n, "seed", c.master_seed, w);
    std::string output = c.output_dir.string();
    read(n, "output", output, w);
    c.output_dir = output;
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string dump_run_config(const RunConfig& c) {
  YAML::Emitter out;
  Writer w(out);
  out << YAML::Comment("boidplaus effective run configuration") << YAML::Newline;
  out << YAML::BeginMap;

  out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
  w.scalar("duration", c.scenario.duration, "seconds");
  w.scalar("lane_width", c.scenario.road.lane_width(), "meters");
  w.integer("ego_id", c.scenario.ego_id);
  w.scalar("ego_start_s", c.scenario.ego_start_s, "ego arc length on the road at t = 0");
  out << YAML::Key << "road" << YAML::Value << YAML::BeginSeq;
  for (const auto& seg : c.scenario.road.segments()) {
    out << YAML::Flow << YAML::BeginMap;
    w.scalar("length", seg.length);
    w.scalar("curvature", seg.curvature);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "vehicles";
  out << YAML::Comment("lateral separations d_12 and d_23 follow from lane, lane_width and lateral_offset_in_lane");
  out << YAML::Value << YAML::BeginSeq;
  for (const auto& v : c.scenario.vehicles) {
    out << YAML::Flow << YAML::BeginMap;
    w.integer("id", v.id);
    out << YAML::Key << "lane" << YAML::Value << lane_name(v.lane);
    w.scalar("speed", v.speed);
    w.scalar("initial_offset", v.initial_offset);
    w.scalar("lateral_offset_in_lane", v.lateral_offset_in_lane);
    out << YAML::EndMap;
    const std::string symbol = v.id == c.scenario.ego_id ? "v_ego" : "v_" + std::to_string(v.id);
    out << YAML::Comment(symbol + " = speed (m/s)");
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "flocking" << YAML::Value << YAML::BeginMap;
  w.vec2("w_sep", c.weights.separation, "w_sep, separation weight [x, y]");
  w.vec2("w_coh", c.weights.cohesion, "w_coh, cohesion weight [x, y]");
  w.vec2("w_cohl", c.weights.leader_cohesion, "w_cohl, leader cohesion weight [x, y]");
  w.vec2("w_ali", c.weights.alignment, "w_ali, alignment weight [x, y]");
  w.vec2("w_vell", c.weights.leader_alignment, "leader velocity matching weight [x, y], 0 disables");
  w.scalar("g_rep", c.weights.repulsion_gain, "g_rep, flock repulsion offset (m)");
  out << YAML::Key << "lead_aligned_axes" << YAML::Value << c.lead_aligned_axes;
  out << YAML::Comment("per-axis weights act along/across the lead heading");
  out << YAML::EndMap;

  out << YAML::Key << "fov" << YAML::Value << YAML::BeginMap;
  w.scalar("a", c.ellipse.semi_axis_long, "longitudinal semi axis (m)");
  w.scalar("b", c.ellipse.semi_axis_lat, "lateral semi axis (m)");
  out << YAML::EndMap;

  out << YAML::Key << "lifecycle" << YAML::Value << YAML::BeginMap;
  w.scalar("cycle_duration", c.lifecycle.cycle_duration, "seconds");
  w.scalar("spawn_interval", c.lifecycle.spawn_interval, "seconds");
  w.integer("max_boid_age", c.lifecycle.max_boid_age, "cycles");
  w.scalar("spawn_jitter", c.lifecycle.spawn_jitter, "meters");
  out << YAML::EndMap;

  out << YAML::Key << "reachability" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.reachability_filter;
  out << YAML::Key << "mode" << YAML::Value << mode_name(c.reachability.mode);
  out << YAML::Comment("line_search or random_disc");
  w.scalar("detour_factor", c.reachability.detour_factor, "kappa");
  w.integer("max_iterations", c.reachability.max_iterations);
  w.scalar("position_perturbation_radius", c.reachability.position_perturbation_radius, "meters");
  w.scalar("heading_perturbation", c.reachability.heading_perturbation, "radians");
  w.scalar("min_reference_length", c.reachability.min_reference_length, "meters");
  w.scalar("max_lateral_accel", c.reachability.max_lateral_accel, "a_lat,max (m/s^2)");
  w.scalar("radius_floor", c.reachability.radius_floor, "meters");
  out << YAML::EndMap;

  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  w.scalar("lateral_sigma", c.noise.lateral_sigma, "meters");
  w.scalar("longitudinal_sigma", c.noise.longitudinal_sigma, "meters");
  w.scalar("bias_event_rate", c.noise.bias_event_rate, "per second and ambiguous pair");
  w.scalar("bias_magnitude", c.noise.bias_magnitude, "meters");
  w.scalar("bias_duration", c.noise.bias_duration, "seconds");
  w.scalar("merge_probability_per_cycle", c.noise.merge_probability_per_cycle);
  w.scalar("merge_speed_gate", c.noise.merge_speed_gate, "m/s");
  w.scalar("merge_range_gate", c.noise.merge_range_gate, "meters");
  w.scalar("merge_duration", c.noise.merge_duration, "seconds");
  out << YAML::EndMap;

  out << YAML::Key << "metrics" << YAML::Value << YAML::BeginMap;
  w.scalar("parallel_gate", c.metrics.parallel_gate, "meters");
  out << YAML::Key << "ego_left" << YAML::Value << YAML::Flow << YAML::BeginSeq << c.metrics.ego_left.first
      << c.metrics.ego_left.second << YAML::EndSeq;
  out << YAML::Key << "ego_right" << YAML::Value << YAML::Flow << YAML::BeginSeq << c.metrics.ego_right.first
      << c.metrics.ego_right.second << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  w.integer("N_b", c.flock_size, "N_b, boids per flock");
  out << YAML::Key << "sweep_N_b" << YAML::Value << YAML::Flow << c.sweep_flock_sizes;
  w.integer("runs", c.runs, "Monte-Carlo runs");
  out << YAML::Key << "seed" << YAML::Value << c.master_seed;
  out << YAML::Key << "output" << YAML::Value << c.output_dir.string();
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void save_run_config(const std::filesystem::path& path, const RunConfig& config) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << dump_run_config(config);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace boidplaus
