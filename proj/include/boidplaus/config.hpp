#ifndef BOIDPLAUS_CONFIG_HPP
#define BOIDPLAUS_CONFIG_HPP

// Run configuration and its YAML representation.

#include "boidplaus/dubins.hpp"
#include "boidplaus/flocking.hpp"
#include "boidplaus/lifecycle.hpp"
#include "boidplaus/metrics.hpp"
#include "boidplaus/scenario.hpp"
#include "boidplaus/sensing.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace boidplaus {

struct RunConfig {
  ScenarioConfig scenario = build_default_scenario();
  RuleWeights weights;
  bool lead_aligned_axes = true;
  FovEllipse ellipse;
  LifecycleConfig lifecycle;
  ReachabilityPolicy reachability;
  bool reachability_filter = true;
  NoiseModel noise;
  MetricsConfig metrics;
  int flock_size = 7;
  std::vector<int> sweep_flock_sizes{3, 7, 14};
  int runs = 200;
  std::uint64_t master_seed = 42;
  std::filesystem::path output_dir = "out";

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

RunConfig default_run_config();

/// Parses and validates YAML text; absent keys keep their defaults.
RunConfig parse_run_config(const std::string& yaml_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Full effective configuration, every field written, with parameter symbols in comments.
std::string dump_run_config(const RunConfig& config);
void save_run_config(const std::filesystem::path& path, const RunConfig& config);

}  // namespace boidplaus

#endif  // BOIDPLAUS_CONFIG_HPP
