#ifndef BOIDPLAUS_EXPERIMENT_HPP
#define BOIDPLAUS_EXPERIMENT_HPP

// Monte-Carlo scenario runs: ground truth, tracker surrogate, flocks and
// separation sampling wired together per cycle.

#include "boidplaus/config.hpp"
#include "boidplaus/lifecycle.hpp"
#include "boidplaus/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace boidplaus {

/// State handed to observers once per cycle, after spawning and before the flock update.
struct CycleRecord {
  std::int64_t cycle = 0;
  const GroundTruthFrame& truth;
  std::span<const TrackedObject> tracked;
  const FlockManager& flocks;
};

using CycleObserver = std::function<void(const CycleRecord&)>;

struct RunResult {
  std::uint64_t run_seed = 0;
  std::vector<SeparationSample> samples;
  StepStatistics steps;
};

std::uint64_t run_seed(std::uint64_t master_seed, int run_index);

/// One scenario simulation with `flock_size` boids per flock.
RunResult run_scenario(const RunConfig& config, int flock_size, std::uint64_t seed,
                       const CycleObserver& observer = {});

/// All runs of an experiment, pooled in run-index order.
struct MonteCarloResult {
  int flock_size = 0;
  std::vector<SeparationSample> samples;
  StepStatistics steps;
  SummaryTable summary;
};

MonteCarloResult run_monte_carlo(const RunConfig& config, int flock_size, unsigned threads = 0);

struct ExperimentFiles {
  std::filesystem::path samples;
  std::filesystem::path summary_json;
  std::filesystem::path summary_csv;
};

/// Writes samples_<Nb>.csv, summary_<Nb>.json and summary_<Nb>.csv into `directory`.
ExperimentFiles export_results(const MonteCarloResult& result, const std::filesystem::path& directory);

/// Median/percentile comparison across flock sizes, one row per (pair, source, N_b).
void write_comparison_csv(const std::filesystem::path& path, std::span<const MonteCarloResult> results);

}  // namespace boidplaus

#endif  // BOIDPLAUS_EXPERIMENT_HPP
