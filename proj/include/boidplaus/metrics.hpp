#ifndef BOIDPLAUS_METRICS_HPP
#define BOIDPLAUS_METRICS_HPP

// Lateral separation samples for the evaluated vehicle pairs and the
// distribution statistics behind the violin plots.

#include "boidplaus/flocking.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace boidplaus {

enum class VehiclePair { ego_left, ego_right };
enum class SampleSource { boids, tracked, ground_truth };

inline constexpr std::array<VehiclePair, 2> kVehiclePairs = {VehiclePair::ego_left, VehiclePair::ego_right};
inline constexpr std::array<SampleSource, 3> kSampleSources = {SampleSource::boids, SampleSource::tracked,
                                                               SampleSource::ground_truth};

std::string_view to_string(VehiclePair pair);
std::string_view to_string(SampleSource source);
VehiclePair parse_pair(std::string_view text);
SampleSource parse_source(std::string_view text);

struct PairDefinition {
  std::int64_t first = 0;
  std::int64_t second = 0;
};

struct MetricsConfig {
  double parallel_gate = 50.0;    // meters of longitudinal gap
  PairDefinition ego_left{1, 2};
  PairDefinition ego_right{2, 3};

  const PairDefinition& members(VehiclePair pair) const { return pair == VehiclePair::ego_left ? ego_left : ego_right; }
  void validate() const;
};

struct SeparationSample {
  std::uint64_t run_seed = 0;
  std::int64_t cycle = 0;
  VehiclePair pair = VehiclePair::ego_left;
  SampleSource source = SampleSource::tracked;
  double value = 0.0;  // meters
};

struct DistributionSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double p1 = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
  double p99 = 0.0;
};

/// Mean boid position of a flock; empty flocks yield nothing.
std::optional<Vec2> swarm_position(const Flock& flock);

/// Mean lateral boid position of a flock; empty flocks yield nothing.
std::optional<double> swarm_lateral_position(const Flock& flock);

/// |y_a - y_b| when the longitudinal gap is within the gate.
std::optional<double> sample_separation(const Vec2& a, const Vec2& b, double parallel_gate);

/// Percentile q in [0, 100] of sorted data, linear between closest ranks.
double percentile_sorted(std::span<const double> sorted, double q);

/// Throws std::invalid_argument on empty input.
DistributionSummary summarize(std::span<const double> samples);

struct SummaryRow {
  VehiclePair pair = VehiclePair::ego_left;
  SampleSource source = SampleSource::tracked;
  int flock_size = 0;
  DistributionSummary summary;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;
  std::vector<std::string> warnings;

  const SummaryRow* find(VehiclePair pair, SampleSource source, int flock_size) const;
};

/// Pools samples per (pair, source); empty groups are reported as warnings.
SummaryTable summarize_samples(std::span<const SeparationSample> samples, int flock_size);

/// Fixed six-decimal rendering used in every exported number.
std::string format_fixed(double value);

void write_samples_csv(const std::filesystem::path& path, std::span<const SeparationSample> samples);
std::vector<SeparationSample> read_samples_csv(const std::filesystem::path& path);
void write_summary_json(const std::filesystem::path& path, const SummaryTable& table);
void write_summary_csv(const std::filesystem::path& path, const SummaryTable& table);

}  // namespace boidplaus

#endif  // BOIDPLAUS_METRICS_HPP
