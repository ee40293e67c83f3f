#include "boidplaus/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace boidplaus {
namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

std::string_view to_string(VehiclePair pair) {
  return pair == VehiclePair::ego_left ? "Ego-Left" : "Ego-Right";
}

std::string_view to_string(SampleSource source) {
  switch (source) {
    case SampleSource::boids: return "boids";
    case SampleSource::tracked: return "tracked";
    case SampleSource::ground_truth: return "ground-truth";
  }
  return "?";
}

VehiclePair parse_pair(std::string_view text) {
  for (VehiclePair p : kVehiclePairs)
    if (to_string(p) == text) return p;
  throw std::invalid_argument("unknown vehicle pair '" + std::string(text) + "'");
}

SampleSource parse_source(std::string_view text) {
  for (SampleSource s : kSampleSources)
    if (to_string(s) == text) return s;
  throw std::invalid_argument("unknown sample source '" + std::string(text) + "'");
}

void MetricsConfig::validate() const {
  if (!(parallel_gate > 0)) throw std::invalid_argument("metrics: parallel_gate must be positive");
}

std::optional<Vec2> swarm_position(const Flock& flock) {
  if (flock.boids.empty()) return std::nullopt;
  Vec2 sum = Vec2::Zero();
  for (const auto& b : flock.boids) sum += b.position;
  return Vec2(sum / static_cast<double>(flock.boids.size()));
}

std::optional<double> swarm_lateral_position(const Flock& flock) {
  if (const auto p = swarm_position(flock)) return p->y();
  return std::nullopt;
}

std::optional<double> sample_separation(const Vec2& a, const Vec2& b, double parallel_gate) {
  if (std::abs(a.x() - b.x()) > parallel_gate) return std::nullopt;
  return std::abs(a.y() - b.y());
}

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("percentile of empty data");
  const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DistributionSummary summarize(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("summarize: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  DistributionSummary s;
  s.count = sorted.size();
  // sorted order makes the sum independent of input order
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  s.min = sorted.front();
  s.max = sorted.back();
  s.mean = std::clamp(s.mean, s.min, s.max);
  s.p1 = percentile_sorted(sorted, 1);
  s.p25 = percentile_sorted(sorted, 25);
  s.p50 = percentile_sorted(sorted, 50);
  s.p75 = percentile_sorted(sorted, 75);
  s.p99 = percentile_sorted(sorted, 99);
  return s;
}

const SummaryRow* SummaryTable::find(VehiclePair pair, SampleSource source, int flock_size) const {
  for (const auto& row : rows)
    if (row.pair == pair && row.source == source && row.flock_size == flock_size) return &row;
  return nullptr;
}

SummaryTable summarize_samples(std::span<const SeparationSample> samples, int flock_size) {
  SummaryTable table;
  for (VehiclePair pair : kVehiclePairs) {
    for (SampleSource source : kSampleSources) {
      std::vector<double> values;
      for (const auto& s : samples)
        if (s.pair == pair && s.source == source) values.push_back(s.value);
      if (values.empty()) {
        table.warnings.push_back("no samples for pair " + std::string(to_string(pair)) + ", source " +
                                 std::string(to_string(source)) + ", N_b=" + std::to_string(flock_size));
        continue;
      }
      table.rows.push_back({pair, source, flock_size, summarize(values)});
    }
  }
  return table;
}

std::string format_fixed(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  std::string text(buffer);
  if (text == "-0.000000") text = "0.000000";
  return text;
}

void write_samples_csv(const std::filesystem::path& path, std::span<const SeparationSample> samples) {
  auto out = open_output(path);
  out << "run_seed,cycle,pair,source,value\n";
  for (const auto& s : samples)
    out << s.run_seed << ',' << s.cycle << ',' << to_string(s.pair) << ',' << to_string(s.source) << ','
        << format_fixed(s.value) << '\n';
  finish_output(out, path);
}

std::vector<SeparationSample> read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::vector<SeparationSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::stringstream ss(line);
    std::string seed, cycle, pair, source, value;
    if (!std::getline(ss, seed, ',') || !std::getline(ss, cycle, ',') || !std::getline(ss, pair, ',') ||
        !std::getline(ss, source, ',') || !std::getline(ss, value, ','))
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 5 columns");
    try {
      samples.push_back({std::stoull(seed), std::stoll(cycle), parse_pair(pair), parse_source(source), std::stod(value)});
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return samples;
}

void write_summary_json(const std::filesystem::path& path, const SummaryTable& table) {
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r;
    r["pair"] = to_string(row.pair);
    r["source"] = to_string(row.source);
    r["N_b"] = row.flock_size;
    r["count"] = row.summary.count;
    r["mean"] = round6(row.summary.mean);
    r["p1"] = round6(row.summary.p1);
    r["p25"] = round6(row.summary.p25);
    r["p50"] = round6(row.summary.p50);
    r["p75"] = round6(row.summary.p75);
    r["p99"] = round6(row.summary.p99);
    doc["rows"].push_back(r);
  }
  doc["warnings"] = table.warnings;
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
  finish_output(out, path);
}

void write_summary_csv(const std::filesystem::path& path, const SummaryTable& table) {
  auto out = open_output(path);
  out << "pair,source,N_b,count,mean,p1,p25,p50,p75,p99\n";
  for (const auto& row : table.rows) {
    const auto& s = row.summary;
    out << to_string(row.pair) << ',' << to_string(row.source) << ',' << row.flock_size << ',' << s.count << ','
        << format_fixed(s.mean) << ',' << format_fixed(s.p1) << ',' << format_fixed(s.p25) << ','
        << format_fixed(s.p50) << ',' << format_fixed(s.p75) << ',' << format_fixed(s.p99) << '\n';
  }
  finish_output(out, path);
}

}  // namespace boidplaus
