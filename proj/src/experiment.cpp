#include "boidplaus/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

namespace boidplaus {
namespace {

std::optional<Vec2> tracked_position(std::span<const TrackedObject> tracked, std::int64_t id) {
  for (const auto& t : tracked)
    if (t.id == id) return t.position;
  return std::nullopt;
}

std::optional<Vec2> truth_position(const GroundTruthFrame& frame, std::int64_t id) {
  if (const auto* t = frame.find(id)) return t->pose.position;
  return std::nullopt;
}

std::optional<Vec2> boid_position(const FlockManager& manager, std::int64_t id) {
  if (const Flock* f = manager.find(id)) return swarm_position(*f);
  return std::nullopt;
}

void accumulate(StepStatistics& total, const StepStatistics& s) {
  total.accepted += s.accepted;
  total.adjusted += s.adjusted;
  total.kept_previous += s.kept_previous;
  total.retired += s.retired;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t master_seed, int run_index) {
  return derive_seed({master_seed, static_cast<std::uint64_t>(Stream::run), static_cast<std::uint64_t>(run_index)});
}

RunResult run_scenario(const RunConfig& config, int flock_size, std::uint64_t seed, const CycleObserver& observer) {
  RunResult result;
  result.run_seed = seed;

  LifecycleConfig lifecycle = config.lifecycle;
  lifecycle.target_flock_size = flock_size;
  const double dt = lifecycle.cycle_duration;

  const std::vector<GroundTruthFrame> frames = generate_ground_truth(config.scenario, dt);
  Rng event_rng(derive_seed({seed, static_cast<std::uint64_t>(Stream::events)}));
  const EventTimeline events = schedule_events(config.noise, frames, dt, event_rng);
  Rng sensing_rng(derive_seed({seed, static_cast<std::uint64_t>(Stream::sensing)}));

  StepContext context;
  context.weights = config.weights;
  context.ellipse = config.ellipse;
  context.policy = config.reachability;
  context.cycle_duration = dt;
  context.reachability_filter = config.reachability_filter;
  context.lead_aligned_axes = config.lead_aligned_axes;

  FlockManager manager(seed);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const GroundTruthFrame& frame = frames[k];
    const std::vector<TrackedObject> tracked = observe(frame, config.noise, events, sensing_rng);
    if (k > 0) manager.compensate_frame_motion(ego_motion(frames[k - 1].ego_world, frame.ego_world));
    manager.sync_flocks(tracked);
    manager.spawn_boids(lifecycle);

    for (VehiclePair pair : kVehiclePairs) {
      const PairDefinition& ids = config.metrics.members(pair);
      auto emit = [&](SampleSource source, const std::optional<Vec2>& a, const std::optional<Vec2>& b) {
        if (!a || !b) return;
        if (const auto value = sample_separation(*a, *b, config.metrics.parallel_gate))
          result.samples.push_back({seed, frame.cycle, pair, source, *value});
      };
      emit(SampleSource::boids, boid_position(manager, ids.first), boid_position(manager, ids.second));
      emit(SampleSource::tracked, tracked_position(tracked, ids.first), tracked_position(tracked, ids.second));
      emit(SampleSource::ground_truth, truth_position(frame, ids.first), truth_position(frame, ids.second));
    }

    if (observer) observer(CycleRecord{frame.cycle, frame, tracked, manager});
    accumulate(result.steps, manager.step_cycle(context, lifecycle));
  }
  return result;
}

MonteCarloResult run_monte_carlo(const RunConfig& config, int flock_size, unsigned threads) {
  config.validate();
  const auto runs = static_cast<std::size_t>(config.runs);
  std::vector<RunResult> results(runs);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(runs));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < runs; i = next++) {
      try {
        results[i] = run_scenario(config, flock_size, run_seed(config.master_seed, static_cast<int>(i)));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  MonteCarloResult out;
  out.flock_size = flock_size;
  for (auto& r : results) {
    out.samples.insert(out.samples.end(), r.samples.begin(), r.samples.end());
    accumulate(out.steps, r.steps);
  }
  out.summary = summarize_samples(out.samples, flock_size);
  return out;
}

ExperimentFiles export_results(const MonteCarloResult& result, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + directory.string() + "': " + ec.message());
  const std::string nb = std::to_string(result.flock_size);
  ExperimentFiles files{directory / ("samples_" + nb + ".csv"), directory / ("summary_" + nb + ".json"),
                        directory / ("summary_" + nb + ".csv")};
  write_samples_csv(files.samples, result.samples);
  write_summary_json(files.summary_json, result.summary);
  write_summary_csv(files.summary_csv, result.summary);
  return files;
}

void write_comparison_csv(const std::filesystem::path& path, std::span<const MonteCarloResult> results) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "pair,source,N_b,count,mean,p1,p25,p50,p75,p99\n";
  for (VehiclePair pair : kVehiclePairs) {
    for (SampleSource source : kSampleSources) {
      for (const auto& r : results) {
        const SummaryRow* row = r.summary.find(pair, source, r.flock_size);
        if (!row) continue;
        const auto& s = row->summary;
        out << to_string(pair) << ',' << to_string(source) << ',' << r.flock_size << ',' << s.count << ','
            << format_fixed(s.mean) << ',' << format_fixed(s.p1) << ',' << format_fixed(s.p25) << ','
            << format_fixed(s.p50) << ',' << format_fixed(s.p75) << ',' << format_fixed(s.p99) << '\n';
      }
    }
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace boidplaus
