// Command line entry points: simulate, sweep, dubins, stats.

#include "boidplaus/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace boidplaus;
namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::vector<int> nb;
  std::string out;
  unsigned threads = 0;
};

RunConfig effective_config(const CommonOptions& o) {
  RunConfig c = o.config.empty() ? default_run_config() : load_run_config(o.config);
  if (o.seed) c.master_seed = *o.seed;
  if (o.runs) c.runs = *o.runs;
  if (!o.out.empty()) c.output_dir = o.out;
  c.validate();
  return c;
}

void print_table(const SummaryTable& table) {
  std::printf("%-9s %-12s %4s %8s %9s %9s %9s %9s %9s %9s\n", "pair", "source", "N_b", "count", "mean", "p1", "p25",
              "p50", "p75", "p99");
  for (const auto& row : table.rows) {
    const auto& s = row.summary;
    std::printf("%-9s %-12s %4d %8zu %9.3f %9.3f %9.3f %9.3f %9.3f %9.3f\n", std::string(to_string(row.pair)).c_str(),
                std::string(to_string(row.source)).c_str(), row.flock_size, s.count, s.mean, s.p1, s.p25, s.p50,
                s.p75, s.p99);
  }
  for (const auto& w : table.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

// Ground truth and tracked stream of run 0, for debugging.
void export_debug_streams(const RunConfig& config, int nb, const std::string& truth_path,
                          const std::string& tracked_path) {
  std::optional<std::ofstream> truth, tracked;
  if (!truth_path.empty()) {
    truth = open_output(truth_path);
    *truth << "cycle,id,x,y,heading,vx,vy\n";
  }
  if (!tracked_path.empty()) {
    tracked = open_output(tracked_path);
    *tracked << "cycle,id,x,y,vx,vy\n";
  }
  run_scenario(config, nb, run_seed(config.master_seed, 0), [&](const CycleRecord& r) {
    if (truth) {
      for (const auto& t : r.truth.targets)
        *truth << r.cycle << ',' << t.id << ',' << format_fixed(t.pose.position.x()) << ','
               << format_fixed(t.pose.position.y()) << ',' << format_fixed(t.pose.heading) << ','
               << format_fixed(t.velocity.x()) << ',' << format_fixed(t.velocity.y()) << '\n';
    }
    if (tracked) {
      for (const auto& t : r.tracked)
        *tracked << r.cycle << ',' << t.id << ',' << format_fixed(t.position.x()) << ','
                 << format_fixed(t.position.y()) << ',' << format_fixed(t.velocity.x()) << ','
                 << format_fixed(t.velocity.y()) << '\n';
    }
  });
  if (truth && !*truth) throw std::runtime_error("write failed for '" + truth_path + "'");
  if (tracked && !*tracked) throw std::runtime_error("write failed for '" + tracked_path + "'");
}

MonteCarloResult run_and_export(const RunConfig& config, int nb, unsigned threads) {
  std::fprintf(stderr, "N_b=%d: %d runs\n", nb, config.runs);
  MonteCarloResult result = run_monte_carlo(config, nb, threads);
  const ExperimentFiles files = export_results(result, config.output_dir);
  std::fprintf(stderr, "  wrote %s, %s, %s\n", files.samples.string().c_str(), files.summary_json.string().c_str(),
               files.summary_csv.string().c_str());
  std::fprintf(stderr, "  steps: accepted %lld, adjusted %lld, kept-previous %lld\n",
               static_cast<long long>(result.steps.accepted), static_cast<long long>(result.steps.adjusted),
               static_cast<long long>(result.steps.kept_previous));
  return result;
}

std::vector<double> parse_pose(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) values.push_back(std::stod(item));
  if (values.size() != 3) throw std::invalid_argument("pose '" + text + "' must be x,y,heading");
  return values;
}

int flock_size_from_name(const fs::path& path) {
  static const std::regex pattern(R"(samples_(\d+)\.csv)");
  std::smatch m;
  const std::string name = path.filename().string();
  if (std::regex_match(name, m, pattern)) return std::stoi(m[1].str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flocking-based target plausibilization: simulation, sweeps and diagnostics"};
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&](CLI::App* cmd, bool nb_list) {
    cmd->add_option("--config", common.config, "YAML run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--seed", common.seed, "master seed");
    cmd->add_option("--runs", common.runs, "Monte-Carlo runs")->check(CLI::PositiveNumber);
    if (nb_list)
      cmd->add_option("--nb", common.nb, "flock sizes, comma separated")->delimiter(',');
    else
      cmd->add_option("--nb", common.nb, "flock size")->expected(1);
    cmd->add_option("--out", common.out, "output directory");
    cmd->add_option("--threads", common.threads, "worker threads, 0 = hardware concurrency");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo runs for one flock size");
  add_common(simulate, false);
  std::string truth_csv, tracked_csv;
  simulate->add_option("--truth-csv", truth_csv, "write ground truth of run 0 (cycle,id,x,y,heading,vx,vy)");
  simulate->add_option("--tracked-csv", tracked_csv, "write tracked objects of run 0 (cycle,id,x,y,vx,vy)");

  CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo runs for several flock sizes plus a comparison table");
  add_common(sweep, true);

  CLI::App* dubins = app.add_subcommand("dubins", "Shortest Dubins path and reachability verdict for two poses");
  std::string start_text, target_text, polyline_csv;
  std::optional<double> radius, speed;
  double step = 0.5;
  dubins->add_option("--start", start_text, "start pose x,y,heading")->required();
  dubins->add_option("--target", target_text, "target pose x,y,heading")->required();
  auto* radius_opt = dubins->add_option("--radius", radius, "turning radius (m)");
  dubins->add_option("--speed", speed, "derive the radius from this speed (m/s)")->excludes(radius_opt);
  dubins->add_option("--config", common.config, "YAML run configuration for the reachability policy")
      ->check(CLI::ExistingFile);
  dubins->add_option("--polyline", polyline_csv, "write the sampled path as CSV (x,y,heading)");
  dubins->add_option("--step", step, "polyline spacing (m)")->check(CLI::PositiveNumber);

  CLI::App* stats = app.add_subcommand("stats", "Re-summarize existing sample CSV files");
  std::vector<std::string> sample_files;
  stats->add_option("files", sample_files, "samples_<N_b>.csv files")->required()->check(CLI::ExistingFile);
  stats->add_option("--nb", common.nb, "flock size label when it cannot be read from the file name")->expected(1);
  stats->add_option("--out", common.out, "write summary_<N_b>.json/.csv here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      RunConfig config = effective_config(common);
      const int nb = common.nb.empty() ? config.flock_size : common.nb.front();
      config.flock_size = nb;
      config.validate();
      ensure_directory(config.output_dir);
      save_run_config(config.output_dir / "config.yaml", config);
      const MonteCarloResult result = run_and_export(config, nb, common.threads);
      if (!truth_csv.empty() || !tracked_csv.empty()) export_debug_streams(config, nb, truth_csv, tracked_csv);
      print_table(result.summary);
    } else if (*sweep) {
      RunConfig config = effective_config(common);
      if (!common.nb.empty()) config.sweep_flock_sizes = common.nb;
      config.validate();
      ensure_directory(config.output_dir);
      save_run_config(config.output_dir / "config.yaml", config);
      std::vector<MonteCarloResult> results;
      for (int nb : config.sweep_flock_sizes) results.push_back(run_and_export(config, nb, common.threads));
      write_comparison_csv(config.output_dir / "comparison.csv", results);
      for (const auto& r : results) print_table(r.summary);
    } else if (*dubins) {
      const RunConfig config = common.config.empty() ? default_run_config() : load_run_config(common.config);
      const auto s = parse_pose(start_text);
      const auto t = parse_pose(target_text);
      const Pose start(s[0], s[1], s[2]);
      const Pose target(t[0], t[1], t[2]);
      double r = 0;
      if (radius) {
        r = *radius;
      } else if (speed) {
        r = min_turn_radius(*speed, config.reachability.max_lateral_accel, config.reachability.radius_floor);
      } else {
        throw std::invalid_argument("dubins: give --radius or --speed");
      }
      if (!(r > 0)) throw std::invalid_argument("dubins: radius must be positive");
      const DubinsPath path = shortest_dubins_path(start, target, r);
      const bool reachable = is_reachable(start, target, r, config.reachability);
      std::printf("radius %.6f\nword %s\nsegments %.6f %.6f %.6f\nlength %.6f\ndistance %.6f\nreachable %s\n", r,
                  std::string(to_string(path.word)).c_str(), path.segment_lengths[0], path.segment_lengths[1],
                  path.segment_lengths[2], path.total_length, (target.position - start.position).norm(),
                  reachable ? "yes" : "no");
      if (!polyline_csv.empty()) {
        std::ofstream out = open_output(polyline_csv);
        out << "x,y,heading\n";
        for (const Pose& p : sample_polyline(path, step))
          out << format_fixed(p.position.x()) << ',' << format_fixed(p.position.y()) << ','
              << format_fixed(p.heading) << '\n';
        if (!out) throw std::runtime_error("write failed for '" + polyline_csv + "'");
      }
    } else if (*stats) {
      for (const auto& file : sample_files) {
        int nb = flock_size_from_name(file);
        if (!common.nb.empty()) nb = common.nb.front();
        if (nb <= 0) throw std::invalid_argument("cannot infer N_b from '" + file + "'; pass --nb");
        const std::vector<SeparationSample> samples = read_samples_csv(file);
        const SummaryTable table = summarize_samples(samples, nb);
        print_table(table);
        if (!common.out.empty()) {
          ensure_directory(common.out);
          const fs::path dir(common.out);
          const std::string tag = std::to_string(nb);
          write_summary_json(dir / ("summary_" + tag + ".json"), table);
          write_summary_csv(dir / ("summary_" + tag + ".csv"), table);
        }
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
