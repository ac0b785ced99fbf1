// Command-line front end for the experiment harness.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "radcom/channel.hpp"
#include "radcom/harness.hpp"

namespace {

using namespace radcom;
using nlohmann::json;

struct CommonOptions {
  std::string config_path;
  std::string preset_name;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> workers;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "JSON config (applied on top of the preset)");
  std::string names;
  for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
  sub->add_option("--preset", o.preset_name, "named experiment preset: " + names);
  sub->add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  sub->add_option("--seed", o.seed, "base seed");
  sub->add_option("--trials", o.trials, "Monte Carlo trials");
  sub->add_option("--workers", o.workers, "worker threads (does not change results)");
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig cfg = o.preset_name.empty() ? ExperimentConfig{} : preset(o.preset_name);
  if (!o.config_path.empty()) cfg = load_config(o.config_path, cfg);
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.workers) cfg.workers = *o.workers;
  cfg.validate();
  return cfg;
}

void report(const std::string& path) { std::printf("wrote %s\n", path.c_str()); }

int cmd_design_radar(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const CovarianceTarget radar = design_radar(cfg);
  const SteeringGrid grid = make_grid(cfg);
  report(write_pattern_csv(o.out_dir, "pattern.csv", grid, beampattern(radar.r, grid)));
  save_matrix_csv(o.out_dir + "/covariance.csv", radar.r);
  report(o.out_dir + "/covariance.csv");
  json summary;
  summary["artifact_version"] = artifact_version();
  summary["config"] = config_to_json(cfg);
  summary["radar"] = {{"iterations", radar.iterations},
                      {"objective", radar.objective},
                      {"alpha_scale", radar.alpha_scale},
                      {"pslr_db", pslr(beampattern(radar.r, grid), mainlobe_mask(cfg.beam_list(), grid, cfg.guard_points))},
                      {"termination", radar.iterations >= cfg.design.max_iterations ? "max_iterations" : "converged"}};
  report(write_summary(o.out_dir, summary));
  return 0;
}

int cmd_run(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const RunResult run = run_experiment(cfg);
  const SteeringGrid grid = make_grid(cfg);
  const auto first_ok = std::find_if(run.trials.begin(), run.trials.end(), [](const auto& t) { return t.ok; });
  if (first_ok != run.trials.end()) {
    report(write_pattern_csv(o.out_dir, "pattern.csv", grid, first_ok->pattern));
    report(write_pattern_csv(o.out_dir, "radar_pattern.csv", grid, first_ok->radar_pattern));
    if (cfg.n_users > 0) report(write_trace(o.out_dir, "trace.csv", first_ok->report));
  }
  SweepPoint point{cfg, run, ""};
  report(write_tradeoff_csv(o.out_dir, {point}));
  report(write_sinr_csv(o.out_dir, run));
  report(write_sinr_hist_csv(o.out_dir, run));
  report(write_summary(o.out_dir, run_summary(run)));
  std::printf("avg_sinr_db %.3f  pslr_db %.3f  mse %.4g  ok %d/%d\n", run.point.avg_sinr_db, run.point.pslr_db,
              run.point.mse, run.point.trials, cfg.trials);
  return run.failures == cfg.trials ? 1 : 0;
}

int cmd_sweep(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  if (cfg.sweep.empty()) throw ConfigError("sweep: the config has no sweep section");
  const auto points = run_sweep(cfg, cfg.sweep);
  report(write_tradeoff_csv(o.out_dir, points));
  json summary;
  summary["artifact_version"] = artifact_version();
  summary["config"] = config_to_json(cfg);
  summary["points"] = json::array();
  for (const auto& p : points) {
    json entry;
    entry["deployment"] = to_string(p.config.deployment);
    entry["rho"] = {p.config.rho1, p.config.rho2};
    entry["gamma_db"] = p.config.gamma_db;
    if (p.result) {
      auto s = run_summary(*p.result);
      s.erase("config");
      s.erase("artifact_version");
      entry.update(s);
      entry["seconds_per_trial"] = p.result->seconds / cfg.trials;
    } else {
      entry["error"] = p.error;
    }
    summary["points"].push_back(entry);
  }
  report(write_summary(o.out_dir, summary));
  return 0;
}

int cmd_trace(const CommonOptions& o) {
  ExperimentConfig cfg = resolve(o);
  json summary;
  summary["artifact_version"] = artifact_version();
  summary["config"] = config_to_json(cfg);
  if (!cfg.compare_variants) {
    ExperimentConfig one = cfg;
    one.trials = 1;
    const RunResult run = run_experiment(one);
    if (!run.trials.front().ok) throw std::runtime_error(run.trials.front().error);
    const auto& rep = run.trials.front().report;
    report(write_trace(o.out_dir, "trace.csv", rep));
    summary["termination"] = to_string(rep.termination);
    summary["iterations"] = rep.iterations;
    summary["iterations_to_delta"] = iterations_to_delta(rep, cfg.solver.delta);
    report(write_summary(o.out_dir, summary));
    return 0;
  }
  const auto records = run_convergence(cfg);
  std::string path = o.out_dir + "/convergence.csv";
  {
    std::filesystem::create_directories(o.out_dir);
    std::ofstream os(path);
    os << "power_mode,penalty,trial,iterations_to_delta,iterations,termination,final_cost,mean_sinr_db\n";
    for (const auto& r : records) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.10g,%.6f", r.report.final_cost, r.mean_sinr_db);
      os << to_string(r.power_mode) << ',' << to_string(r.penalty) << ',' << r.trial << ','
         << r.iterations_to_delta << ',' << r.report.iterations << ',' << to_string(r.report.termination) << ','
         << buf << '\n';
    }
  }
  report(path);
  std::map<std::string, std::map<std::string, int>> statuses;
  for (const auto& r : records) {
    const auto key = variant_key(r.power_mode, r.penalty);
    if (r.trial == 0) {
      report(write_trace(o.out_dir, "trace_" + key + ".csv", r.report));
      if (r.power_mode == cfg.power_mode && r.penalty == cfg.penalty) {
        report(write_trace(o.out_dir, "trace.csv", r.report));
      }
    }
    ++statuses[key][to_string(r.report.termination)];
  }
  summary["terminations"] = statuses;
  report(write_summary(o.out_dir, summary));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint radar-communication beamforming experiments"};
  app.require_subcommand(1);
  CommonOptions opts;
  auto* design = app.add_subcommand("design-radar", "design the radar-only covariance and write its pattern");
  auto* run = app.add_subcommand("run", "Monte Carlo run of one configuration");
  auto* sweep = app.add_subcommand("sweep", "run every point of the config's sweep");
  auto* trace = app.add_subcommand("trace", "solver convergence traces");
  for (auto* sub : {design, run, sweep, trace}) add_common(sub, opts);
  CLI11_PARSE(app, argc, argv);
  try {
    if (design->parsed()) return cmd_design_radar(opts);
    if (run->parsed()) return cmd_run(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
    if (trace->parsed()) return cmd_trace(opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
