#include "radcom/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "radcom/channel.hpp"
#include "radcom/manifolds.hpp"
#include "radcom/objectives.hpp"

#ifndef RADCOM_ARTIFACT_VERSION
#define RADCOM_ARTIFACT_VERSION "0.1.0"
#endif

namespace radcom {

using nlohmann::json;

namespace {

// Seed streams; every trial derives its own seeds so worker order is irrelevant.
constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kInitStream = 2;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <class Fn>
void parallel_for(int n, int workers, Fn&& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct SolveOutcome {
  Matrix t;  // N x K
  SolverReport report;
};

SolveOutcome solve_shared(const ProblemData& data, PowerMode mode, Penalty penalty, double p0,
                          const SolverConfig& solver, std::uint64_t init_seed) {
  const Objective objective = make_objective(mode, penalty, data);
  std::mt19937_64 rng(init_seed);
  const auto n = data.n_antennas();
  const auto k = data.n_users();
  if (mode == PowerMode::total) {
    const Sphere manifold{p0};
    auto result = rcg_minimize(objective, manifold, manifold.random_point(n, k, rng), solver);
    return {result.point.mat(), std::move(result.report)};
  }
  const Oblique manifold{p0};
  auto result = rcg_minimize(objective, manifold, manifold.random_point(k, n, rng), solver);
  return {result.point.mat().adjoint(), std::move(result.report)};
}

void summarize(RunResult& run) {
  std::vector<double> sinr, pslr, mse;
  std::vector<double> iterations;
  for (const auto& t : run.trials) {
    if (!t.ok) {
      ++run.failures;
      ++run.terminations["error"];
      continue;
    }
    sinr.insert(sinr.end(), t.sinr_db.begin(), t.sinr_db.end());
    pslr.push_back(t.pslr_db);
    mse.push_back(t.mse);
    if (run.config.n_users > 0) ++run.terminations[to_string(t.report.termination)];
  }
  auto& p = run.point;
  p.rho1 = run.config.rho1;
  p.rho2 = run.config.rho2;
  p.gamma_db = run.config.gamma_db.front();
  p.avg_sinr_db = mean(sinr);
  p.pslr_db = mean(pslr);
  p.mse = mean(mse);
  p.trials = static_cast<int>(pslr.size());
}

}  // namespace

std::string artifact_version() { return RADCOM_ARTIFACT_VERSION; }

SteeringGrid make_grid(const ExperimentConfig& cfg) {
  return SteeringGrid(cfg.grid_size, cfg.n_antennas, cfg.spacing);
}

CovarianceTarget design_radar(const ExperimentConfig& cfg) {
  cfg.validate();
  const SteeringGrid grid = make_grid(cfg);
  return design_covariance(ideal_pattern(cfg.beam_list(), grid), grid, cfg.power_mode, cfg.p0_mw(),
                           std::nullopt, cfg.design);
}

RunResult run_shared(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.deployment != Deployment::shared) throw ConfigError("run_shared: deployment must be shared");
  const auto t0 = Clock::now();
  RunResult run;
  run.config = cfg;
  const SteeringGrid grid = make_grid(cfg);
  const auto mask = mainlobe_mask(cfg.beam_list(), grid, cfg.guard_points);
  run.radar = design_radar(cfg);
  const Beampattern radar_pattern = beampattern(run.radar->r, grid);
  const RealVector gamma = cfg.gamma_linear();

  run.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, cfg.workers, [&](int i) {
    TrialResult& tr = run.trials[static_cast<std::size_t>(i)];
    const auto start = Clock::now();
    tr.trial = i;
    tr.seed = derive_seed(cfg.seed, kChannelStream, static_cast<std::uint64_t>(i));
    try {
      tr.radar_pattern = radar_pattern;
      if (cfg.n_users == 0) {
        // No users: the array transmits the radar covariance alone.
        tr.beamformer = Matrix::Zero(cfg.n_antennas, 0);
        tr.pattern = radar_pattern;
      } else {
        const auto channel = generate_channel(cfg.n_antennas, cfg.n_users, tr.seed);
        ProblemData data{channel.h, run.radar->r, gamma, cfg.n0_mw(), cfg.rho1, cfg.rho2, cfg.epsilon};
        data.validate();
        auto outcome = solve_shared(data, cfg.power_mode, cfg.penalty, cfg.p0_mw(), cfg.solver,
                                    derive_seed(cfg.seed, kInitStream, static_cast<std::uint64_t>(i)));
        tr.beamformer = std::move(outcome.t);
        tr.report = std::move(outcome.report);
        tr.sinr_db = achieved_sinr_stats(tr.beamformer, channel.h, cfg.n0_mw()).sinr_db;
        tr.pattern = beampattern(tr.beamformer * tr.beamformer.adjoint(), grid);
      }
      tr.pslr_db = pslr(tr.pattern, mask);
      tr.mse = pattern_mse(tr.radar_pattern, tr.pattern);
      tr.ok = true;
    } catch (const std::exception& e) {
      tr.error = e.what();
    }
    tr.seconds = seconds_since(start);
  });
  summarize(run);
  run.seconds = seconds_since(t0);
  return run;
}

RunResult run_separated(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.deployment != Deployment::separated) {
    throw ConfigError("run_separated: deployment must be separated");
  }
  const auto t0 = Clock::now();
  RunResult run;
  run.config = cfg;
  const int n_r = cfg.separated.n_r;
  const int n_c = cfg.separated.n_c;
  const SteeringGrid grid = make_grid(cfg);
  const SteeringGrid radar_grid(grid.angles(), n_r, cfg.spacing);
  const auto mask = mainlobe_mask(cfg.beam_list(), grid, cfg.guard_points);
  const IdealPattern ideal = ideal_pattern(cfg.beam_list(), radar_grid);
  const Matrix a1 = grid.subarray(0, n_r);
  const Matrix a2 = grid.subarray(n_r, n_c);
  const RealVector gamma = cfg.gamma_linear();

  run.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, cfg.workers, [&](int i) {
    TrialResult& tr = run.trials[static_cast<std::size_t>(i)];
    const auto start = Clock::now();
    tr.trial = i;
    tr.seed = derive_seed(cfg.seed, kChannelStream, static_cast<std::uint64_t>(i));
    try {
      PartitionedChannel parts{Matrix::Zero(n_r, 0), Matrix::Zero(n_c, 0)};
      if (cfg.n_users > 0) parts = partition(generate_channel(cfg.n_antennas, cfg.n_users, tr.seed), n_r, n_c);
      const auto radar = design_covariance(ideal, radar_grid, cfg.power_mode, cfg.p_r_mw(),
                                           std::optional<Matrix>(parts.f), cfg.design);
      tr.max_leakage = max_leakage(radar.r, parts.f);
      tr.radar_pattern = composite_pattern_separated(radar.r, Matrix::Zero(n_c, 0), grid);
      if (cfg.n_users == 0) {
        tr.beamformer = Matrix::Zero(n_c, 0);
      } else {
        SeparatedProblemData data;
        data.g = parts.g;
        data.f = parts.f;
        data.r1 = radar.r;
        data.a1 = a1;
        data.a2 = a2;
        data.gamma = gamma;
        data.n0 = cfg.n0_mw();
        data.rho1 = cfg.rho1;
        data.rho2 = cfg.rho2;
        data.finalize();
        const Sphere manifold{cfg.p_c_mw()};
        std::mt19937_64 rng(derive_seed(cfg.seed, kInitStream, static_cast<std::uint64_t>(i)));
        auto result = rcg_minimize(make_zf_objective(data), manifold,
                                   manifold.random_point(n_c, cfg.n_users, rng), cfg.solver);
        tr.beamformer = result.point.mat();
        tr.report = std::move(result.report);
        for (int u = 0; u < cfg.n_users; ++u) {
          tr.sinr_db.push_back(
              linear_to_db(sinr_separated(tr.beamformer, parts.g, parts.f, radar.r, cfg.n0_mw(), u)));
        }
      }
      tr.pattern = composite_pattern_separated(radar.r, tr.beamformer, grid);
      tr.pslr_db = pslr(tr.pattern, mask);
      tr.mse = pattern_mse(tr.radar_pattern, tr.pattern);
      tr.ok = true;
    } catch (const std::exception& e) {
      tr.error = e.what();
    }
    tr.seconds = seconds_since(start);
  });
  summarize(run);
  run.seconds = seconds_since(t0);
  return run;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  return cfg.deployment == Deployment::shared ? run_shared(cfg) : run_separated(cfg);
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, const SweepSpec& sweep) {
  if (sweep.empty()) throw ConfigError("run_sweep: empty sweep");
  std::vector<ExperimentConfig> settings;
  const std::vector<Deployment> deployments =
      sweep.deployments.empty() ? std::vector<Deployment>{cfg.deployment} : sweep.deployments;
  for (auto d : deployments) {
    ExperimentConfig base = cfg;
    base.deployment = d;
    base.sweep = {};
    if (!sweep.rho.empty()) {
      for (const auto& [r1, r2] : sweep.rho) {
        ExperimentConfig c = base;
        c.rho1 = r1;
        c.rho2 = r2;
        settings.push_back(c);
      }
    } else if (!sweep.gamma_db.empty()) {
      for (double g : sweep.gamma_db) {
        ExperimentConfig c = base;
        c.gamma_db = {g};
        settings.push_back(c);
      }
    } else {
      settings.push_back(base);
    }
  }
  std::vector<SweepPoint> points;
  points.reserve(settings.size());
  for (auto& c : settings) {
    SweepPoint p;
    p.config = c;
    try {
      p.result = run_experiment(c);
    } catch (const std::exception& e) {
      p.error = e.what();
    }
    points.push_back(std::move(p));
  }
  return points;
}

int iterations_to_delta(const SolverReport& report, double delta) {
  for (const auto& e : report.trace) {
    if (e.grad_norm < delta) return e.iteration;
  }
  return -1;
}

std::vector<ConvergenceRecord> run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  const SteeringGrid grid = make_grid(cfg);
  const IdealPattern ideal = ideal_pattern(cfg.beam_list(), grid);
  const RealVector gamma = cfg.gamma_linear();
  const std::vector<std::pair<PowerMode, Penalty>> variants{{PowerMode::total, Penalty::sum_square},
                                                            {PowerMode::total, Penalty::max},
                                                            {PowerMode::per_antenna, Penalty::sum_square},
                                                            {PowerMode::per_antenna, Penalty::max}};
  const auto r_total = design_covariance(ideal, grid, PowerMode::total, cfg.p0_mw(), std::nullopt, cfg.design);
  const auto r_per = design_covariance(ideal, grid, PowerMode::per_antenna, cfg.p0_mw(), std::nullopt, cfg.design);

  std::vector<ConvergenceRecord> records(variants.size() * static_cast<std::size_t>(cfg.trials));
  parallel_for(static_cast<int>(records.size()), cfg.workers, [&](int idx) {
    const auto v = static_cast<std::size_t>(idx) / static_cast<std::size_t>(cfg.trials);
    const int trial = idx % cfg.trials;
    const auto [mode, penalty] = variants[v];
    auto rho = std::make_pair(cfg.rho1, cfg.rho2);
    if (auto it = cfg.variant_rho.find(variant_key(mode, penalty)); it != cfg.variant_rho.end()) rho = it->second;
    const auto channel = generate_channel(cfg.n_antennas, cfg.n_users,
                                          derive_seed(cfg.seed, kChannelStream, static_cast<std::uint64_t>(trial)));
    const Matrix& r = mode == PowerMode::total ? r_total.r : r_per.r;
    ProblemData data{channel.h, r, gamma, cfg.n0_mw(), rho.first, rho.second, cfg.epsilon};
    auto outcome = solve_shared(data, mode, penalty, cfg.p0_mw(), cfg.solver,
                                derive_seed(cfg.seed, kInitStream, static_cast<std::uint64_t>(trial)));
    ConvergenceRecord& rec = records[static_cast<std::size_t>(idx)];
    rec.power_mode = mode;
    rec.penalty = penalty;
    rec.trial = trial;
    rec.iterations_to_delta = iterations_to_delta(outcome.report, cfg.solver.delta);
    rec.mean_sinr_db = achieved_sinr_stats(outcome.t, channel.h, cfg.n0_mw()).mean_db;
    rec.report = std::move(outcome.report);
  });
  return records;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::ofstream open_out(const std::string& dir, const std::string& file, std::string& path) {
  std::filesystem::create_directories(dir);
  path = (std::filesystem::path(dir) / file).string();
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string write_pattern_csv(const std::string& dir, const std::string& file, const SteeringGrid& grid,
                              const Beampattern& pattern) {
  if (pattern.size() != grid.size()) throw DimensionError("write_pattern_csv: pattern length mismatch");
  std::string path;
  auto os = open_out(dir, file, path);
  os << "theta_deg,gain\n";
  for (int m = 0; m < grid.size(); ++m) {
    os << fmt(rad_to_deg(grid.angles()[static_cast<std::size_t>(m)])) << ',' << fmt(pattern.values(m)) << '\n';
  }
  return path;
}

std::string write_tradeoff_csv(const std::string& dir, const std::vector<SweepPoint>& points) {
  std::string path;
  auto os = open_out(dir, "tradeoff.csv", path);
  os << "rho1,rho2,avg_sinr_db,pslr_db,mse,gamma_db,deployment,power_mode,penalty,trials,failures,"
        "mean_iterations\n";
  for (const auto& p : points) {
    const auto& c = p.config;
    os << fmt(c.rho1) << ',' << fmt(c.rho2) << ',';
    if (p.result) {
      const auto& r = *p.result;
      std::vector<double> iters;
      for (const auto& t : r.trials) {
        if (t.ok) iters.push_back(t.report.iterations);
      }
      os << fmt(r.point.avg_sinr_db) << ',' << fmt(r.point.pslr_db) << ',' << fmt(r.point.mse);
      os << ',' << fmt(c.gamma_db.front()) << ',' << to_string(c.deployment) << ',' << to_string(c.power_mode)
         << ',' << to_string(c.penalty) << ',' << r.point.trials << ',' << r.failures << ',' << fmt(mean(iters))
         << '\n';
    } else {
      os << "nan,nan,nan," << fmt(c.gamma_db.front()) << ',' << to_string(c.deployment) << ','
         << to_string(c.power_mode) << ',' << to_string(c.penalty) << ",0," << c.trials << ",nan\n";
    }
  }
  return path;
}

std::string write_sinr_csv(const std::string& dir, const RunResult& run) {
  std::string path;
  auto os = open_out(dir, "sinr.csv", path);
  os << "trial,user,sinr_db\n";
  for (const auto& t : run.trials) {
    for (std::size_t u = 0; u < t.sinr_db.size(); ++u) os << t.trial << ',' << u << ',' << fmt(t.sinr_db[u]) << '\n';
  }
  return path;
}

std::string write_sinr_hist_csv(const std::string& dir, const RunResult& run) {
  std::vector<double> all;
  for (const auto& t : run.trials) all.insert(all.end(), t.sinr_db.begin(), t.sinr_db.end());
  const Histogram h = make_histogram(all, 0.5);
  std::string path;
  auto os = open_out(dir, "sinr_hist.csv", path);
  os << "bin_low_db,bin_high_db,count,probability\n";
  const double total = static_cast<double>(h.total());
  for (std::size_t j = 0; j < h.counts.size(); ++j) {
    os << fmt(h.bin_low(j)) << ',' << fmt(h.bin_low(j) + h.bin_width) << ',' << h.counts[j] << ','
       << fmt(h.counts[j] / total) << '\n';
  }
  return path;
}

std::string write_trace(const std::string& dir, const std::string& file, const SolverReport& report) {
  std::string path;
  auto os = open_out(dir, file, path);
  write_trace_csv(os, report);
  return path;
}

json run_summary(const RunResult& run) {
  json j;
  j["artifact_version"] = artifact_version();
  j["config"] = config_to_json(run.config);
  j["terminations"] = run.terminations;
  j["failures"] = run.failures;
  j["trials_ok"] = run.point.trials;
  j["avg_sinr_db"] = finite_or_null(run.point.avg_sinr_db);
  j["pslr_db"] = finite_or_null(run.point.pslr_db);
  j["mse"] = finite_or_null(run.point.mse);
  j["wall_seconds"] = run.seconds;
  if (run.radar) {
    j["radar"] = {{"iterations", run.radar->iterations},
                  {"objective", run.radar->objective},
                  {"alpha_scale", run.radar->alpha_scale}};
  }
  json errors = json::array();
  double leakage = 0.0;
  for (const auto& t : run.trials) {
    if (!t.ok) errors.push_back({{"trial", t.trial}, {"error", t.error}});
    leakage = std::max(leakage, t.max_leakage);
  }
  j["errors"] = errors;
  if (run.config.deployment == Deployment::separated) j["max_leakage"] = leakage;
  return j;
}

std::string write_summary(const std::string& dir, const json& summary) {
  std::string path;
  auto os = open_out(dir, "summary.json", path);
  os << summary.dump(2) << '\n';
  return path;
}

}  // namespace radcom
