#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radcom/array_model.hpp"
#include "radcom/metrics.hpp"
#include "radcom/radar_covariance.hpp"
#include "radcom/rcg_solver.hpp"
#include "radcom/types.hpp"

namespace radcom {

enum class Deployment { shared, separated };

struct BeamSpec {
  double center_deg = 0.0;
  double half_width_deg = 5.0;
};

struct SeparatedSpec {
  int n_r = 14;
  int n_c = 6;
  // Powers in mW; unset means an even split of P0.
  std::optional<double> p_r;
  std::optional<double> p_c;
};

struct SweepSpec {
  std::vector<std::pair<double, double>> rho;  // one point per pair
  std::vector<double> gamma_db;                // or one point per target
  std::vector<Deployment> deployments;         // crossed with the above when non-empty
  bool empty() const { return rho.empty() && gamma_db.empty() && deployments.empty(); }
};

struct ExperimentConfig {
  std::string name = "custom";
  int n_antennas = 20;
  int n_users = 4;
  double p0_dbm = 20.0;
  double n0_dbm = 0.0;
  std::vector<double> gamma_db{10.0};  // one entry, broadcast, or one per user
  Deployment deployment = Deployment::shared;
  SeparatedSpec separated;
  PowerMode power_mode = PowerMode::total;
  Penalty penalty = Penalty::sum_square;
  double rho1 = 10.0;
  double rho2 = 1.0;
  double epsilon = 0.1;
  int grid_size = 181;
  double spacing = 0.5;
  std::vector<BeamSpec> beams{{0.0, 5.0}};
  int guard_points = 1;  // grid points added to each side of the mainlobe for PSLR
  int trials = 100;
  std::uint64_t seed = 1;
  SolverConfig solver;
  DesignOptions design;
  SweepSpec sweep;
  bool compare_variants = false;  // trace: also run all four power/penalty variants
  // Weights per variant for compare_variants, keyed "<power_mode>_<penalty>";
  // variants without an entry use rho1/rho2.
  std::map<std::string, std::pair<double, double>> variant_rho;
  int workers = 1;

  double p0_mw() const;
  double n0_mw() const;
  double p_r_mw() const;
  double p_c_mw() const;
  RealVector gamma_linear() const;
  std::vector<Beam> beam_list() const;
  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// Thrown for malformed or unknown configuration entries.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Overlays the keys of `j` on `base`; unknown keys throw ConfigError.
ExperimentConfig apply_json(const ExperimentConfig& base, const nlohmann::json& j);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base = {});

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ExperimentConfig preset(const std::string& name);

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  Matrix beamformer;  // T (N x K) shared, W (N_C x K) separated
  SolverReport report;
  std::vector<double> sinr_db;
  Beampattern pattern;        // RadCom pattern
  Beampattern radar_pattern;  // radar-only reference for MSE
  double pslr_db = 0.0;
  double mse = 0.0;
  double max_leakage = 0.0;  // separated only
  double seconds = 0.0;
};

struct RunResult {
  ExperimentConfig config;
  std::optional<CovarianceTarget> radar;  // shared: designed once for all trials
  std::vector<TrialResult> trials;
  TradeoffPoint point;
  std::map<std::string, int> terminations;
  int failures = 0;
  double seconds = 0.0;
};

SteeringGrid make_grid(const ExperimentConfig& cfg);

/// Radar-only covariance on the full array.
CovarianceTarget design_radar(const ExperimentConfig& cfg);

RunResult run_shared(const ExperimentConfig& cfg);
RunResult run_separated(const ExperimentConfig& cfg);
/// Dispatches on cfg.deployment.
RunResult run_experiment(const ExperimentConfig& cfg);

struct SweepPoint {
  ExperimentConfig config;
  std::optional<RunResult> result;
  std::string error;  // set when the whole point failed
};

/// One run per sweep setting; a failing point is recorded and the sweep continues.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, const SweepSpec& sweep);

/// First iteration whose gradient norm is below delta, or -1.
int iterations_to_delta(const SolverReport& report, double delta);

struct ConvergenceRecord {
  PowerMode power_mode;
  Penalty penalty;
  int trial;
  int iterations_to_delta;  // -1 when never reached
  double mean_sinr_db;
  SolverReport report;
};

std::string variant_key(PowerMode mode, Penalty penalty);

/// Solves the same channel realizations under all four power/penalty
/// variants, with weights from cfg.variant_rho where given.
std::vector<ConvergenceRecord> run_convergence(const ExperimentConfig& cfg);

std::string artifact_version();

// Output writers. Each returns the path written.
std::string write_pattern_csv(const std::string& dir, const std::string& file, const SteeringGrid& grid,
                              const Beampattern& pattern);
std::string write_tradeoff_csv(const std::string& dir, const std::vector<SweepPoint>& points);
std::string write_sinr_csv(const std::string& dir, const RunResult& run);
std::string write_sinr_hist_csv(const std::string& dir, const RunResult& run);
std::string write_trace(const std::string& dir, const std::string& file, const SolverReport& report);
nlohmann::json run_summary(const RunResult& run);
std::string write_summary(const std::string& dir, const nlohmann::json& summary);

std::string to_string(Deployment d);
std::string to_string(PowerMode m);
std::string to_string(Penalty p);

}  // namespace radcom
