#include <cmath>
#include <fstream>

#include "radcom/harness.hpp"

namespace radcom {

using nlohmann::json;

std::string to_string(Deployment d) { return d == Deployment::shared ? "shared" : "separated"; }
std::string to_string(PowerMode m) { return m == PowerMode::total ? "total" : "per_antenna"; }
std::string to_string(Penalty p) { return p == Penalty::sum_square ? "sum_square" : "max"; }

std::string variant_key(PowerMode mode, Penalty penalty) {
  return to_string(mode) + "_" + to_string(penalty);
}

double ExperimentConfig::p0_mw() const { return dbm_to_mw(p0_dbm); }
double ExperimentConfig::n0_mw() const { return dbm_to_mw(n0_dbm); }
double ExperimentConfig::p_r_mw() const { return separated.p_r.value_or(0.5 * p0_mw()); }
double ExperimentConfig::p_c_mw() const { return separated.p_c.value_or(0.5 * p0_mw()); }

RealVector ExperimentConfig::gamma_linear() const {
  RealVector out(n_users);
  for (int i = 0; i < n_users; ++i) {
    out(i) = db_to_linear(gamma_db.size() == 1 ? gamma_db[0] : gamma_db[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<Beam> ExperimentConfig::beam_list() const {
  std::vector<Beam> out;
  out.reserve(beams.size());
  for (const auto& b : beams) out.push_back({deg_to_rad(b.center_deg), deg_to_rad(b.half_width_deg)});
  return out;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  if (n_antennas < 1) fail("n_antennas must be >= 1");
  if (n_users < 0) fail("n_users must be >= 0");
  if (!std::isfinite(p0_dbm) || !std::isfinite(n0_dbm)) fail("p0_dbm and n0_dbm must be finite");
  if (gamma_db.empty()) fail("gamma_db must not be empty");
  if (gamma_db.size() != 1 && static_cast<int>(gamma_db.size()) != n_users) {
    fail("gamma_db needs one value or one per user");
  }
  for (double g : gamma_db) {
    if (!std::isfinite(g)) fail("gamma_db values must be finite");
  }
  if (rho1 < 0.0 || rho2 < 0.0 || (rho1 == 0.0 && rho2 == 0.0)) fail("rho must be >= 0 and not both 0");
  if (!(epsilon > 0.0)) fail("epsilon must be > 0");
  if (grid_size < 2) fail("grid_size must be >= 2");
  if (!(spacing > 0.0)) fail("spacing must be > 0");
  if (beams.empty()) fail("beams must not be empty");
  for (const auto& b : beams) {
    if (std::abs(b.center_deg) > 90.0 || !(b.half_width_deg > 0.0)) fail("beam outside [-90, 90] or width <= 0");
  }
  if (guard_points < 0) fail("guard_points must be >= 0");
  if (trials < 1) fail("trials must be >= 1");
  if (workers < 1) fail("workers must be >= 1");
  if (deployment == Deployment::separated) {
    if (separated.n_r < 1 || separated.n_c < 1) fail("n_r and n_c must be >= 1");
    if (separated.n_r + separated.n_c != n_antennas) fail("n_r + n_c must equal n_antennas");
    const double pr = p_r_mw();
    const double pc = p_c_mw();
    if (!(pr > 0.0) || !(pc > 0.0)) fail("p_r and p_c must be > 0");
    if (std::abs(pr + pc - p0_mw()) > 1e-9 * p0_mw()) fail("p_r + p_c must equal P0 in mW");
  }
  for (const auto& [key, rho] : variant_rho) {
    if (key != "total_sum_square" && key != "total_max" && key != "per_antenna_sum_square" &&
        key != "per_antenna_max") {
      fail("unknown variant_rho key '" + key + "'");
    }
    if (rho.first < 0.0 || rho.second < 0.0) fail("variant_rho weights must be >= 0");
  }
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

namespace {

template <class T>
T as(const json& v, const std::string& path) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: wrong type for '" + path + "'");
  }
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("config: '" + path + "' must be an object");
}

[[noreturn]] void unknown_key(const std::string& path, const std::string& key) {
  throw ConfigError("config: unknown key '" + (path.empty() ? key : path + "." + key) + "'");
}

PowerMode parse_power_mode(const json& v, const std::string& path) {
  const auto s = as<std::string>(v, path);
  if (s == "total") return PowerMode::total;
  if (s == "per_antenna") return PowerMode::per_antenna;
  throw ConfigError("config: '" + path + "' must be total or per_antenna");
}

Penalty parse_penalty(const json& v, const std::string& path) {
  const auto s = as<std::string>(v, path);
  if (s == "sum_square") return Penalty::sum_square;
  if (s == "max") return Penalty::max;
  throw ConfigError("config: '" + path + "' must be sum_square or max");
}

Deployment parse_deployment(const json& v, const std::string& path) {
  const auto s = as<std::string>(v, path);
  if (s == "shared") return Deployment::shared;
  if (s == "separated") return Deployment::separated;
  throw ConfigError("config: '" + path + "' must be shared or separated");
}

std::pair<double, double> parse_pair(const json& v, const std::string& path) {
  const auto vals = as<std::vector<double>>(v, path);
  if (vals.size() != 2) throw ConfigError("config: '" + path + "' must have two entries");
  return {vals[0], vals[1]};
}

void apply_armijo(ArmijoConfig& a, const json& j) {
  require_object(j, "solver.armijo");
  for (const auto& [key, v] : j.items()) {
    const std::string path = "solver.armijo." + key;
    if (key == "initial_step") a.initial_step = as<double>(v, path);
    else if (key == "contraction") a.contraction = as<double>(v, path);
    else if (key == "sufficient_decrease") a.sufficient_decrease = as<double>(v, path);
    else if (key == "max_backtracks") a.max_backtracks = as<int>(v, path);
    else unknown_key("solver.armijo", key);
  }
}

void apply_solver(SolverConfig& s, const json& j) {
  require_object(j, "solver");
  for (const auto& [key, v] : j.items()) {
    const std::string path = "solver." + key;
    if (key == "delta") s.delta = as<double>(v, path);
    else if (key == "max_iterations") s.max_iterations = as<int>(v, path);
    else if (key == "pr_plus") s.pr_plus = as<bool>(v, path);
    else if (key == "descent_restart") s.descent_restart = as<bool>(v, path);
    else if (key == "armijo") apply_armijo(s.armijo, v);
    else unknown_key("solver", key);
  }
}

void apply_design(DesignOptions& d, const json& j) {
  require_object(j, "design");
  for (const auto& [key, v] : j.items()) {
    const std::string path = "design." + key;
    if (key == "max_iterations") d.max_iterations = as<int>(v, path);
    else if (key == "relative_tolerance") d.relative_tolerance = as<double>(v, path);
    else if (key == "max_projection_iterations") d.max_projection_iterations = as<int>(v, path);
    else if (key == "projection_tolerance") d.projection_tolerance = as<double>(v, path);
    else unknown_key("design", key);
  }
}

void apply_separated(SeparatedSpec& s, const json& j) {
  require_object(j, "separated");
  for (const auto& [key, v] : j.items()) {
    const std::string path = "separated." + key;
    if (key == "n_r") s.n_r = as<int>(v, path);
    else if (key == "n_c") s.n_c = as<int>(v, path);
    else if (key == "p_r") s.p_r = v.is_null() ? std::nullopt : std::optional<double>(as<double>(v, path));
    else if (key == "p_c") s.p_c = v.is_null() ? std::nullopt : std::optional<double>(as<double>(v, path));
    else unknown_key("separated", key);
  }
}

void apply_sweep(SweepSpec& s, const json& j) {
  require_object(j, "sweep");
  for (const auto& [key, v] : j.items()) {
    const std::string path = "sweep." + key;
    if (key == "rho") {
      if (!v.is_array()) throw ConfigError("config: 'sweep.rho' must be a list of pairs");
      s.rho.clear();
      for (const auto& p : v) s.rho.push_back(parse_pair(p, path));
    } else if (key == "gamma_db") {
      s.gamma_db = as<std::vector<double>>(v, path);
    } else if (key == "deployments") {
      if (!v.is_array()) throw ConfigError("config: 'sweep.deployments' must be a list");
      s.deployments.clear();
      for (const auto& d : v) s.deployments.push_back(parse_deployment(d, path));
    } else {
      unknown_key("sweep", key);
    }
  }
  if (!s.rho.empty() && !s.gamma_db.empty()) {
    throw ConfigError("config: sweep takes rho or gamma_db, not both");
  }
}

std::vector<BeamSpec> parse_beams(const json& v) {
  if (!v.is_array()) throw ConfigError("config: 'beams' must be a list");
  std::vector<BeamSpec> out;
  for (const auto& b : v) {
    require_object(b, "beams[]");
    BeamSpec spec;
    for (const auto& [key, x] : b.items()) {
      if (key == "center_deg") spec.center_deg = as<double>(x, "beams[].center_deg");
      else if (key == "half_width_deg") spec.half_width_deg = as<double>(x, "beams[].half_width_deg");
      else unknown_key("beams[]", key);
    }
    out.push_back(spec);
  }
  return out;
}

}  // namespace

ExperimentConfig apply_json(const ExperimentConfig& base, const json& j) {
  require_object(j, "<root>");
  ExperimentConfig c = base;
  for (const auto& [key, v] : j.items()) {
    if (key == "name") c.name = as<std::string>(v, key);
    else if (key == "n_antennas") c.n_antennas = as<int>(v, key);
    else if (key == "n_users") c.n_users = as<int>(v, key);
    else if (key == "p0_dbm") c.p0_dbm = as<double>(v, key);
    else if (key == "n0_dbm") c.n0_dbm = as<double>(v, key);
    else if (key == "gamma_db") c.gamma_db = v.is_array() ? as<std::vector<double>>(v, key)
                                                        : std::vector<double>{as<double>(v, key)};
    else if (key == "deployment") c.deployment = parse_deployment(v, key);
    else if (key == "separated") apply_separated(c.separated, v);
    else if (key == "power_mode") c.power_mode = parse_power_mode(v, key);
    else if (key == "penalty") c.penalty = parse_penalty(v, key);
    else if (key == "rho") std::tie(c.rho1, c.rho2) = parse_pair(v, key);
    else if (key == "epsilon") c.epsilon = as<double>(v, key);
    else if (key == "grid_size") c.grid_size = as<int>(v, key);
    else if (key == "spacing") c.spacing = as<double>(v, key);
    else if (key == "beams") c.beams = parse_beams(v);
    else if (key == "guard_points") c.guard_points = as<int>(v, key);
    else if (key == "trials") c.trials = as<int>(v, key);
    else if (key == "seed") c.seed = as<std::uint64_t>(v, key);
    else if (key == "solver") apply_solver(c.solver, v);
    else if (key == "design") apply_design(c.design, v);
    else if (key == "sweep") apply_sweep(c.sweep, v);
    else if (key == "compare_variants") c.compare_variants = as<bool>(v, key);
    else if (key == "variant_rho") {
      require_object(v, key);
      c.variant_rho.clear();
      for (const auto& [vk, vv] : v.items()) c.variant_rho[vk] = parse_pair(vv, "variant_rho." + vk);
    } else if (key == "workers") c.workers = as<int>(v, key);
    else unknown_key("", key);
  }
  c.validate();
  return c;
}

ExperimentConfig config_from_json(const json& j) { return apply_json(ExperimentConfig{}, j); }

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["n_antennas"] = c.n_antennas;
  j["n_users"] = c.n_users;
  j["p0_dbm"] = c.p0_dbm;
  j["n0_dbm"] = c.n0_dbm;
  j["gamma_db"] = c.gamma_db;
  j["deployment"] = to_string(c.deployment);
  j["separated"] = {{"n_r", c.separated.n_r},
                    {"n_c", c.separated.n_c},
                    {"p_r", c.separated.p_r ? json(*c.separated.p_r) : json(nullptr)},
                    {"p_c", c.separated.p_c ? json(*c.separated.p_c) : json(nullptr)}};
  j["power_mode"] = to_string(c.power_mode);
  j["penalty"] = to_string(c.penalty);
  j["rho"] = {c.rho1, c.rho2};
  j["epsilon"] = c.epsilon;
  j["grid_size"] = c.grid_size;
  j["spacing"] = c.spacing;
  j["beams"] = json::array();
  for (const auto& b : c.beams) {
    j["beams"].push_back({{"center_deg", b.center_deg}, {"half_width_deg", b.half_width_deg}});
  }
  j["guard_points"] = c.guard_points;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["solver"] = {{"delta", c.solver.delta},
                 {"max_iterations", c.solver.max_iterations},
                 {"pr_plus", c.solver.pr_plus},
                 {"descent_restart", c.solver.descent_restart},
                 {"armijo",
                  {{"initial_step", c.solver.armijo.initial_step},
                   {"contraction", c.solver.armijo.contraction},
                   {"sufficient_decrease", c.solver.armijo.sufficient_decrease},
                   {"max_backtracks", c.solver.armijo.max_backtracks}}}};
  j["design"] = {{"max_iterations", c.design.max_iterations},
                 {"relative_tolerance", c.design.relative_tolerance},
                 {"max_projection_iterations", c.design.max_projection_iterations},
                 {"projection_tolerance", c.design.projection_tolerance}};
  json sweep = json::object();
  if (!c.sweep.rho.empty()) {
    sweep["rho"] = json::array();
    for (const auto& [a, b] : c.sweep.rho) sweep["rho"].push_back({a, b});
  }
  if (!c.sweep.gamma_db.empty()) sweep["gamma_db"] = c.sweep.gamma_db;
  if (!c.sweep.deployments.empty()) {
    sweep["deployments"] = json::array();
    for (auto d : c.sweep.deployments) sweep["deployments"].push_back(to_string(d));
  }
  j["sweep"] = sweep;
  j["compare_variants"] = c.compare_variants;
  j["variant_rho"] = json::object();
  for (const auto& [k, r] : c.variant_rho) j["variant_rho"][k] = {r.first, r.second};
  j["workers"] = c.workers;
  return j;
}

ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return apply_json(base, j);
}

namespace {

const std::vector<BeamSpec> kMultibeam{{-60.0, 3.0}, {-36.0, 3.0}, {0.0, 3.0}, {36.0, 3.0}, {60.0, 3.0}};
const std::vector<BeamSpec> kSingleBeam{{0.0, 5.0}};

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig3_multibeam",  "fig5_tradeoff",      "fig7_8_rho_sweep",
          "fig9_sinr_hist",  "fig10_convergence",  "fig12_perf_vs_time"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "fig3_multibeam") {
    c.beams = kMultibeam;
    c.n_users = 4;
    c.gamma_db = {10.0};
    c.power_mode = PowerMode::per_antenna;
    c.rho1 = 3.0;
    c.rho2 = 1.0;
    c.trials = 1;
  } else if (name == "fig5_tradeoff") {
    c.beams = kSingleBeam;
    c.n_users = 4;
    c.power_mode = PowerMode::per_antenna;
    c.rho1 = 3.0;
    c.rho2 = 1.0;
    c.sweep.gamma_db = {4.0, 6.0, 8.0, 10.0, 12.0, 14.0};
    c.sweep.deployments = {Deployment::shared, Deployment::separated};
  } else if (name == "fig7_8_rho_sweep" || name == "fig12_perf_vs_time") {
    c.beams = kSingleBeam;
    c.n_users = 10;
    c.sweep.rho = {{10.0, 0.1}, {10.0, 0.3}, {10.0, 1.0}, {10.0, 3.0}, {10.0, 10.0}, {3.0, 10.0}, {1.0, 10.0}};
  } else if (name == "fig9_sinr_hist") {
    c.beams = kSingleBeam;
    c.n_users = 4;
    c.gamma_db = {18.0};
  } else if (name == "fig10_convergence") {
    c.beams = kSingleBeam;
    c.n_users = 6;
    c.trials = 50;
    c.compare_variants = true;
    c.solver.delta = 1e-3;
    c.solver.max_iterations = 5000;
    c.variant_rho = {{"total_sum_square", {10.0, 1.0}},
                     {"total_max", {10.0, 1.0}},
                     {"per_antenna_sum_square", {3.0, 1.0}},
                     {"per_antenna_max", {1.0, 2.0}}};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  c.validate();
  return c;
}

}  // namespace radcom
