#include "pdfw/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pdfw {

namespace {

using nlohmann::json;

/// Object reader that rejects keys it was not asked about.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  ~Section() = default;

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(field(key) + ": required field is missing");
    return j_.at(key);
  }

  double real(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    return v.get<double>();
  }

  double real_or(const std::string& key, double fallback) { return has(key) ? real(key) : fallback; }

  std::uint64_t count(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ConfigError(field(key) + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::uint64_t count_or(const std::string& key, std::uint64_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  std::string text(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    return v.get<std::string>();
  }

  bool flag_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  /// Call once all expected keys were read.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()) + ": unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::pair<double, double> pair_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(where + ": expected a two-element numeric array");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

RateRule parse_rule(const json& j, const std::string& where) {
  Section s(j, where);
  const std::string rule = s.text("rule");
  RateRule r;
  if (rule == "constant") {
    r = RateRule::constant(s.real("value"));
  } else if (rule == "constant_over_L") {
    r = RateRule::constant_over_l(s.real_or("scale", 1.0));
  } else if (rule == "power") {
    r = RateRule::power(s.real_or("scale", 1.0), s.real("c"), s.real("p"));
  } else if (rule == "inverse_tau") {
    r = RateRule::inverse_tau(s.real_or("scale", 1.0));
  } else {
    throw ConfigError(s.field("rule") + ": unknown rule '" + rule +
                      "' (expected constant, constant_over_L, power or inverse_tau)");
  }
  s.finish();
  return r;
}

StepSchedule parse_schedule(const json& j, const std::string& where) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "S1") return StepSchedule::s1();
    if (name == "S2") return StepSchedule::s2();
    throw ConfigError(where + ": unknown schedule '" + name + "' (expected S1, S2 or an object)");
  }
  Section s(j, where);
  const RateRule tau = parse_rule(s.at("tau"), s.field("tau"));
  const RateRule sigma = parse_rule(s.at("sigma"), s.field("sigma"));
  const RateRule alpha = parse_rule(s.at("alpha"), s.field("alpha"));
  const double theta = s.real("theta");
  s.finish();
  try {
    return StepSchedule::custom(tau, sigma, alpha, theta);
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

SolverRunConfig parse_run(const json& j, const std::string& where) {
  Section s(j, where);
  SolverRunConfig run;
  run.name = s.text("name");
  const std::string mode = s.text("mode");
  if (mode == "PDFW") {
    run.mode = SolverMode::PDFW;
  } else if (mode == "PDCP") {
    run.mode = SolverMode::PDCP;
  } else {
    throw ConfigError(s.field("mode") + ": unknown mode '" + mode + "' (expected PDFW or PDCP)");
  }
  run.schedule = parse_schedule(s.at("schedule"), s.field("schedule"));
  run.k_max = s.count("k_max");
  if (s.has("x0")) {
    const std::string x0 = s.text("x0");
    if (x0 == "zero") {
      run.x0 = InitRule::Zero;
    } else if (x0 == "backprojection") {
      run.x0 = InitRule::Backprojection;
    } else {
      throw ConfigError(s.field("x0") + ": unknown init rule '" + x0 + "' (expected zero or backprojection)");
    }
  }
  s.finish();
  return run;
}

}  // namespace

ScanGeometry ExperimentConfig::geometry() const {
  if (!explicit_angles) return make_uniform_geometry(num_views, num_detectors, detector_spacing);
  ScanGeometry g;
  g.num_views = num_views;
  g.num_detectors = num_detectors;
  g.detector_spacing = detector_spacing;
  g.angles = *explicit_angles;
  g.validate();
  return g;
}

void ExperimentConfig::validate() const {
  if (nx < 8 || ny < 8) throw ConfigError("grid: nx and ny must be at least 8");
  if (!(spacing > 0.0)) throw ConfigError("grid.spacing: must be positive");
  if (simulation_upsample == 0) throw ConfigError("phantom.simulation_upsample: must be positive");
  for (std::size_t i = 0; i < phantom.size(); ++i) {
    if (!(phantom[i].axis_x > 0.0) || !(phantom[i].axis_y > 0.0)) {
      throw ConfigError("phantom.ellipses[" + std::to_string(i) + "].axes: must be positive");
    }
  }
  if (num_views == 0) throw ConfigError("geometry.num_views: must be positive");
  if (num_detectors == 0) throw ConfigError("geometry.num_detectors: must be positive");
  if (!(detector_spacing > 0.0)) throw ConfigError("geometry.detector_spacing: must be positive");
  try {
    (void)geometry();
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("geometry.angles: ") + e.what());
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw ConfigError("noise.std: must be nonnegative");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("regularization.lambda: must be positive");
  try {
    DiffStack probe(nx, ny, offsets);
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("regularization.offsets: ") + e.what());
  }
  if (!(norm.tol > 0.0)) throw ConfigError("norm_estimate.tol: must be positive");
  if (norm.max_iters == 0) throw ConfigError("norm_estimate.max_iters: must be positive");
  if (!(norm.safety >= 1.0)) throw ConfigError("norm_estimate.safety: must be at least 1");
  if (runs.empty()) throw ConfigError("runs: at least one solver run is required");
  std::set<std::string> names;
  for (const auto& r : runs) {
    if (r.name.empty() || r.name.find_first_of("/\\") != std::string::npos) {
      throw ConfigError("runs.name: must be a nonempty plain file stem");
    }
    if (!names.insert(r.name).second) throw ConfigError("runs.name: duplicate run name '" + r.name + "'");
  }
  if (!reference.load_path && reference.compute_iterations == 0) {
    throw ConfigError("reference.compute_iterations: must be positive");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  Section top(root, "");

  {
    Section g(top.at("grid"), "grid");
    cfg.nx = g.count("nx");
    cfg.ny = g.count("ny");
    cfg.spacing = g.real_or("spacing", 1.0);
    g.finish();
  }
  {
    Section p(top.at("phantom"), "phantom");
    cfg.simulation_upsample = p.count_or("simulation_upsample", 1);
    const auto& list = p.at("ellipses");
    if (!list.is_array()) throw ConfigError("phantom.ellipses: expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "phantom.ellipses[" + std::to_string(i) + "]";
      Section e(list[i], where);
      Ellipse el;
      std::tie(el.center_x, el.center_y) = pair_of(e.at("center"), e.field("center"));
      std::tie(el.axis_x, el.axis_y) = pair_of(e.at("axes"), e.field("axes"));
      el.rotation = e.real_or("rotation_deg", 0.0) * std::numbers::pi / 180.0;
      el.intensity = e.real("intensity");
      e.finish();
      cfg.phantom.push_back(el);
    }
    p.finish();
  }
  {
    Section g(top.at("geometry"), "geometry");
    cfg.num_views = g.count("num_views");
    cfg.num_detectors = g.count("num_detectors");
    cfg.detector_spacing = g.real_or("detector_spacing", 1.0);
    if (g.has("angles")) {
      const auto& a = g.at("angles");
      if (a.is_string()) {
        if (a.get<std::string>() != "uniform") {
          throw ConfigError("geometry.angles: expected \"uniform\" or an array of radians");
        }
      } else if (a.is_array()) {
        Vector angles;
        for (const auto& v : a) {
          if (!v.is_number()) throw ConfigError("geometry.angles: entries must be numbers");
          angles.push_back(v.get<double>());
        }
        cfg.explicit_angles = std::move(angles);
      } else {
        throw ConfigError("geometry.angles: expected \"uniform\" or an array of radians");
      }
    }
    g.finish();
  }
  {
    Section n(top.at("noise"), "noise");
    cfg.noise_std = n.real("std");
    cfg.seed = n.count_or("seed", 0);
    if (n.has("weighting")) {
      const std::string w = n.text("weighting");
      if (w == "uniform") {
        cfg.weighting = Weighting::Uniform;
      } else if (w == "inverse_variance") {
        cfg.weighting = Weighting::InverseVariance;
      } else {
        throw ConfigError("noise.weighting: unknown weighting '" + w + "' (expected uniform or inverse_variance)");
      }
    }
    n.finish();
  }
  {
    Section r(top.at("regularization"), "regularization");
    cfg.lambda = r.real("lambda");
    if (r.has("offsets")) {
      const auto& list = r.at("offsets");
      if (!list.is_array()) throw ConfigError("regularization.offsets: expected an array");
      cfg.offsets.clear();
      for (const auto& o : list) {
        if (!o.is_array() || o.size() != 2 || !o[0].is_number_integer() || !o[1].is_number_integer()) {
          throw ConfigError("regularization.offsets: entries must be [dx, dy] integer pairs");
        }
        cfg.offsets.push_back({o[0].get<int>(), o[1].get<int>()});
      }
    }
    r.finish();
  }
  if (top.has("norm_estimate")) {
    Section n(top.at("norm_estimate"), "norm_estimate");
    cfg.norm.tol = n.real_or("tol", cfg.norm.tol);
    cfg.norm.max_iters = n.count_or("max_iters", cfg.norm.max_iters);
    cfg.norm.seed = n.count_or("seed", cfg.norm.seed);
    cfg.norm.safety = n.real_or("safety", cfg.norm.safety);
    n.finish();
  }
  {
    const auto& list = top.at("runs");
    if (!list.is_array()) throw ConfigError("runs: expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      cfg.runs.push_back(parse_run(list[i], "runs[" + std::to_string(i) + "]"));
    }
  }
  {
    Section r(top.at("reference"), "reference");
    const bool load = r.has("load");
    const bool compute = r.has("compute_iterations");
    if (load == compute) {
      throw ConfigError("reference: exactly one of 'load' or 'compute_iterations' is required");
    }
    if (load) cfg.reference.load_path = r.text("load");
    if (compute) cfg.reference.compute_iterations = r.count("compute_iterations");
    r.finish();
  }
  cfg.output_dir = top.has("output_dir") ? top.text("output_dir") : std::string("out");
  cfg.record_wall_time = top.flag_or("record_wall_time", false);
  top.finish();

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pdfw
