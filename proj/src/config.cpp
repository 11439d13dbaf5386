#include "horoflow/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "horoflow/errors.hpp"
#include "horoflow/io.hpp"

namespace horoflow {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"params", {"n", "m", "beta", "kappa"}},
      {"grid", {"mode", "n_theta", "n_phi"}},
      {"initial", {"shape", "r0", "mode_l", "amplitude", "snapshot"}},
      {"control", {"safety", "dt_min", "dt_max", "scheme"}},
      {"run",
       {"t_end", "record_interval", "snapshot_interval", "f_tol", "seed", "output_dir",
        "renormalize_volume"}},
      {"pinching", {"samples"}},
  };
  return keys;
}

// Flattens both accepted layouts into section → key → value.
std::map<std::string, std::map<std::string, std::string>> flatten(
    const pt::ptree& tree, std::vector<std::string>& problems) {
  std::map<std::string, std::map<std::string, std::string>> out;
  auto put = [&](const std::string& section, const std::string& key, const std::string& value) {
    if (!out[section].emplace(key, value).second) {
      problems.push_back(section + "." + key + ": given more than once");
    }
  };
  for (const auto& [name, node] : tree) {
    if (!node.empty()) {
      for (const auto& [key, leaf] : node) put(name, key, leaf.data());
      continue;
    }
    const auto dot = name.find('.');
    if (dot == std::string::npos) {
      problems.push_back(name + ": key outside any section");
      continue;
    }
    put(name.substr(0, dot), name.substr(dot + 1), node.data());
  }
  return out;
}

class Reader {
 public:
  Reader(std::map<std::string, std::map<std::string, std::string>> values,
         std::vector<std::string>& problems)
      : values_(std::move(values)), problems_(problems) {
    for (const auto& [section, keys] : values_) {
      const auto it = schema().find(section);
      if (it == schema().end()) {
        problems_.push_back("[" + section + "]: unknown section");
        continue;
      }
      for (const auto& [key, value] : keys) {
        if (!it->second.count(key)) problems_.push_back(section + "." + key + ": unknown key");
      }
    }
  }

  bool has(const std::string& section, const std::string& key) const {
    const auto s = values_.find(section);
    return s != values_.end() && s->second.count(key);
  }

  template <typename T>
  void read(const std::string& section, const std::string& key, T& target) const {
    if (!has(section, key)) return;
    const std::string& text = values_.at(section).at(key);
    std::istringstream in(text);
    T value{};
    if constexpr (std::is_same_v<T, bool>) {
      if (text == "true" || text == "1") {
        value = true;
      } else if (text == "false" || text == "0") {
        value = false;
      } else {
        problems_.push_back(section + "." + key + ": expected true or false, got '" + text + "'");
        return;
      }
    } else if constexpr (std::is_same_v<T, std::string>) {
      value = text;
    } else {
      in >> value;
      if (in.fail() || !(in >> std::ws).eof()) {
        problems_.push_back(section + "." + key + ": cannot parse '" + text + "'");
        return;
      }
    }
    target = value;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
  std::vector<std::string>& problems_;
};

}  // namespace

std::shared_ptr<const GridSpec> RunConfig::make_grid() const {
  return mode == GridMode::axisymmetric ? GridSpec::axisymmetric(params.n, n_theta)
                                        : GridSpec::full2d(n_theta, n_phi);
}

GraphState RunConfig::initial_state() const {
  switch (initial.kind) {
    case InitialShape::Kind::sphere:
      return make_sphere(make_grid(), initial.r0);
    case InitialShape::Kind::perturbed_sphere:
      return make_perturbed_sphere(make_grid(), initial.r0, initial.mode_l, initial.amplitude);
    case InitialShape::Kind::custom:
      break;
  }
  GraphState state = read_snapshot(initial.snapshot);
  const GridSpec& g = *state.grid;
  std::vector<std::string> problems;
  if (g.mode() != mode) problems.push_back("initial.snapshot: grid mode differs from grid.mode");
  if (g.n() != params.n) problems.push_back("initial.snapshot: dimension differs from params.n");
  if (g.n_theta() != n_theta) {
    problems.push_back("initial.snapshot: N_theta differs from grid.n_theta");
  }
  if (mode == GridMode::full2d && g.n_phi() != n_phi) {
    problems.push_back("initial.snapshot: N_phi differs from grid.n_phi");
  }
  if (!problems.empty()) throw ConfigError(problems);
  return state;
}

RunSettings RunConfig::settings(double c_star) const {
  RunSettings s;
  s.params = params;
  s.control = control;
  s.t_end = t_end;
  s.record_interval = record_interval;
  s.snapshot_interval = snapshot_interval;
  s.f_tol = f_tol;
  s.renormalize_volume = renormalize_volume;
  s.c_star = c_star;
  return s;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config_text(buffer.str(), dir.empty() ? "." : dir.string());
}

RunConfig parse_config_text(const std::string& text, const std::string& base_dir) {
  std::vector<std::string> problems;
  pt::ptree tree;
  {
    std::istringstream in(text);
    try {
      pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError({"syntax error at line " + std::to_string(e.line()) + ": " +
                         e.message()});
    }
  }
  const Reader reader(flatten(tree, problems), problems);

  RunConfig cfg;
  double kappa = -1.0;
  reader.read("params", "n", cfg.params.n);
  reader.read("params", "m", cfg.params.m);
  reader.read("params", "beta", cfg.params.beta);
  reader.read("params", "kappa", kappa);
  if (!(std::isfinite(kappa) && kappa < 0.0)) {
    problems.push_back("params.kappa: must be negative (hyperbolic ambient space)");
  } else {
    cfg.params.ac = AmbientCurvature(kappa);
  }
  if (cfg.params.n < 2) problems.push_back("params.n: must be >= 2");
  if (cfg.params.m < 1 || cfg.params.m > cfg.params.n) {
    problems.push_back("params.m: must lie in [1, n]");
  }
  if (!(cfg.params.beta > 0.0)) {
    problems.push_back("params.beta: must be positive");
  } else if (!(cfg.params.m * cfg.params.beta >= 1.0 - 1e-12)) {
    problems.push_back("params.beta: m*beta must be >= 1");
  }

  std::string mode = "axisym";
  reader.read("grid", "mode", mode);
  try {
    cfg.mode = grid_mode_from_string(mode);
  } catch (const DomainError&) {
    problems.push_back("grid.mode: expected axisym or full2d, got '" + mode + "'");
  }
  reader.read("grid", "n_theta", cfg.n_theta);
  reader.read("grid", "n_phi", cfg.n_phi);
  if (cfg.n_theta < 16) problems.push_back("grid.n_theta: must be >= 16");
  if (cfg.mode == GridMode::full2d) {
    if (cfg.params.n != 2) problems.push_back("grid.mode: full2d requires params.n = 2");
    if (cfg.n_phi < 8 || cfg.n_phi % 2 != 0) {
      problems.push_back("grid.n_phi: must be even and >= 8");
    }
  }

  std::string shape = "sphere";
  reader.read("initial", "shape", shape);
  reader.read("initial", "r0", cfg.initial.r0);
  reader.read("initial", "mode_l", cfg.initial.mode_l);
  reader.read("initial", "amplitude", cfg.initial.amplitude);
  reader.read("initial", "snapshot", cfg.initial.snapshot);
  if (shape == "sphere") {
    cfg.initial.kind = InitialShape::Kind::sphere;
  } else if (shape == "perturbed_sphere") {
    cfg.initial.kind = InitialShape::Kind::perturbed_sphere;
  } else if (shape == "custom") {
    cfg.initial.kind = InitialShape::Kind::custom;
  } else {
    problems.push_back("initial.shape: expected sphere, perturbed_sphere or custom, got '" +
                       shape + "'");
  }
  if (cfg.initial.kind != InitialShape::Kind::custom && !(cfg.initial.r0 > 0.0)) {
    problems.push_back("initial.r0: must be positive");
  }
  if (cfg.initial.kind == InitialShape::Kind::perturbed_sphere) {
    if (cfg.initial.mode_l < 2) problems.push_back("initial.mode_l: must be >= 2");
    if (cfg.initial.r0 > 0.0 && !(std::abs(cfg.initial.amplitude) / cfg.initial.r0 <= 0.2)) {
      problems.push_back("initial.amplitude: |amplitude|/r0 must be <= 0.2");
    }
  }
  if (cfg.initial.kind == InitialShape::Kind::custom) {
    if (cfg.initial.snapshot.empty()) {
      problems.push_back("initial.snapshot: required for shape = custom");
    } else if (std::filesystem::path(cfg.initial.snapshot).is_relative()) {
      cfg.initial.snapshot = (std::filesystem::path(base_dir) / cfg.initial.snapshot).string();
    }
  }

  std::string scheme = to_string(cfg.control.scheme);
  reader.read("control", "safety", cfg.control.safety);
  reader.read("control", "dt_min", cfg.control.dt_min);
  reader.read("control", "dt_max", cfg.control.dt_max);
  reader.read("control", "scheme", scheme);
  try {
    cfg.control.scheme = scheme_from_string(scheme);
  } catch (const DomainError&) {
    problems.push_back("control.scheme: expected heun or rk4, got '" + scheme + "'");
  }
  if (!(cfg.control.safety > 0.0 && cfg.control.safety <= 1.0)) {
    problems.push_back("control.safety: must lie in (0, 1]");
  }
  if (!(cfg.control.dt_min > 0.0)) problems.push_back("control.dt_min: must be positive");
  if (!(cfg.control.dt_max >= cfg.control.dt_min)) {
    problems.push_back("control.dt_max: must be >= dt_min");
  }

  reader.read("run", "t_end", cfg.t_end);
  reader.read("run", "record_interval", cfg.record_interval);
  reader.read("run", "snapshot_interval", cfg.snapshot_interval);
  reader.read("run", "f_tol", cfg.f_tol);
  reader.read("run", "seed", cfg.seed);
  reader.read("run", "output_dir", cfg.output_dir);
  reader.read("run", "renormalize_volume", cfg.renormalize_volume);
  if (!(cfg.t_end > 0.0)) problems.push_back("run.t_end: must be positive");
  if (!(cfg.record_interval > 0.0)) problems.push_back("run.record_interval: must be positive");
  if (!(cfg.snapshot_interval > 0.0)) {
    problems.push_back("run.snapshot_interval: must be positive");
  }
  if (!(cfg.f_tol > 0.0)) problems.push_back("run.f_tol: must be positive");
  if (cfg.output_dir.empty()) problems.push_back("run.output_dir: must not be empty");

  reader.read("pinching", "samples", cfg.pinching_samples);
  if (cfg.pinching_samples < 100) problems.push_back("pinching.samples: must be >= 100");

  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

}  // namespace horoflow
