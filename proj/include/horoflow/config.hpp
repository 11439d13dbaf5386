#pragma once

// Run configuration. The file is INI-style text: `key = value` lines grouped
// under [section] headers, or equivalently `section.key = value` at top level.
// Lines starting with ';' or '#' are comments.

#include <cstdint>
#include <memory>
#include <string>

#include "horoflow/curvalg.hpp"
#include "horoflow/flow.hpp"
#include "horoflow/grid.hpp"

namespace horoflow {

struct InitialShape {
  enum class Kind { sphere, perturbed_sphere, custom };
  Kind kind = Kind::sphere;
  double r0 = 1.0;
  int mode_l = 2;
  double amplitude = 0.0;
  std::string snapshot;  // custom only; relative paths resolve against the config file
};

struct RunConfig {
  FlowParams params;
  GridMode mode = GridMode::axisymmetric;
  int n_theta = 256;
  int n_phi = 64;
  InitialShape initial;
  StepControl control;
  double t_end = 5.0;
  double record_interval = 0.05;
  double snapshot_interval = 1.0;
  double f_tol = 1e-8;
  std::uint64_t seed = 20240601;
  std::string output_dir = "horoflow-out";
  bool renormalize_volume = false;
  int pinching_samples = 100000;

  std::shared_ptr<const GridSpec> make_grid() const;
  /// Builds the initial graph (reads the snapshot for custom shapes).
  GraphState initial_state() const;
  RunSettings settings(double c_star) const;
};

/// Throws ConfigError listing every offending field.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& base_dir = ".");

}  // namespace horoflow
