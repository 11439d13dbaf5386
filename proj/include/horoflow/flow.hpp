#pragma once

// Explicit time integration of the volume-preserving flow of a radial graph:
//   ∂_t r = (F̄ − F)·|ξ| / s_κ(r),  F̄ = ∫F dμ / ∫dμ.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "horoflow/curvalg.hpp"
#include "horoflow/geometry.hpp"
#include "horoflow/grid.hpp"
#include "horoflow/monitors.hpp"

namespace horoflow {

enum class Scheme { heun, rk4 };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& text);

struct StepControl {
  double safety = 0.2;
  double dt_min = 1e-9;
  double dt_max = 1e-2;
  Scheme scheme = Scheme::heun;

  void validate() const;
};

/// F̄ = Σ F·area_weight / Σ area_weight.
double average_speed(const GeometryFields& fields);

struct Evaluation {
  GeometryFields fields;
  double Fbar = 0.0;
  std::vector<double> rhs;
};

Evaluation evaluate(const GraphState& state, const FlowParams& params);

std::vector<double> flow_rhs(const GraphState& state, const FlowParams& params);

/// Largest eigenvalue over the nodes of the coefficient multiplying the
/// σ-Hessian of r in the linearised equation, i.e. max_i Ḟ^i / s_κ². On the
/// axisymmetric pole stencils, where every azimuthal direction is fed by r″,
/// the θ and azimuthal coefficients add up.
double diffusion_scale(const GeometryFields& fields, const FlowParams& params);

/// Smallest node spacing in the σ-metric (full2d: azimuthal spacing shrinks
/// by sin θ and is scaled by 2/π for the spectral stencil).
double grid_spacing(const GridSpec& grid);

/// safety·(min s_κ)²·h² / (max Ḟ), before clamping.
double raw_stable_dt(const GeometryFields& fields, const GridSpec& grid,
                     const FlowParams& params, const StepControl& control);

/// raw_stable_dt clamped to [dt_min, dt_max].
double stable_dt(const GeometryFields& fields, const GridSpec& grid, const FlowParams& params,
                 const StepControl& control);

/// One explicit step of size dt; F̄ is recomputed at every stage. `first`
/// may carry the evaluation at `state` to avoid recomputing it. When `carry`
/// is given, the update of r is compensated (Kahan) using and refreshing the
/// per-node rounding carry, which run() keeps across steps.
/// Throws NumericalAbort on non-finite or non-positive r.
GraphState step(const GraphState& state, const FlowParams& params, Scheme scheme, double dt,
                const Evaluation* first = nullptr, std::vector<double>* carry = nullptr);

/// Uniform radial shift δ with Volume(r + δ) = V0 to 1e−12 relative.
GraphState volume_renormalize(const GraphState& state, const FlowParams& params, double V0);

struct RunSettings {
  FlowParams params;
  StepControl control;
  double t_end = 5.0;
  double record_interval = 0.05;
  double snapshot_interval = 1.0;
  double f_tol = 1e-8;
  double oscillation_tol = 1e-8;
  bool renormalize_volume = false;
  double c_star = 0.0;
  std::size_t max_steps = 50'000'000;
};

struct RunHooks {
  std::function<void(const DiagnosticsRecord&)> on_record;
  std::function<void(const GraphState&)> on_snapshot;
  std::function<void(const std::string&)> on_warning;
};

struct RunOutcome {
  GraphState final_state;
  std::vector<DiagnosticsRecord> records;
  bool converged = false;
  std::size_t steps = 0;
  double V0 = 0.0;
  double D1 = 0.0;
  double zeta_epsilon = 0.0;
  bool initially_pinched = false;
  std::size_t non_h_convex_records = 0;
};

/// Relative oscillation (max r − min r)/mean r.
double radial_oscillation(const GraphState& state);

/// Integrates until t_end or until f_max < f_tol and the radial oscillation
/// is below oscillation_tol. Records are taken at t = 0 and at every multiple
/// of record_interval, snapshots at t = 0, every snapshot_interval and at the
/// end. On any abort the last accepted state is passed to on_snapshot before
/// the exception propagates.
RunOutcome run(const GraphState& initial, const RunSettings& settings, const RunHooks& hooks = {});

}  // namespace horoflow
