#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

#include <json.hpp>

#include "horoflow/config.hpp"
#include "horoflow/errors.hpp"
#include "horoflow/flow.hpp"
#include "horoflow/geometry.hpp"
#include "horoflow/io.hpp"
#include "horoflow/monitors.hpp"
#include "horoflow/oracle.hpp"
#include "horoflow/pinching.hpp"

namespace horoflow::cli {

using nlohmann::json;

FlowParams ParamOptions::params() const {
  FlowParams p;
  p.n = n;
  p.m = m;
  p.beta = beta;
  p.ac = AmbientCurvature(kappa);
  p.validate();
  return p;
}

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json constants_json(const PinchingConstants& c) {
  json table = json::array();
  for (const auto& row : c.table) {
    table.push_back({{"epsilon", row.epsilon},
                     {"N", row.N},
                     {"W1", row.W1},
                     {"W2", row.W2},
                     {"N_prime", row.N_prime}});
  }
  return {{"epsilon0", c.epsilon0}, {"c_star", c.c_star}, {"degenerate", c.degenerate},
          {"samples", c.samples},   {"seed", c.seed},     {"table", table}};
}

json params_json(const FlowParams& p) {
  return {{"n", p.n}, {"m", p.m}, {"beta", p.beta}, {"kappa", p.ac.kappa()}};
}

double max_umbilicity(const GeometryFields& fields) {
  double out = 0.0;
  for (std::size_t i = 0; i < fields.nodes; ++i) {
    const auto lam = fields.lambda_at(i);
    double H = 0.0;
    for (double l : lam) H += l;
    for (double l : lam) out = std::max(out, std::abs(l - H / fields.n) / H);
  }
  return out;
}

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu.csv", k);
  return buf;
}

}  // namespace

int run_command(const std::string& config_path, bool quiet) {
  const RunConfig cfg = parse_config(config_path);
  const GraphState initial = cfg.initial_state();
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  ConstantsOptions copts;
  copts.sampler.samples = cfg.pinching_samples;
  copts.sampler.seed = cfg.seed;
  const PinchingConstants constants = solve_epsilon0_and_cstar(cfg.params, copts);
  {
    std::ofstream out(dir / "constants.json");
    out << constants_json(constants).dump(2) << '\n';
  }
  if (!quiet) {
    std::cerr << "epsilon0 = " << format_double(constants.epsilon0)
              << ", C* = " << format_double(constants.c_star) << '\n';
  }

  DiagnosticsWriter diagnostics((dir / "diagnostics.csv").string());
  std::size_t snapshots = 0;
  RunHooks hooks;
  hooks.on_record = [&](const DiagnosticsRecord& rec) {
    diagnostics.append(rec);
    if (!quiet) {
      std::cerr << "t=" << rec.t << " f_max=" << rec.f_max << " V=" << rec.V << '\n';
    }
  };
  hooks.on_snapshot = [&](const GraphState& s) {
    write_snapshot((dir / snapshot_name(snapshots++)).string(), s);
  };
  hooks.on_warning = [&](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };

  const RunSettings settings = cfg.settings(constants.c_star);
  json summary;
  summary["params"] = params_json(cfg.params);
  summary["grid"] = {{"mode", to_string(cfg.mode)},
                     {"n_theta", cfg.n_theta},
                     {"n_phi", cfg.mode == GridMode::full2d ? cfg.n_phi : 1}};
  summary["constants"] = {{"epsilon0", constants.epsilon0},
                          {"c_star", constants.c_star},
                          {"degenerate", constants.degenerate},
                          {"samples", constants.samples},
                          {"seed", constants.seed}};
  RunOutcome outcome;
  try {
    outcome = run(initial, settings, hooks);
  } catch (const std::exception& e) {
    summary["aborted"] = true;
    summary["error"] = e.what();
    std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
    throw;
  }

  const RunVerdict verdict = analyze_records(outcome.records, cfg.params);
  const GeometryFields final_fields = geometry_from_graph(outcome.final_state, cfg.params);
  summary["aborted"] = false;
  summary["converged"] = outcome.converged;
  summary["t_final"] = outcome.final_state.t;
  summary["steps"] = outcome.steps;
  summary["records"] = outcome.records.size();
  summary["V0"] = outcome.V0;
  summary["D1"] = outcome.D1;
  summary["zeta_epsilon"] = outcome.zeta_epsilon;
  summary["initially_pinched"] = outcome.initially_pinched;
  summary["exploratory"] = !outcome.initially_pinched;
  summary["decay_rate"] = optional_json(verdict.decay_rate);
  summary["r_squared"] = optional_json(verdict.r_squared);
  summary["volume_drift"] = verdict.volume_drift;
  summary["monotone_Qtilde"] = verdict.monotone_Qtilde;
  summary["bounds_respected"] = verdict.bounds_respected;
  summary["final_umbilicity"] = max_umbilicity(final_fields);
  std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
  if (!quiet) std::cout << summary.dump(2) << '\n';
  return ExitCode::ok;
}

int oracle_sphere_command(double r0, double t_end, const ParamOptions& opts, int samples,
                          std::ostream& out) {
  const FlowParams params = opts.params();
  if (samples < 2) throw DomainError("--samples must be >= 2");
  if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
  std::vector<double> grid(samples);
  for (int i = 0; i < samples; ++i) grid[i] = t_end * i / (samples - 1);
  const SphereTrajectory traj = sphere_contraction(r0, params, grid);
  out << "t,r,residual\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << format_double(traj.times[i]) << ',' << format_double(traj.radii[i]) << ','
        << format_double(traj.residuals[i]) << '\n';
  }
  if (traj.truncated) std::cerr << "warning: trajectory truncated at extinction\n";
  return ExitCode::ok;
}

int constants_command(const ParamOptions& opts, int samples, std::uint64_t seed,
                      const std::string& format, std::ostream& out) {
  const FlowParams params = opts.params();
  ConstantsOptions copts;
  copts.sampler.samples = samples;
  copts.sampler.seed = seed;
  const PinchingConstants c = solve_epsilon0_and_cstar(params, copts);
  if (format == "json") {
    json j = constants_json(c);
    j["params"] = params_json(params);
    out << j.dump(2) << '\n';
  } else if (format == "csv") {
    out << "# epsilon0=" << format_double(c.epsilon0) << ", c_star=" << format_double(c.c_star)
        << ", degenerate=" << (c.degenerate ? "true" : "false") << '\n';
    out << "epsilon,N,W1,W2,N_prime\n";
    for (const auto& row : c.table) {
      out << format_double(row.epsilon) << ',' << format_double(row.N) << ','
          << format_double(row.W1) << ',' << format_double(row.W2) << ','
          << format_double(row.N_prime) << '\n';
    }
  } else {
    throw DomainError("unknown format '" + format + "' (expected json or csv)");
  }
  return ExitCode::ok;
}

int analyze_command(const std::string& csv_path, const ParamOptions& opts,
                    const std::optional<std::string>& config_path, std::ostream& out) {
  const FlowParams params = config_path ? parse_config(*config_path).params : opts.params();
  const auto records = read_diagnostics(csv_path);
  const RunVerdict v = analyze_records(records, params);
  const json j = {{"monotone_Qtilde", v.monotone_Qtilde},
                  {"worst_Qtilde_violation", v.worst_Qtilde_violation},
                  {"volume_drift", v.volume_drift},
                  {"decay_rate", optional_json(v.decay_rate)},
                  {"r_squared", optional_json(v.r_squared)},
                  {"bounds_respected", v.bounds_respected}};
  out << j.dump(2) << '\n';
  return v.monotone_Qtilde && v.bounds_respected ? ExitCode::ok : ExitCode::invariant_failure;
}

namespace {

struct CheckReporter {
  std::ostream& out;
  int failures = 0;

  void operator()(const std::string& name, bool ok, const std::string& detail = {}) {
    out << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) out << "  (" << detail << ')';
    out << '\n';
    if (!ok) ++failures;
  }
};

FlowParams make_params(int n, int m, double beta) {
  FlowParams p;
  p.n = n;
  p.m = m;
  p.beta = beta;
  return p;
}

}  // namespace

int check_command(std::ostream& out) {
  CheckReporter report{out};

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.05, 3.0);
  for (const FlowParams& p : {make_params(2, 1, 1.0), make_params(2, 2, 1.0),
                              make_params(3, 2, 1.0), make_params(3, 3, 1.0 / 3.0),
                              make_params(3, 1, 2.0)}) {
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
      std::vector<double> lam(p.n);
      for (double& l : lam) l = unif(rng);
      const auto grad = speed_gradient(lam, p);
      double euler = 0.0;
      for (int i = 0; i < p.n; ++i) euler += grad[i] * lam[i];
      const double F = speed(lam, p);
      worst = std::max(worst, std::abs(euler - p.homogeneity() * F) / F);
    }
    report("Euler identity n=" + std::to_string(p.n) + " m=" + std::to_string(p.m),
           worst <= 1e-10, "worst " + format_double(worst));
  }

  for (int n : {2, 3}) {
    const FlowParams p = make_params(n, 1, 1.0);
    const GraphState sphere = make_sphere(GridSpec::axisymmetric(n, 64), 0.8);
    const GeometryFields f = geometry_from_graph(sphere, p);
    const double co = co_kappa(0.8, p.ac);
    double err = 0.0;
    for (double l : f.lambda) err = std::max(err, std::abs(l - co));
    report("sphere curvature n=" + std::to_string(n), err <= 1e-12, format_double(err));
  }

  {
    const FlowParams p = make_params(2, 1, 1.0);
    GraphState s = make_sphere(GridSpec::axisymmetric(2, 64), 1.0);
    const GraphState start = s;
    for (int k = 0; k < 200; ++k) s = step(s, p, Scheme::heun, 1e-3);
    double drift = 0.0;
    for (std::size_t i = 0; i < s.r.size(); ++i) {
      drift = std::max(drift, std::abs(s.r[i] - start.r[i]));
    }
    report("sphere equilibrium", drift < 1e-12, format_double(drift));
  }

  {
    RunSettings settings;
    settings.params = make_params(2, 1, 1.0);
    settings.t_end = 0.5;
    settings.record_interval = 0.05;
    settings.snapshot_interval = 1.0;
    const GraphState init = make_perturbed_sphere(GridSpec::axisymmetric(2, 64), 1.0, 2, 0.05);
    const RunOutcome outcome = run(init, settings);
    const RunVerdict v = analyze_records(outcome.records, settings.params);
    report("perturbed sphere pinching monotone", v.monotone_Qtilde,
           "worst " + format_double(v.worst_Qtilde_violation));
    report("perturbed sphere bounds", v.bounds_respected);
    report("perturbed sphere volume", v.volume_drift <= 1e-4, format_double(v.volume_drift));
  }

  {
    const FlowParams p = make_params(2, 2, 1.0);
    std::vector<double> times(100);
    const double T = sphere_extinction_time(1.0, p);
    for (int i = 0; i < 100; ++i) times[i] = 0.99 * T * i / 99.0;
    const SphereTrajectory traj = sphere_contraction(1.0, p, times);
    const double worst = *std::max_element(traj.residuals.begin(), traj.residuals.end());
    report("sphere contraction residual", worst <= 1e-6, format_double(worst));
    double round = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
      round = std::max(round, std::abs(psi_inverse(ball_volume(s, 2, p.ac), p) - s));
      round = std::max(round, std::abs(xi_inverse(xi_forward(s, p.ac), p.ac) - s));
    }
    report("psi/xi round trips", round <= 1e-9, format_double(round));
  }

  out << (report.failures == 0 ? "all checks passed" : "some checks failed") << '\n';
  return report.failures == 0 ? ExitCode::ok : ExitCode::invariant_failure;
}

}  // namespace horoflow::cli
