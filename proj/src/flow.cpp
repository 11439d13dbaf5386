#include "horoflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "horoflow/errors.hpp"
#include "horoflow/hypergeom.hpp"
#include "horoflow/oracle.hpp"
#include "horoflow/parallel.hpp"

namespace horoflow {

const char* to_string(Scheme scheme) { return scheme == Scheme::heun ? "heun" : "rk4"; }

Scheme scheme_from_string(const std::string& text) {
  if (text == "heun" || text == "Heun") return Scheme::heun;
  if (text == "rk4" || text == "RK4") return Scheme::rk4;
  throw DomainError("unknown scheme '" + text + "' (expected heun or rk4)");
}

void StepControl::validate() const {
  if (!(safety > 0.0 && safety <= 1.0)) throw DomainError("safety must lie in (0, 1]");
  if (!(dt_min > 0.0)) throw DomainError("dt_min must be positive");
  if (!(dt_max >= dt_min)) throw DomainError("dt_max must be >= dt_min");
}

double average_speed(const GeometryFields& fields) {
  std::vector<double> weighted(fields.nodes);
  for (std::size_t i = 0; i < fields.nodes; ++i) {
    weighted[i] = fields.F[i] * fields.area_weight[i];
  }
  const double area = pairwise_sum(fields.area_weight);
  if (!(area > 0.0)) throw DomainError("average_speed: total area is zero");
  return pairwise_sum(weighted) / area;
}

Evaluation evaluate(const GraphState& state, const FlowParams& params) {
  Evaluation ev;
  ev.fields = geometry_from_graph(state, params);
  ev.Fbar = average_speed(ev.fields);
  ev.rhs.resize(ev.fields.nodes);
  for (std::size_t i = 0; i < ev.fields.nodes; ++i) {
    ev.rhs[i] = (ev.Fbar - ev.fields.F[i]) * ev.fields.xi_norm[i] / ev.fields.s[i];
  }
  return ev;
}

std::vector<double> flow_rhs(const GraphState& state, const FlowParams& params) {
  return evaluate(state, params).rhs;
}

double diffusion_scale(const GeometryFields& fields, const FlowParams& params) {
  const bool axisym = fields.mode == GridMode::axisymmetric;
  const std::size_t last = fields.nodes - 1;
  double out = 0.0;
  for (std::size_t i = 0; i < fields.nodes; ++i) {
    const auto grad = speed_gradient(fields.lambda_at(i), params, false);
    const bool pole_stencil = axisym && (i < 2 || i + 2 > last);
    const double coeff = pole_stencil ? std::accumulate(grad.begin(), grad.end(), 0.0)
                                      : *std::max_element(grad.begin(), grad.end());
    out = std::max(out, coeff / (fields.s[i] * fields.s[i]));
  }
  return out;
}

double grid_spacing(const GridSpec& grid) {
  if (grid.mode() == GridMode::axisymmetric) return grid.dtheta();
  const double azimuthal = std::sin(grid.theta_row(0)) * grid.dphi() * 2.0 / std::numbers::pi;
  return std::min(grid.dtheta(), azimuthal);
}

double raw_stable_dt(const GeometryFields& fields, const GridSpec& grid,
                     const FlowParams& params, const StepControl& control) {
  const double h = grid_spacing(grid);
  return control.safety * h * h / diffusion_scale(fields, params);
}

double stable_dt(const GeometryFields& fields, const GridSpec& grid, const FlowParams& params,
                 const StepControl& control) {
  return std::clamp(raw_stable_dt(fields, grid, params, control), control.dt_min,
                    control.dt_max);
}

namespace {

// base + dt·Σ w_k k; with a carry vector the final sum is Kahan-compensated
// across steps so that rounding of r does not accumulate.
GraphState advanced(const GraphState& base, double dt,
                    std::initializer_list<std::pair<double, const std::vector<double>*>> terms,
                    std::vector<double>* carry = nullptr) {
  GraphState out = base;
  for (std::size_t i = 0; i < out.r.size(); ++i) {
    double incr = 0.0;
    for (const auto& [w, k] : terms) incr += w * (*k)[i];
    if (carry) {
      const double y = dt * incr - (*carry)[i];
      const double t = base.r[i] + y;
      (*carry)[i] = (t - base.r[i]) - y;
      out.r[i] = t;
    } else {
      out.r[i] = base.r[i] + dt * incr;
    }
  }
  return out;
}

void require_finite(const GraphState& state) {
  for (std::size_t i = 0; i < state.r.size(); ++i) {
    if (!std::isfinite(state.r[i])) {
      throw NumericalAbort("non-finite radius at node " + std::to_string(i) +
                           " (t=" + std::to_string(state.t) + ")");
    }
    if (!(state.r[i] > 0.0)) {
      throw NumericalAbort("radius became non-positive at node " + std::to_string(i));
    }
  }
}

}  // namespace

GraphState step(const GraphState& state, const FlowParams& params, Scheme scheme, double dt,
                const Evaluation* first, std::vector<double>* carry) {
  if (!(dt > 0.0)) throw DomainError("step: dt must be positive");
  if (carry && carry->size() != state.r.size()) carry->assign(state.r.size(), 0.0);
  const std::vector<double> k1 = first ? first->rhs : flow_rhs(state, params);
  GraphState next;
  if (scheme == Scheme::heun) {
    GraphState predictor = advanced(state, dt, {{1.0, &k1}});
    require_finite(predictor);
    const std::vector<double> k2 = flow_rhs(predictor, params);
    next = advanced(state, dt, {{0.5, &k1}, {0.5, &k2}}, carry);
  } else {
    GraphState s2 = advanced(state, 0.5 * dt, {{1.0, &k1}});
    require_finite(s2);
    const std::vector<double> k2 = flow_rhs(s2, params);
    GraphState s3 = advanced(state, 0.5 * dt, {{1.0, &k2}});
    require_finite(s3);
    const std::vector<double> k3 = flow_rhs(s3, params);
    GraphState s4 = advanced(state, dt, {{1.0, &k3}});
    require_finite(s4);
    const std::vector<double> k4 = flow_rhs(s4, params);
    next = advanced(state, dt,
                    {{1.0 / 6.0, &k1}, {1.0 / 3.0, &k2}, {1.0 / 3.0, &k3}, {1.0 / 6.0, &k4}},
                    carry);
  }
  next.t = state.t + dt;
  require_finite(next);
  return next;
}

GraphState volume_renormalize(const GraphState& state, const FlowParams& params, double V0) {
  if (!(V0 > 0.0)) throw DomainError("volume_renormalize: V0 must be positive");
  const double V = enclosed_volume(state, params);
  if (!(std::abs(V - V0) / V0 < 0.1)) {
    throw DomainError("volume_renormalize: volume differs from V0 by 10% or more");
  }
  if (V == V0) return state;

  const GridSpec& grid = *state.grid;
  const double rmin = *std::min_element(state.r.begin(), state.r.end());
  auto shifted = [&](double delta) {
    GraphState out = state;
    for (double& r : out.r) r += delta;
    return out;
  };
  auto f = [&](double delta) {
    const GraphState s = shifted(delta);
    std::vector<double> dV(s.r.size());
    for (std::size_t i = 0; i < s.r.size(); ++i) {
      dV[i] = grid.weight(i) * std::pow(s_kappa(s.r[i], params.ac), params.n);
    }
    return std::make_pair(enclosed_volume(s, params) - V0, pairwise_sum(dV));
  };
  std::uintmax_t iterations = 50;
  const double delta = boost::math::tools::newton_raphson_iterate(
      f, 0.0, -0.999 * rmin, rmin + 10.0, 45, iterations);
  if (iterations >= 50) throw NumericalAbort("volume renormalisation did not converge");
  GraphState out = shifted(delta);
  const double rel = std::abs(enclosed_volume(out, params) - V0) / V0;
  if (!(rel <= 1e-12)) throw NumericalAbort("volume renormalisation missed the target volume");
  return out;
}

double radial_oscillation(const GraphState& state) {
  const auto [lo, hi] = std::minmax_element(state.r.begin(), state.r.end());
  const double mean = pairwise_sum(state.r) / static_cast<double>(state.r.size());
  return (*hi - *lo) / mean;
}

RunOutcome run(const GraphState& initial, const RunSettings& settings, const RunHooks& hooks) {
  const FlowParams& params = settings.params;
  params.validate();
  settings.control.validate();
  if (!(settings.record_interval > 0.0) || !(settings.snapshot_interval > 0.0)) {
    throw DomainError("record and snapshot intervals must be positive");
  }
  auto warn = [&](const std::string& msg) {
    if (hooks.on_warning) hooks.on_warning(msg);
  };

  RunOutcome out;
  GraphState state = initial;
  const GridSpec& grid = *state.grid;
  out.V0 = enclosed_volume(state, params);
  out.D1 = 0.5 * xi_inverse(psi_inverse(out.V0, params), params.ac);
  out.zeta_epsilon = params.ac.a() * s_kappa(out.D1, params.ac) * ta_kappa(out.D1, params.ac) / 2.0;

  const double t0 = state.t;
  std::size_t record_count = 1;
  std::size_t snapshot_count = 1;
  auto record_time = [&](std::size_t k) { return t0 + k * settings.record_interval; };
  auto snapshot_time = [&](std::size_t k) { return t0 + k * settings.snapshot_interval; };

  bool h_convex_warned = false;
  int clamped_steps = 0;
  Evaluation ev;
  double last_dt = 0.0;
  std::vector<double> carry(state.r.size(), 0.0);

  auto take_record = [&]() {
    RecordContext ctx;
    ctx.t = state.t;
    ctx.volume = enclosed_volume(state, params);
    ctx.Fbar = ev.Fbar;
    ctx.dt = last_dt;
    ctx.c_star = settings.c_star;
    DiagnosticsRecord rec = record(ev.fields, params, out.zeta_epsilon, ctx);
    if (!rec.h_convex) {
      ++out.non_h_convex_records;
      if (!h_convex_warned) {
        warn("h-convexity lost at t=" + std::to_string(rec.t));
        h_convex_warned = true;
      }
    }
    if (hooks.on_record) hooks.on_record(rec);
    out.records.push_back(rec);
    return rec;
  };
  auto converged = [&](const DiagnosticsRecord& rec) {
    return rec.f_max < settings.f_tol && radial_oscillation(state) < settings.oscillation_tol;
  };
  auto snapshot = [&]() {
    if (hooks.on_snapshot) hooks.on_snapshot(state);
  };

  try {
    ev = evaluate(state, params);
    last_dt = stable_dt(ev.fields, grid, params, settings.control);
    const DiagnosticsRecord first = take_record();
    out.initially_pinched = first.pinched;
    if (!first.pinched) warn("initial data is not pinched for the computed C*");
    snapshot();
    if (converged(first)) {
      out.converged = true;
      out.final_state = state;
      return out;
    }

    while (state.t < settings.t_end && out.steps < settings.max_steps) {
      const double raw = raw_stable_dt(ev.fields, grid, params, settings.control);
      if (raw < settings.control.dt_min) {
        if (++clamped_steps >= 10) {
          throw NumericalAbort("stiffness: stable step below dt_min for 10 consecutive steps");
        }
      } else {
        clamped_steps = 0;
      }
      double dt = std::clamp(raw, settings.control.dt_min, settings.control.dt_max);

      const double next_record = std::min(record_time(record_count), settings.t_end);
      const double next_snapshot = snapshot_time(snapshot_count);
      const double next_event = std::min(next_record, next_snapshot);
      bool lands = false;
      if (state.t + dt >= next_event * (1.0 - 1e-14) - 1e-300) {
        dt = next_event - state.t;
        lands = true;
      }

      state = step(state, params, settings.control.scheme, dt, &ev, &carry);
      if (lands) state.t = next_event;
      if (settings.renormalize_volume) {
        state = volume_renormalize(state, params, out.V0);
        std::fill(carry.begin(), carry.end(), 0.0);
      }
      ++out.steps;
      last_dt = dt;
      ev = evaluate(state, params);

      bool stop = false;
      if (lands && state.t == next_record) {
        if (next_record == record_time(record_count)) ++record_count;
        const DiagnosticsRecord rec = take_record();
        if (converged(rec)) {
          out.converged = true;
          stop = true;
        }
      }
      if (lands && state.t == next_snapshot) {
        ++snapshot_count;
        snapshot();
      }
      if (stop) break;
      if (state.t >= settings.t_end) break;
    }
    if (snapshot_time(snapshot_count - 1) != state.t) snapshot();
  } catch (...) {
    snapshot();
    throw;
  }
  out.final_state = state;
  return out;
}

}  // namespace horoflow
