#include "horoflow/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "horoflow/errors.hpp"

namespace horoflow {

DiagnosticsRecord record(const GeometryFields& fields, const FlowParams& params,
                         double zeta_epsilon, const RecordContext& context) {
  const int n = params.n;
  const double inv_nn = 1.0 / std::pow(static_cast<double>(n), n);
  constexpr double inf = std::numeric_limits<double>::infinity();

  DiagnosticsRecord rec;
  rec.t = context.t;
  rec.V = context.volume;
  rec.Fbar = context.Fbar;
  rec.dt = context.dt;
  rec.Fmin = inf;
  rec.Fmax = -inf;
  rec.Htilde_min = inf;
  rec.lambda_tilde_min = inf;
  rec.Phi_min = inf;
  rec.pinched = true;
  double f_max = -inf;
  double z_max = -inf;

  for (std::size_t i = 0; i < fields.nodes; ++i) {
    const CurvatureSpectrum spec(fields.lambda_at(i), params.ac);
    const TildeQuantities tq = tilde_quantities(spec);
    rec.Fmin = std::min(rec.Fmin, fields.F[i]);
    rec.Fmax = std::max(rec.Fmax, fields.F[i]);
    rec.Htilde_min = std::min(rec.Htilde_min, tq.H);
    rec.lambda_tilde_min = std::min(rec.lambda_tilde_min, spec.lambda_tilde().front());
    rec.Phi_min = std::min(rec.Phi_min, fields.Phi[i]);
    f_max = std::max(f_max, tq.H > 0.0 ? pinching_deficit(spec) : inf);
    if (!pinching_predicate(spec, params, context.c_star)) rec.pinched = false;
    z_max = std::max(z_max, fields.F[i] / (fields.Phi[i] - zeta_epsilon));
  }
  rec.h_convex = rec.lambda_tilde_min > 0.0;
  if (!rec.h_convex) rec.pinched = false;
  rec.f_max = f_max;
  rec.Qtilde_min = inv_nn - f_max;
  if (rec.Phi_min > zeta_epsilon) rec.Z_max = z_max;
  return rec;
}

double max_pinching_deficit(const GeometryFields& fields, const FlowParams& params) {
  double out = 0.0;
  for (std::size_t i = 0; i < fields.nodes; ++i) {
    const CurvatureSpectrum spec(fields.lambda_at(i), params.ac);
    if (!spec.h_convex()) return std::numeric_limits<double>::infinity();
    out = std::max(out, pinching_deficit(spec));
  }
  return out;
}

MonotoneCheck check_monotone(std::span<const double> series, Direction direction, double tol) {
  if (series.size() < 2) throw DomainError("check_monotone needs at least two samples");
  const double sign = direction == Direction::nondecreasing ? 1.0 : -1.0;
  double worst = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double backwards = -sign * (series[i] - series[i - 1]);
    worst = std::max(worst, backwards);
  }
  return {worst <= tol, worst};
}

ExponentialFit fit_exponential(std::span<const double> t, std::span<const double> y,
                               double transient_fraction) {
  if (t.size() != y.size()) throw DomainError("fit_exponential: size mismatch");
  if (t.size() < 10) throw DomainError("fit_exponential needs at least 10 samples");
  const auto skip = static_cast<std::size_t>(std::floor(transient_fraction * t.size()));
  const std::size_t count = t.size() - skip;
  if (count < 2) throw DomainError("fit_exponential: window too small");

  constexpr double floor = std::numeric_limits<double>::epsilon();
  bool clipped = false;
  double st = 0.0, sy = 0.0;
  std::vector<double> ly(count);
  for (std::size_t i = 0; i < count; ++i) {
    double v = y[skip + i];
    if (!(v > 0.0)) {
      v = floor;
      clipped = true;
    }
    ly[i] = std::log(v);
    st += t[skip + i];
    sy += ly[i];
  }
  const double tm = st / count;
  const double ym = sy / count;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dt = t[skip + i] - tm;
    const double dy = ly[i] - ym;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (stt == 0.0) throw DomainError("fit_exponential: all times identical");
  const double slope = sty / stt;
  const double intercept = ym - slope * tm;
  const double r2 = syy == 0.0 ? 1.0 : (sty * sty) / (stt * syy);
  return {-slope, std::exp(intercept), r2, clipped, count};
}

RunVerdict analyze_records(std::span<const DiagnosticsRecord> records, const FlowParams& params,
                           double monotone_tol, double fit_floor) {
  if (records.empty()) throw DomainError("analyze_records needs at least one record");
  RunVerdict v;
  std::vector<double> q;
  std::vector<double> t;
  std::vector<double> f;
  const double V0 = records.front().V;
  const double floor = std::pow(params.ac.a(), params.homogeneity()) - 1e-8;
  v.bounds_respected = true;
  for (const auto& rec : records) {
    q.push_back(rec.Qtilde_min);
    v.volume_drift = std::max(v.volume_drift, std::abs(rec.V - V0) / V0);
    if (rec.f_max > fit_floor) {
      t.push_back(rec.t);
      f.push_back(rec.f_max);
    }
    const bool z_ok = !rec.Z_max || std::isfinite(*rec.Z_max);
    if (!(rec.Fmin >= floor && rec.Htilde_min > 0.0 && rec.lambda_tilde_min > 0.0 && z_ok)) {
      v.bounds_respected = false;
    }
  }
  const MonotoneCheck mono = q.size() < 2
                                 ? MonotoneCheck{true, 0.0}
                                 : check_monotone(q, Direction::nondecreasing, monotone_tol);
  v.monotone_Qtilde = mono.ok;
  v.worst_Qtilde_violation = mono.worst_violation;
  if (t.size() >= 10) {
    const ExponentialFit fit = fit_exponential(t, f);
    v.decay_rate = fit.rate;
    v.r_squared = fit.r_squared;
  }
  return v;
}

}  // namespace horoflow
