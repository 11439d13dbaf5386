#pragma once

// Runtime monitors for the quantities the convergence theory controls:
// pinching ratio Q̃ = K̃/H̃ⁿ and its deficit f = 1/nⁿ − Q̃, the speed range,
// the support function Φ and the speed-bound test quantity Z = F/(Φ − ε).

#include <optional>
#include <span>
#include <vector>

#include "horoflow/curvalg.hpp"
#include "horoflow/geometry.hpp"

namespace horoflow {

struct DiagnosticsRecord {
  double t = 0.0;
  double V = 0.0;
  double Fbar = 0.0;
  double Fmin = 0.0;
  double Fmax = 0.0;
  double Qtilde_min = 0.0;
  double f_max = 0.0;
  double Htilde_min = 0.0;
  double lambda_tilde_min = 0.0;
  double Phi_min = 0.0;
  std::optional<double> Z_max;  // absent when Φ_min ≤ ε
  bool h_convex = false;
  bool pinched = false;
  double dt = 0.0;
};

struct RecordContext {
  double t = 0.0;
  double volume = 0.0;
  double Fbar = 0.0;
  double dt = 0.0;
  double c_star = 0.0;
};

DiagnosticsRecord record(const GeometryFields& fields, const FlowParams& params,
                         double zeta_epsilon, const RecordContext& context);

/// Largest f over the nodes, +inf if some node is not h-convex.
double max_pinching_deficit(const GeometryFields& fields, const FlowParams& params);

enum class Direction { nondecreasing, nonincreasing };

struct MonotoneCheck {
  bool ok;
  double worst_violation;  // largest step against `direction` (0 if none)
};

/// Requires at least two samples.
MonotoneCheck check_monotone(std::span<const double> series, Direction direction, double tol);

struct ExponentialFit {
  double rate;       // −slope of ln y against t
  double amplitude;  // exp(intercept)
  double r_squared;
  bool clipped;  // some y ≤ 0 had to be clipped to the epsilon floor
  std::size_t used;
};

/// Least squares on (t, ln y) after dropping the leading transient_fraction
/// of the samples. Requires at least 10 samples.
ExponentialFit fit_exponential(std::span<const double> t, std::span<const double> y,
                               double transient_fraction = 0.1);

struct RunVerdict {
  bool monotone_Qtilde = false;
  double worst_Qtilde_violation = 0.0;
  double volume_drift = 0.0;  // max |V − V(0)|/V(0)
  std::optional<double> decay_rate;
  std::optional<double> r_squared;
  bool bounds_respected = false;  // F ≥ a^{mβ} − 1e−8, H̃ > 0, λ̃ > 0, Z finite
};

/// Post-processes a diagnostics series. The decay fit uses the records with
/// f_max above fit_floor and is omitted when fewer than 10 remain. A single
/// record counts as monotone.
RunVerdict analyze_records(std::span<const DiagnosticsRecord> records, const FlowParams& params,
                           double monotone_tol = 1e-6, double fit_floor = 0.0);

}  // namespace horoflow
