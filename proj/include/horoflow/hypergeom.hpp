#pragma once

// κ-trigonometry of the hyperbolic space of sectional curvature κ < 0.
//
//   s_κ(x) = sinh(a x) / a      c_κ(x) = cosh(a x)
//   ta_κ   = s_κ / c_κ          co_κ   = c_κ / s_κ        a = sqrt(-κ)
//
// co_κ(r) is the principal curvature of a geodesic sphere of radius r and
// decreases to the horospherical value a as r → ∞.

namespace horoflow {

class AmbientCurvature {
 public:
  /// Throws DomainError unless kappa is finite and strictly negative.
  explicit AmbientCurvature(double kappa);

  double kappa() const noexcept { return kappa_; }
  double a() const noexcept { return a_; }

 private:
  double kappa_;
  double a_;
};

struct KappaTrig {
  double s;
  double c;
  double ta;

  /// c/s; throws SingularityError at s = 0.
  double co() const;
};

/// All κ-trig values at geodesic distance x ≥ 0 (DomainError for x < 0).
KappaTrig kappa_trig(double x, const AmbientCurvature& ac);

double s_kappa(double x, const AmbientCurvature& ac);
double c_kappa(double x, const AmbientCurvature& ac);
double ta_kappa(double x, const AmbientCurvature& ac);
/// Requires x > 0.
double co_kappa(double x, const AmbientCurvature& ac);

}  // namespace horoflow
