#include "horoflow/hypergeom.hpp"

#include <cmath>
#include <string>

#include "horoflow/errors.hpp"

namespace horoflow {

AmbientCurvature::AmbientCurvature(double kappa) : kappa_(kappa), a_(0.0) {
  if (!std::isfinite(kappa) || !(kappa < 0.0)) {
    throw DomainError("ambient curvature must be finite and negative, got kappa=" +
                      std::to_string(kappa));
  }
  a_ = std::sqrt(-kappa);
}

double KappaTrig::co() const {
  if (s == 0.0) throw SingularityError("co_kappa diverges at x = 0");
  return c / s;
}

namespace {

void require_nonnegative(double x) {
  if (!(x >= 0.0)) {
    throw DomainError("kappa-trig argument must be >= 0, got " + std::to_string(x));
  }
}

}  // namespace

KappaTrig kappa_trig(double x, const AmbientCurvature& ac) {
  require_nonnegative(x);
  const double a = ac.a();
  const double ax = a * x;
  // tanh keeps ta finite past the cosh overflow point.
  return KappaTrig{std::sinh(ax) / a, std::cosh(ax), std::tanh(ax) / a};
}

double s_kappa(double x, const AmbientCurvature& ac) {
  require_nonnegative(x);
  return std::sinh(ac.a() * x) / ac.a();
}

double c_kappa(double x, const AmbientCurvature& ac) {
  require_nonnegative(x);
  return std::cosh(ac.a() * x);
}

double ta_kappa(double x, const AmbientCurvature& ac) {
  require_nonnegative(x);
  return std::tanh(ac.a() * x) / ac.a();
}

double co_kappa(double x, const AmbientCurvature& ac) {
  require_nonnegative(x);
  if (x == 0.0) throw SingularityError("co_kappa diverges at x = 0");
  return ac.a() / std::tanh(ac.a() * x);
}

}  // namespace horoflow
