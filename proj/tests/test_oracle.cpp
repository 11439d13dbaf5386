#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "horoflow/errors.hpp"
#include "horoflow/geometry.hpp"
#include "horoflow/oracle.hpp"
#include "support.hpp"

using namespace horoflow;
using testing_support::params;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace

TEST(Oracle, ImplicitRelationResidualAt100Times) {
  for (const FlowParams& p : {params(2, 1, 1.0), params(3, 2, 1.0), params(2, 2, 1.5),
                              params(3, 3, 1.0 / 3.0, -0.5)}) {
    const double T = sphere_extinction_time(1.2, p);
    const auto grid = linspace(0.0, 0.95 * T, 100);
    const SphereTrajectory tr = sphere_contraction(1.2, p, grid);
    ASSERT_EQ(tr.times.size(), 100u);
    EXPECT_FALSE(tr.truncated);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      EXPECT_LE(tr.residuals[i], 1e-6);
      if (i > 0) {
        EXPECT_LT(tr.radii[i], tr.radii[i - 1]);
      }
    }
  }
}

TEST(Oracle, ClosedFormForUnitHomogeneity) {
  // mβ = 1, a = 1: dr/dt = −coth r, so cosh r(t) = cosh r0·e^{−t}.
  const FlowParams p = params(2, 1, 1.0);
  const double r0 = 1.5;
  EXPECT_NEAR(sphere_extinction_time(r0, p), std::log(std::cosh(r0)), 1e-13);
  const auto grid = linspace(0.0, 0.99 * std::log(std::cosh(r0)), 100);
  const SphereTrajectory tr = sphere_contraction(r0, p, grid);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    EXPECT_NEAR(tr.radii[i], std::acosh(std::cosh(r0) * std::exp(-tr.times[i])), 1e-8);
  }
}

TEST(Oracle, LargeSphereShrinksAtHorosphericalSpeed) {
  const FlowParams p = params(2, 2, 1.0, -4.0);  // a = 2, a^{mβ} = 4
  const SphereTrajectory tr = sphere_contraction(12.0, p, linspace(0.0, 0.5, 11));
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    EXPECT_NEAR(tr.radii[i], 12.0 - 4.0 * tr.times[i], 1e-9);
  }
}

TEST(Oracle, TimesPastExtinctionAreTruncated) {
  const FlowParams p = params(2, 1, 1.0);
  const double T = sphere_extinction_time(0.5, p);
  const SphereTrajectory tr = sphere_contraction(0.5, p, linspace(0.0, 2 * T, 21));
  EXPECT_TRUE(tr.truncated);
  EXPECT_EQ(tr.times.size(), 10u);
  for (double r : tr.radii) EXPECT_GT(r, 0.0);
  EXPECT_THROW(sphere_contraction(-1.0, p, linspace(0, 1, 3)), DomainError);
}

TEST(Oracle, BallVolumeAndPsiRoundTrip) {
  const FlowParams p = params(2, 1, 1.0);
  EXPECT_NEAR(ball_volume(1.0, 2, p.ac), std::numbers::pi * (std::sinh(2.0) - 2.0), 1e-13);
  for (const FlowParams& q : {params(2, 1, 1.0), params(3, 2, 1.0), params(2, 1, 1.0, -0.3)}) {
    for (double s : {1e-2, 0.1, 1.0, 5.0}) {
      const double V = ball_volume(s, q.n, q.ac);
      EXPECT_NEAR(psi_inverse(V, q), s, 1e-9 * s);
    }
  }
  EXPECT_THROW(psi_inverse(0.0, p), DomainError);
}

TEST(Oracle, XiRoundTripAndOrdering) {
  for (double kappa : {-1.0, -0.25, -4.0}) {
    const AmbientCurvature ac(kappa);
    EXPECT_EQ(xi_forward(0.0, ac), 0.0);
    for (double s : {1e-2, 0.05, 0.3, 1.0, 3.0, 10.0}) {
      const double x = xi_inverse(s, ac);
      EXPECT_LT(x, s);
      EXPECT_GT(xi_forward(s, ac), s);
      EXPECT_NEAR(xi_forward(x, ac), s, 1e-9 * s);
    }
  }
  EXPECT_THROW(xi_inverse(0.0, AmbientCurvature(-1.0)), DomainError);
}

TEST(Oracle, TauClosedFormAndMonotonicity) {
  const FlowParams p = params(2, 1, 1.0);
  double prev = 0.0;
  for (double V : {0.5, 2.0, 8.0, 32.0, 128.0}) {
    const double R = xi_inverse(psi_inverse(V, p), p.ac);
    const double tau = tau_bound(V, p);
    EXPECT_NEAR(tau, std::log(std::cosh(R) / std::cosh(R / 2)), 1e-12);
    EXPECT_GT(tau, prev);
    prev = tau;
  }
}

TEST(Oracle, GeodesicDistance) {
  const AmbientCurvature ac(-1.0);
  Eigen::VectorXd e0(3), e1(3);
  e0 << 1, 0, 0;
  e1 << 0, 1, 0;
  EXPECT_NEAR(geodesic_distance(1.0, e0, 1.0, -e0, ac), 2.0, 1e-14);
  EXPECT_NEAR(geodesic_distance(0.3, e0, 1.1, e0, ac), 0.8, 1e-14);
  EXPECT_EQ(geodesic_distance(0.7, e1, 0.7, e1, ac), 0.0);
  testing_support::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double r1 = rng.uniform(0.1, 3.0), r2 = rng.uniform(0.1, 3.0);
    Eigen::VectorXd u(3), v(3);
    for (int k = 0; k < 3; ++k) {
      u[k] = rng.normal();
      v[k] = rng.normal();
    }
    u.normalize();
    v.normalize();
    // Law of cosines in H³.
    const double ref = std::acosh(std::cosh(r1) * std::cosh(r2) -
                                  std::sinh(r1) * std::sinh(r2) * u.dot(v));
    EXPECT_NEAR(geodesic_distance(r1, u, r2, v, ac), ref, 1e-9 * std::max(1.0, ref));
  }
  // Curvature −4 halves distances of rescaled points.
  EXPECT_NEAR(geodesic_distance(0.5, e0, 0.5, e1, AmbientCurvature(-4.0)),
              0.5 * geodesic_distance(1.0, e0, 1.0, e1, ac), 1e-14);
}

TEST(Oracle, InnerRadiusAndDiameterOfSphere) {
  const AmbientCurvature ac(-1.0);
  for (const GraphState& s :
       {make_sphere(GridSpec::axisymmetric(2, 64), 0.9), make_sphere(GridSpec::axisymmetric(3, 64), 0.9),
        make_sphere(GridSpec::full2d(16, 32), 0.9)}) {
    const InnerRadius ir = inner_radius_estimate(s, ac);
    EXPECT_NEAR(ir.rho, 0.9, 1e-10);
    EXPECT_NEAR(ir.max_distance, 0.9, 1e-10);
    EXPECT_LT(ir.center.norm(), 1e-8);
    EXPECT_NEAR(surface_diameter(s, ac), 1.8, 1e-10);
  }
}

TEST(Oracle, InnerRadiusOfPerturbedSphereIsBracketed) {
  const AmbientCurvature ac(-1.0);
  const GraphState s = make_perturbed_sphere(GridSpec::axisymmetric(2, 128), 1.0, 2, 0.1);
  const InnerRadius ir = inner_radius_estimate(s, ac);
  // Oblate in the equator (r = 0.95), prolate at the poles (r = 1.1).
  EXPECT_GE(ir.rho, 0.95 - 1e-9);
  EXPECT_LE(ir.rho, 1.1);
  EXPECT_GE(ir.max_distance, ir.rho);
  EXPECT_NEAR(surface_diameter(s, ac), 2.2, 1e-9);
}
