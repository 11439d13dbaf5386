#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "horoflow/errors.hpp"
#include "horoflow/grid.hpp"

using namespace horoflow;

TEST(Grid, UnitSphereVolumes) {
  EXPECT_NEAR(unit_sphere_volume(1), 2 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_volume(2), 4 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_volume(3), 2 * std::numbers::pi * std::numbers::pi, 1e-13);
}

TEST(Grid, AxisymmetricLayoutAndWeights) {
  for (int n : {2, 3, 4}) {
    const auto g = GridSpec::axisymmetric(n, 32);
    EXPECT_EQ(g->node_count(), 33u);
    EXPECT_EQ(g->theta(0), 0.0);
    EXPECT_NEAR(g->theta(32), std::numbers::pi, 1e-15);
    double sum = 0.0;
    for (std::size_t i = 0; i < g->node_count(); ++i) {
      EXPECT_GT(g->weight(i), 0.0);
      sum += g->weight(i);
      EXPECT_NEAR(g->direction(i).norm(), 1.0, 1e-15);
    }
    EXPECT_NEAR(sum, unit_sphere_volume(n), 1e-13);
  }
}

TEST(Grid, Full2dLayoutAndWeights) {
  const auto g = GridSpec::full2d(16, 32);
  EXPECT_EQ(g->node_count(), 16u * 32u);
  EXPECT_NEAR(g->theta_row(0), std::numbers::pi / 32, 1e-15);
  double sum = 0.0;
  for (std::size_t i = 0; i < g->node_count(); ++i) sum += g->weight(i);
  EXPECT_NEAR(sum, 4 * std::numbers::pi, 1e-13);
  EXPECT_EQ(g->index(3, 5), 3u * 32u + 5u);
}

TEST(Grid, QuadratureConvergesForSmoothIntegrand) {
  // ∫_{S²} cos²θ = 4π/3.
  double prev_err = 1.0;
  for (int N : {32, 64, 128}) {
    const auto g = GridSpec::axisymmetric(2, N);
    double sum = 0.0;
    for (std::size_t i = 0; i < g->node_count(); ++i) {
      sum += g->weight(i) * std::pow(std::cos(g->theta(i)), 2);
    }
    const double err = std::abs(sum - 4 * std::numbers::pi / 3);
    EXPECT_LT(err, prev_err / 3.5);
    prev_err = err;
  }
}

TEST(Grid, SpectralPhiDerivativesExactOnTrigPolynomials) {
  const auto g = GridSpec::full2d(16, 16);
  const int N = g->n_phi();
  Eigen::VectorXd f(N), df(N), d2f(N);
  for (int k = 0; k < N; ++k) {
    const double p = k * g->dphi();
    f[k] = std::sin(3 * p) + 0.5 * std::cos(5 * p);
    df[k] = 3 * std::cos(3 * p) - 2.5 * std::sin(5 * p);
    d2f[k] = -9 * std::sin(3 * p) - 12.5 * std::cos(5 * p);
  }
  EXPECT_LT((g->dphi1() * f - df).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((g->dphi2() * f - d2f).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Grid, RejectsInvalidSizes) {
  EXPECT_THROW(GridSpec::axisymmetric(2, 15), DomainError);
  EXPECT_THROW(GridSpec::axisymmetric(1, 32), DomainError);
  EXPECT_THROW(GridSpec::full2d(16, 7), DomainError);
  EXPECT_THROW(GridSpec::full2d(8, 16), DomainError);
}

TEST(Grid, ModeNames) {
  EXPECT_STREQ(to_string(GridMode::axisymmetric), "axisym");
  EXPECT_STREQ(to_string(GridMode::full2d), "full2d");
  EXPECT_EQ(grid_mode_from_string("full2d"), GridMode::full2d);
  EXPECT_THROW(grid_mode_from_string("tri"), DomainError);
}

TEST(Grid, InitialShapes) {
  const auto g = GridSpec::axisymmetric(2, 64);
  const GraphState s = make_sphere(g, 1.3);
  for (double r : s.r) EXPECT_EQ(r, 1.3);
  const GraphState p = make_perturbed_sphere(g, 1.0, 2, 0.05);
  EXPECT_NEAR(p.r.front(), 1.05, 1e-15);
  EXPECT_NEAR(p.r.back(), 1.05, 1e-15);
  EXPECT_NEAR(p.r[32], 1.0 - 0.025, 1e-15);
  EXPECT_NEAR(legendre(3, 0.5), 0.5 * (5 * 0.125 - 3 * 0.5), 1e-15);
}
