#pragma once

// Reference solutions and a-priori bounds that do not go through the PDE
// solver: shrinking geodesic spheres under F = H_m^β, the volume-radius
// inverse ψ, the inverse ξ of the inner-radius comparison map, the
// containment time τ, and inner-radius / diameter estimates of a radial graph
// measured in the hyperboloid model.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "horoflow/curvalg.hpp"
#include "horoflow/grid.hpp"

namespace horoflow {

struct SphereTrajectory {
  std::vector<double> times;
  std::vector<double> radii;
  std::vector<double> residuals;  // |∫_{r0}^{r(t)} ta^{mβ} + (t − t0)|
  FlowParams params;
  bool truncated = false;  // grid extended past extinction
};

/// Integrates dr/dt = −co_κ^{mβ}(r) from r(t_grid[0]) = r0 with an adaptive
/// Dormand–Prince scheme and reports the implicit-relation residual per sample.
SphereTrajectory sphere_contraction(double r0, const FlowParams& params,
                                    std::span<const double> t_grid);

/// Time for a geodesic sphere of radius r0 to shrink to a point.
double sphere_extinction_time(double r0, const FlowParams& params);

/// ∫_a^b ta_κ^{p}(s) ds.
double ta_power_integral(double a, double b, double power, const AmbientCurvature& ac);

/// vol(Sⁿ)·∫_0^s s_κⁿ: volume of the geodesic ball of radius s.
double ball_volume(double s, int n, const AmbientCurvature& ac);

/// Radius of the geodesic ball of volume V.
double psi_inverse(double V, const FlowParams& params);

/// s ↦ s + a·ln[(1 + √ta_κ(s/2))² / (1 + ta_κ(s/2))].
double xi_forward(double s, const AmbientCurvature& ac);
double xi_inverse(double s_target, const AmbientCurvature& ac);

/// ∫ ta_κ^{mβ} over [R/2, R] with R = ξ(ψ(V0)).
double tau_bound(double V0, const FlowParams& params);

/// Distance between exp_p(r1·u1) and exp_p(r2·u2) (u unit vectors at p).
double geodesic_distance(double r1, const Eigen::VectorXd& u1, double r2,
                         const Eigen::VectorXd& u2, const AmbientCurvature& ac);

struct InnerRadius {
  double rho;                  // inner radius estimate ρ₋
  Eigen::VectorXd center;      // tangent vector at the chart centre locating the inball centre
  double max_distance;         // max distance from that centre to the surface
};

/// Axisymmetric: 33 candidates on the axis plus golden-section refinement.
/// full2d: a 9³ lattice inside the ball of radius min r, refined by shrinking
/// the lattice around the best point.
InnerRadius inner_radius_estimate(const GraphState& state, const AmbientCurvature& ac);

/// Largest pairwise distance between surface points represented by the nodes.
double surface_diameter(const GraphState& state, const AmbientCurvature& ac);

}  // namespace horoflow
