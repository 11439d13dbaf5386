#pragma once

// First and second fundamental forms of a radial graph X(u) = exp_p(r(u)·u).
//
// Tensors are expressed in a frame that is orthonormal for the round metric σ
// of Sⁿ: e_0 = ∂_θ and e_1 = ∂_φ / sin θ. For axisymmetric grids with n > 2
// the 2×2 blocks are a reduced representation: index 1 stands for each of the
// n − 1 azimuthal directions, all of which carry identical entries.
//
//   |ξ|² = s²(r) + |Dr|²
//   g_ij = D_i r D_j r + s² σ_ij
//   h_ij = −(s D_iD_j r − s² c σ_ij − 2c D_i r D_j r) / |ξ|
//   W    = g⁻¹ h,  Φ = s² / |ξ|

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "horoflow/curvalg.hpp"
#include "horoflow/grid.hpp"

namespace horoflow {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct SphericalDerivatives {
  std::vector<Vec2> Dr;   // covariant gradient
  std::vector<Mat2> D2r;  // covariant Hessian (round-sphere connection)
};

/// Second-order finite differences in θ (Neumann ghosts on the axis, pole
/// reflection on full2d) and spectral differences in φ. On axisymmetric grids
/// the azimuthal Hessian cot θ·r′ is replaced by r″ on the two nodes nearest
/// each pole.
SphericalDerivatives spherical_derivatives(const GraphState& state);

struct GeometryFields {
  int n = 2;
  GridMode mode = GridMode::axisymmetric;
  std::size_t nodes = 0;

  std::vector<Vec2> Dr;
  std::vector<Mat2> D2r;
  std::vector<double> s;  // s_κ(r)
  std::vector<double> c;  // c_κ(r)
  std::vector<double> xi_norm;
  std::vector<Mat2> g;
  std::vector<Mat2> g_inv;
  std::vector<Mat2> h;
  std::vector<Mat2> W;
  std::vector<double> lambda;  // n per node, ascending
  std::vector<double> H;       // trace of W
  std::vector<double> Hm;
  std::vector<double> F;
  std::vector<double> area_weight;  // sqrt(det g)·quadrature weight
  std::vector<double> Phi;

  std::span<const double> lambda_at(std::size_t node) const {
    return {lambda.data() + node * n, static_cast<std::size_t>(n)};
  }
  /// Number of frame directions represented by block index 1.
  int azimuthal_multiplicity() const noexcept {
    return mode == GridMode::axisymmetric ? n - 1 : 1;
  }
};

/// Throws ParabolicityLost (with node location) when H_m ≤ 0 at any node.
GeometryFields geometry_from_graph(const GraphState& state, const FlowParams& params);

/// Mean curvature from the closed-form expression
///   H = −(Δr − D²r(Dr,Dr)/|ξ|²)/(|ξ| s) + c (n + |Dr|²/|ξ|²)/|ξ|,
/// independent of the assembled W.
double mean_curvature_formula(const GeometryFields& fields, std::size_t node);

/// Closed-form Weingarten map
///   W = −(1/|ξ|)[(D²r − D²r·Dr Drᵀ/|ξ|²)/s − c (I + Dr Drᵀ/|ξ|²)].
Mat2 weingarten_closed_form(const GeometryFields& fields, std::size_t node);

/// Difference tensor Γ^k_ij − Γ(σ)^k_ij between the induced Levi-Civita
/// connection and the round one, per node, in the σ-orthonormal frame
/// (full n-dimensional, not reduced).
struct ChristoffelField {
  int n = 2;
  std::size_t nodes = 0;
  std::vector<double> data;

  double operator()(std::size_t node, int k, int i, int j) const {
    return data[((node * n + k) * n + i) * n + j];
  }
};

ChristoffelField sphere_christoffels(const GeometryFields& fields);

/// ∫_0^r s_κⁿ(ρ) dρ (Gauss–Kronrod, relative tolerance 1e-11).
double radial_volume_integral(double r, int n, const AmbientCurvature& ac);

struct AreaVolume {
  double area;
  double volume;
};

AreaVolume area_and_volume(const GraphState& state, const FlowParams& params);
double enclosed_volume(const GraphState& state, const FlowParams& params);

}  // namespace horoflow
