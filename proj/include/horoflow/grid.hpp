#pragma once

// Discretisations of the unit sphere Sⁿ used as the chart of a radial graph.
//
// axisymmetric: r = r(θ), nodes θ_j = jπ/N for j = 0..N (poles included),
//   any n ≥ 2. Quadrature weights are the exact round-sphere measure of the
//   cell [θ_j − h/2, θ_j + h/2] ∩ [0, π].
// full2d: n = 2, latitude–longitude grid with cell-centred rows
//   θ_j = (j + ½)π/N_θ and φ_k = 2πk/N_φ (N_φ even). Rows across a pole are
//   reached by reflection: (−θ, φ) ≡ (θ, φ + π).

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace horoflow {

enum class GridMode { axisymmetric, full2d };

const char* to_string(GridMode mode);
GridMode grid_mode_from_string(const std::string& text);

class GridSpec {
 public:
  /// Throws DomainError on invalid sizes (N_θ < 16, full2d with n ≠ 2, odd N_φ).
  static std::shared_ptr<const GridSpec> axisymmetric(int n, int n_theta);
  static std::shared_ptr<const GridSpec> full2d(int n_theta, int n_phi);

  GridMode mode() const noexcept { return mode_; }
  int n() const noexcept { return n_; }
  int n_theta() const noexcept { return n_theta_; }
  int n_phi() const noexcept { return n_phi_; }
  std::size_t rows() const noexcept { return theta_.size(); }
  std::size_t node_count() const noexcept { return theta_.size() * n_phi_; }
  double dtheta() const noexcept { return dtheta_; }
  double dphi() const noexcept { return dphi_; }

  std::size_t index(std::size_t row, std::size_t col) const noexcept {
    return row * n_phi_ + col;
  }
  double theta_row(std::size_t row) const noexcept { return theta_[row]; }
  double theta(std::size_t node) const noexcept { return theta_[node / n_phi_]; }
  double phi(std::size_t node) const noexcept { return phi_[node % n_phi_]; }

  /// Round-sphere measure attached to a node; sums to vol(Sⁿ).
  double weight(std::size_t node) const noexcept { return weight_[node / n_phi_]; }

  /// Periodic spectral differentiation matrices in φ (full2d only).
  const Eigen::MatrixXd& dphi1() const noexcept { return dphi1_; }
  const Eigen::MatrixXd& dphi2() const noexcept { return dphi2_; }

  /// Unit direction in Rⁿ⁺¹ of a node (axisymmetric: representative with
  /// azimuth 0, first component along the symmetry axis).
  Eigen::VectorXd direction(std::size_t node) const;

 private:
  GridSpec() = default;

  GridMode mode_ = GridMode::axisymmetric;
  int n_ = 2;
  int n_theta_ = 0;
  int n_phi_ = 1;
  double dtheta_ = 0.0;
  double dphi_ = 0.0;
  std::vector<double> theta_;
  std::vector<double> phi_;
  std::vector<double> weight_;
  Eigen::MatrixXd dphi1_;
  Eigen::MatrixXd dphi2_;
};

/// Volume of the unit k-sphere Sᵏ.
double unit_sphere_volume(int k);

struct GraphState {
  double t = 0.0;
  std::shared_ptr<const GridSpec> grid;
  std::vector<double> r;
};

/// Sphere r ≡ r0 on the given grid.
GraphState make_sphere(std::shared_ptr<const GridSpec> grid, double r0);

/// r = r0 + amplitude·P_l(cos θ) with the Legendre polynomial P_l (P_l(1) = 1).
GraphState make_perturbed_sphere(std::shared_ptr<const GridSpec> grid, double r0, int mode_l,
                                 double amplitude);

double legendre(int l, double x);

}  // namespace horoflow
