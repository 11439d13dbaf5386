#include "horoflow/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "horoflow/errors.hpp"

namespace horoflow {

const char* to_string(GridMode mode) {
  return mode == GridMode::axisymmetric ? "axisym" : "full2d";
}

GridMode grid_mode_from_string(const std::string& text) {
  if (text == "axisym" || text == "axisymmetric") return GridMode::axisymmetric;
  if (text == "full2d") return GridMode::full2d;
  throw DomainError("unknown grid mode '" + text + "'");
}

double unit_sphere_volume(int k) {
  const double half = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {

// ∫_0^x sin^k(t) dt by the reduction formula.
double sin_power_integral(int k, double x) {
  if (k == 0) return x;
  if (k == 1) return 1.0 - std::cos(x);
  return -std::pow(std::sin(x), k - 1) * std::cos(x) / k +
         (k - 1.0) / k * sin_power_integral(k - 2, x);
}

}  // namespace

std::shared_ptr<const GridSpec> GridSpec::axisymmetric(int n, int n_theta) {
  if (n < 2) throw DomainError("grid: n must be >= 2");
  if (n_theta < 16) throw DomainError("grid: N_theta must be >= 16");
  std::shared_ptr<GridSpec> g(new GridSpec());
  g->mode_ = GridMode::axisymmetric;
  g->n_ = n;
  g->n_theta_ = n_theta;
  g->n_phi_ = 1;
  g->dtheta_ = std::numbers::pi / n_theta;
  g->phi_ = {0.0};
  const double shell = unit_sphere_volume(n - 1);
  for (int j = 0; j <= n_theta; ++j) {
    const double th = j * g->dtheta_;
    g->theta_.push_back(th);
    const double lo = std::max(0.0, th - 0.5 * g->dtheta_);
    const double hi = std::min(std::numbers::pi, th + 0.5 * g->dtheta_);
    g->weight_.push_back(shell * (sin_power_integral(n - 1, hi) - sin_power_integral(n - 1, lo)));
  }
  return g;
}

std::shared_ptr<const GridSpec> GridSpec::full2d(int n_theta, int n_phi) {
  if (n_theta < 16) throw DomainError("grid: N_theta must be >= 16");
  if (n_phi < 8 || n_phi % 2 != 0) throw DomainError("grid: N_phi must be even and >= 8");
  std::shared_ptr<GridSpec> g(new GridSpec());
  g->mode_ = GridMode::full2d;
  g->n_ = 2;
  g->n_theta_ = n_theta;
  g->n_phi_ = n_phi;
  g->dtheta_ = std::numbers::pi / n_theta;
  g->dphi_ = 2.0 * std::numbers::pi / n_phi;
  for (int j = 0; j < n_theta; ++j) {
    const double th = (j + 0.5) * g->dtheta_;
    g->theta_.push_back(th);
    g->weight_.push_back(g->dphi_ *
                         (std::cos(th - 0.5 * g->dtheta_) - std::cos(th + 0.5 * g->dtheta_)));
  }
  for (int k = 0; k < n_phi; ++k) g->phi_.push_back(k * g->dphi_);

  // Periodic spectral differentiation (even number of points).
  const double h = g->dphi_;
  g->dphi1_ = Eigen::MatrixXd::Zero(n_phi, n_phi);
  g->dphi2_ = Eigen::MatrixXd::Zero(n_phi, n_phi);
  for (int i = 0; i < n_phi; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      if (i == j) continue;
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      const double half = 0.5 * (i - j) * h;
      g->dphi1_(i, j) = 0.5 * sign / std::tan(half);
      g->dphi2_(i, j) = -0.5 * sign / (std::sin(half) * std::sin(half));
    }
    // Negative-sum diagonals: constants differentiate to exactly zero.
    g->dphi1_(i, i) = -(g->dphi1_.row(i).sum());
    g->dphi2_(i, i) = -(g->dphi2_.row(i).sum());
  }
  return g;
}

Eigen::VectorXd GridSpec::direction(std::size_t node) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n_ + 1);
  const double th = theta(node);
  u[0] = std::cos(th);
  if (mode_ == GridMode::axisymmetric) {
    u[1] = std::sin(th);
  } else {
    const double ph = phi(node);
    u[1] = std::sin(th) * std::cos(ph);
    u[2] = std::sin(th) * std::sin(ph);
  }
  return u;
}

double legendre(int l, double x) {
  return std::legendre(static_cast<unsigned>(l), x);
}

GraphState make_sphere(std::shared_ptr<const GridSpec> grid, double r0) {
  if (!(r0 > 0.0)) throw DomainError("sphere radius must be positive");
  GraphState s;
  s.r.assign(grid->node_count(), r0);
  s.grid = std::move(grid);
  return s;
}

GraphState make_perturbed_sphere(std::shared_ptr<const GridSpec> grid, double r0, int mode_l,
                                 double amplitude) {
  GraphState s = make_sphere(grid, r0);
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    s.r[i] = r0 + amplitude * legendre(mode_l, std::cos(s.grid->theta(i)));
  }
  return s;
}

}  // namespace horoflow
