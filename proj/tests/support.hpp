#pragma once

// Shared test oracles: seeded generators and principal curvatures of a radial
// graph computed from its embedding in the hyperboloid model.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "horoflow/curvalg.hpp"
#include "horoflow/geometry.hpp"
#include "horoflow/grid.hpp"

namespace testing_support {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::vector<double> positive_tuple(int n, double log_spread = 1.0) {
    std::vector<double> out(n);
    for (double& v : out) v = std::exp(uniform(-log_spread, log_spread));
    return out;
  }
  Eigen::MatrixXd symmetric(int n) {
    Eigen::MatrixXd B(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) B(i, j) = B(j, i) = normal();
    }
    return B / B.norm();
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline horoflow::FlowParams params(int n, int m, double beta, double kappa = -1.0) {
  horoflow::FlowParams p;
  p.n = n;
  p.m = m;
  p.beta = beta;
  p.ac = horoflow::AmbientCurvature(kappa);
  return p;
}

/// Partial derivatives of r(θ, φ) up to second order.
struct Jet {
  double r, rt, rp, rtt, rtp, rpp;
};

/// r = r0 + A·P2(cos θ) + B·sin θ cos θ cos φ, with exact derivatives.
inline Jet perturbed_jet(double r0, double A, double B, double th, double ph) {
  const double c = std::cos(th), s = std::sin(th);
  const double cp = std::cos(ph), sp = std::sin(ph);
  Jet j;
  j.r = r0 + A * 0.5 * (3 * c * c - 1) + B * s * c * cp;
  j.rt = A * (-3 * c * s) + B * (c * c - s * s) * cp;
  j.rtt = A * (-3 * (c * c - s * s)) + B * (-4 * s * c) * cp;
  j.rp = -B * s * c * sp;
  j.rpp = -B * s * c * cp;
  j.rtp = -B * (c * c - s * s) * sp;
  return j;
}

/// Weingarten map in the coordinate frame (∂_θ, ∂_φ) of
/// X(θ,φ) = (cosh(ar)/a, sinh(ar)/a·u) in the hyperboloid {⟨X,X⟩ = −1/a²} ⊂
/// R^{1,3}, from g_ij = ⟨∂_i X, ∂_j X⟩ and h_ij = −⟨∂_ij X, ν⟩.
inline Eigen::Matrix2d embedding_weingarten(const Jet& j, double th, double ph, double a) {
  using V4 = Eigen::Vector4d;
  const double S = std::sinh(a * j.r) / a;
  const double C = std::cosh(a * j.r);
  const double ct = std::cos(th), st = std::sin(th), cp = std::cos(ph), sp = std::sin(ph);
  const Eigen::Vector3d u(ct, st * cp, st * sp);
  const Eigen::Vector3d ut(-st, ct * cp, ct * sp);
  const Eigen::Vector3d up(0, -st * sp, st * cp);
  const Eigen::Vector3d utt(-ct, -st * cp, -st * sp);
  const Eigen::Vector3d utp(0, -ct * sp, ct * cp);
  const Eigen::Vector3d upp(0, -st * cp, -st * sp);

  const double ri[2] = {j.rt, j.rp};
  const Eigen::Vector3d ui[2] = {ut, up};
  const double rij[2][2] = {{j.rtt, j.rtp}, {j.rtp, j.rpp}};
  const Eigen::Vector3d uij[2][2] = {{utt, utp}, {utp, upp}};

  auto lift = [](double t0, const Eigen::Vector3d& v) {
    V4 out;
    out << t0, v;
    return out;
  };
  auto mink = [](const V4& x, const V4& y) { return -x[0] * y[0] + x.tail<3>().dot(y.tail<3>()); };

  const V4 X = lift(C / a, S * u);
  V4 Xi[2];
  V4 Xij[2][2];
  for (int i = 0; i < 2; ++i) {
    Xi[i] = lift(a * S * ri[i], C * ri[i] * u + S * ui[i]);
    for (int k = 0; k < 2; ++k) {
      Xij[i][k] = lift(a * (C * ri[i] * ri[k] + S * rij[i][k]),
                       a * a * S * ri[i] * ri[k] * u + C * rij[i][k] * u + C * ri[i] * ui[k] +
                           C * ri[k] * ui[i] + S * uij[i][k]);
    }
  }
  Eigen::Matrix<double, 3, 4> M;
  const Eigen::Vector4d eta(-1, 1, 1, 1);
  M.row(0) = X.cwiseProduct(eta).transpose();
  M.row(1) = Xi[0].cwiseProduct(eta).transpose();
  M.row(2) = Xi[1].cwiseProduct(eta).transpose();
  Eigen::FullPivLU<Eigen::Matrix<double, 3, 4>> lu(M);
  V4 nu = lu.kernel().col(0);
  nu /= std::sqrt(mink(nu, nu));
  const V4 radial = lift(a * S, C * u);
  if (mink(nu, radial) < 0) nu = -nu;

  Eigen::Matrix2d g, h;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      g(i, k) = mink(Xi[i], Xi[k]);
      h(i, k) = -mink(Xij[i][k], nu);
    }
  }
  return g.inverse() * h;
}

/// Principal curvatures (ascending) from embedding_weingarten.
inline std::array<double, 2> embedding_curvatures(const Jet& j, double th, double ph, double a) {
  const Eigen::Matrix2d W = embedding_weingarten(j, th, ph, a);
  const double half = 0.5 * W.trace();
  const double disc = std::sqrt(std::max(0.0, half * half - W.determinant()));
  return {half - disc, half + disc};
}

/// Central-difference derivative.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

/// Largest deviation of the discrete principal curvatures of
/// r = 1 + A·P2(cos θ) on an axisymmetric grid from the embedding oracle
/// (a = 1). On the axis both curvatures equal the meridian value.
inline double axisymmetric_curvature_error(int n, int N, double A) {
  using namespace horoflow;
  const FlowParams p = params(n, 1, 1.0);
  const GraphState s = make_perturbed_sphere(GridSpec::axisymmetric(n, N), 1.0, 2, A);
  const GeometryFields f = geometry_from_graph(s, p);
  const Eigen::Matrix2d W_axis =
      embedding_weingarten(perturbed_jet(1.0, A, 0.0, 1e-4, 0.0), 1e-4, 0.0, 1.0);
  double err = 0.0;
  for (std::size_t i = 0; i < f.nodes; ++i) {
    const double th = s.grid->theta(i);
    Eigen::Matrix2d W;
    if (i == 0 || i + 1 == f.nodes) {
      W = Eigen::Matrix2d::Identity() * W_axis(0, 0);
    } else {
      W = embedding_weingarten(perturbed_jet(1.0, A, 0.0, th, 0.0), th, 0.0, 1.0);
    }
    err = std::max({err, std::abs(f.W[i](0, 0) - W(0, 0)), std::abs(f.W[i](1, 1) - W(1, 1))});
  }
  return err;
}

}  // namespace testing_support
