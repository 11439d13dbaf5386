#include "horoflow/curvalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "horoflow/errors.hpp"

namespace horoflow {

void FlowParams::validate() const {
  if (n < 2) throw DomainError("n must be >= 2, got " + std::to_string(n));
  if (m < 1 || m > n) {
    throw DomainError("m must lie in [1, n], got m=" + std::to_string(m));
  }
  if (!std::isfinite(beta) || !(m * beta >= 1.0 - 1e-12)) {
    throw DomainError("m*beta must be >= 1, got " + std::to_string(m * beta));
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return std::round(out);
}

namespace {

// E_k of λ with up to two indices skipped (skip < 0 means none).
double esym_skip(std::span<const double> lambda, int k, int skip1, int skip2) {
  if (k < 0) return 0.0;
  double e[32] = {1.0};
  for (int j = 1; j <= k; ++j) e[j] = 0.0;
  for (int i = 0; i < static_cast<int>(lambda.size()); ++i) {
    if (i == skip1 || i == skip2) continue;
    for (int j = k; j >= 1; --j) e[j] += lambda[i] * e[j - 1];
  }
  return e[k];
}

void require_positive_cone(std::span<const double> lambda) {
  for (double l : lambda) {
    if (!(l > 0.0)) throw DomainError("principal curvatures must lie in the positive cone");
  }
}

double Hm_checked(std::span<const double> lambda, const FlowParams& params) {
  const double Hm = mean_curvature_m(lambda, params);
  if (!(Hm > 0.0)) {
    throw ParabolicityLost("H_m = " + std::to_string(Hm) + " <= 0: flow is not parabolic");
  }
  return Hm;
}

}  // namespace

double elementary_symmetric(std::span<const double> lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  if (k < 0 || k > n) {
    throw DomainError("elementary_symmetric: k=" + std::to_string(k) + " outside [0," +
                      std::to_string(n) + "]");
  }
  if (n >= 32) throw DomainError("elementary_symmetric: dimension too large");
  return esym_skip(lambda, k, -1, -1);
}

double mean_curvature_m(std::span<const double> lambda, const FlowParams& params) {
  return elementary_symmetric(lambda, params.m) / binomial(params.n, params.m);
}

double speed(std::span<const double> lambda, const FlowParams& params) {
  const double Hm = Hm_checked(lambda, params);
  return params.beta == 1.0 ? Hm : std::pow(Hm, params.beta);
}

std::vector<double> speed_gradient(std::span<const double> lambda,
                                   const FlowParams& params, bool require_cone) {
  if (require_cone) require_positive_cone(lambda);
  const double Hm = Hm_checked(lambda, params);
  const double C = binomial(params.n, params.m);
  const double outer = params.beta * std::pow(Hm, params.beta - 1.0);
  std::vector<double> grad(lambda.size());
  for (int i = 0; i < static_cast<int>(lambda.size()); ++i) {
    grad[i] = outer * esym_skip(lambda, params.m - 1, i, -1) / C;
  }
  return grad;
}

Eigen::MatrixXd speed_hessian(std::span<const double> lambda, const FlowParams& params) {
  require_positive_cone(lambda);
  const int n = static_cast<int>(lambda.size());
  const double Hm = Hm_checked(lambda, params);
  const double C = binomial(params.n, params.m);
  const double beta = params.beta;

  Eigen::VectorXd dH(n);
  for (int i = 0; i < n; ++i) dH[i] = esym_skip(lambda, params.m - 1, i, -1) / C;

  Eigen::MatrixXd hess = beta * (beta - 1.0) * std::pow(Hm, beta - 2.0) * dH * dH.transpose();
  const double outer = beta * std::pow(Hm, beta - 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double Hij = esym_skip(lambda, params.m - 2, i, j) / C;
      hess(i, j) += outer * Hij;
      hess(j, i) += outer * Hij;
    }
  }
  return hess;
}

Eigen::MatrixXd speed_divided_differences(std::span<const double> lambda,
                                          const FlowParams& params) {
  require_positive_cone(lambda);
  const int n = static_cast<int>(lambda.size());
  const double Hm = Hm_checked(lambda, params);
  const double C = binomial(params.n, params.m);
  const double outer = params.beta * std::pow(Hm, params.beta - 1.0);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      const double v = -outer * esym_skip(lambda, params.m - 2, i, k) / C;
      D(i, k) = v;
      D(k, i) = v;
    }
  }
  return D;
}

double speed_hessian_quadform(std::span<const double> lambda, const FlowParams& params,
                              const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(lambda.size());
  if (B.rows() != n || B.cols() != n) {
    throw DomainError("speed_hessian_quadform: B must be n x n");
  }
  const Eigen::MatrixXd hess = speed_hessian(lambda, params);
  const Eigen::MatrixXd D = speed_divided_differences(lambda, params);
  const Eigen::VectorXd diag = B.diagonal();
  double out = diag.dot(hess * diag);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i != k) out += D(i, k) * B(i, k) * B(i, k);
    }
  }
  return out;
}

double speed_hessian_operator_norm(std::span<const double> lambda,
                                   const FlowParams& params) {
  const Eigen::MatrixXd hess = speed_hessian(lambda, params);
  const Eigen::MatrixXd D = speed_divided_differences(lambda, params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess, Eigen::EigenvaluesOnly);
  double out = eig.eigenvalues().cwiseAbs().maxCoeff();
  return std::max(out, D.cwiseAbs().maxCoeff());
}

CurvatureSpectrum::CurvatureSpectrum(std::span<const double> lambda,
                                     const AmbientCurvature& ac)
    : lambda_(lambda.begin(), lambda.end()) {
  if (lambda_.empty()) throw DomainError("empty curvature spectrum");
  std::sort(lambda_.begin(), lambda_.end());
  lambda_tilde_.resize(lambda_.size());
  for (std::size_t i = 0; i < lambda_.size(); ++i) lambda_tilde_[i] = lambda_[i] - ac.a();
}

double TildeQuantities::Q() const {
  if (H == 0.0) throw SingularityError("Q~ requested with H~ = 0");
  return K / std::pow(H, n);
}

TildeQuantities tilde_quantities(const CurvatureSpectrum& spec) {
  TildeQuantities t{0.0, 1.0, 0.0, spec.n()};
  for (double l : spec.lambda_tilde()) {
    t.H += l;
    t.K *= l;
    t.A2 += l * l;
  }
  return t;
}

double pinching_deficit(const CurvatureSpectrum& spec) {
  const auto& lt = spec.lambda_tilde();
  const int n = spec.n();
  double H = 0.0;
  for (double l : lt) H += l;
  if (!(H > 0.0)) throw SingularityError("pinching deficit requires H~ > 0");
  const double mean = H / n;
  std::vector<double> x(lt.size());
  for (std::size_t i = 0; i < lt.size(); ++i) x[i] = (lt[i] - mean) / mean;
  // Π(1 + x_i) = Σ_k e_k(x) with e_1(x) = 0 exactly.
  double tail = 0.0;
  for (int k = n; k >= 2; --k) tail += esym_skip(x, k, -1, -1);
  return -tail / std::pow(static_cast<double>(n), n);
}

bool pinching_predicate(const CurvatureSpectrum& spec, const FlowParams& params,
                        double c_star) {
  (void)params;
  const TildeQuantities t = tilde_quantities(spec);
  return t.H > 0.0 && t.K > c_star * std::pow(t.H, t.n);
}

double script_N(double epsilon, int n) {
  if (!(epsilon > 0.0 && epsilon < 1.0 / n)) {
    throw DomainError("script_N: epsilon must lie in (0, 1/n)");
  }
  const double rn = std::sqrt(static_cast<double>(n));
  if (epsilon <= 1.0 / (2.0 * (n - 1))) return rn * (1.0 - epsilon * n) / epsilon;
  return rn * (n - 1) * (1.0 - n * epsilon) / (1.0 - (n - 1) * epsilon);
}

double slice_max_pinching(double epsilon, int n) {
  if (!(epsilon > 0.0 && epsilon <= 1.0 / n)) {
    throw DomainError("slice_max_pinching: epsilon must lie in (0, 1/n]");
  }
  return epsilon * std::pow((1.0 - epsilon) / (n - 1), n - 1);
}

}  // namespace horoflow
