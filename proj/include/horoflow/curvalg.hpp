#pragma once

// Symmetric-function algebra for the speed F = H_m^β of principal-curvature
// tuples, together with the shifted ("tilde") quantities λ̃ = λ − a.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "horoflow/hypergeom.hpp"

namespace horoflow {

struct FlowParams {
  int n = 2;
  int m = 1;
  double beta = 1.0;
  AmbientCurvature ac{-1.0};

  /// Throws DomainError unless 2 ≤ n, 1 ≤ m ≤ n and m·β ≥ 1.
  void validate() const;

  double homogeneity() const noexcept { return m * beta; }
};

double binomial(int n, int k);

/// E_k(λ); E_0 = 1. Throws DomainError for k outside [0, n].
double elementary_symmetric(std::span<const double> lambda, int k);

/// H_m = E_m / C(n, m).
double mean_curvature_m(std::span<const double> lambda, const FlowParams& params);

/// F = H_m^β; throws ParabolicityLost when H_m ≤ 0.
double speed(std::span<const double> lambda, const FlowParams& params);

/// Ḟ^i = β H_m^{β−1} E_{m−1}(λ | i) / C(n, m). Requires λ ∈ Γ₊ unless
/// require_cone is false, in which case only H_m > 0 is needed.
std::vector<double> speed_gradient(std::span<const double> lambda,
                                   const FlowParams& params, bool require_cone = true);

/// ∂²F/∂λ_i∂λ_j. Requires λ ∈ Γ₊.
Eigen::MatrixXd speed_hessian(std::span<const double> lambda, const FlowParams& params);

/// (Ḟ^i − Ḟ^k)/(λ_i − λ_k) for i ≠ k, evaluated through the identity
/// Ḣ_m^i − Ḣ_m^k = (λ_k − λ_i) E_{m−2}(λ | i,k) / C(n,m); this stays finite and
/// exact for repeated eigenvalues.
Eigen::MatrixXd speed_divided_differences(std::span<const double> lambda,
                                          const FlowParams& params);

/// F̈(B, B) at W = diag(λ) for symmetric B.
double speed_hessian_quadform(std::span<const double> lambda, const FlowParams& params,
                              const Eigen::MatrixXd& B);

/// sup |F̈(B,B)| over symmetric B with Frobenius norm 1 at W = diag(λ).
double speed_hessian_operator_norm(std::span<const double> lambda,
                                   const FlowParams& params);

class CurvatureSpectrum {
 public:
  CurvatureSpectrum(std::span<const double> lambda, const AmbientCurvature& ac);

  const std::vector<double>& lambda() const noexcept { return lambda_; }
  const std::vector<double>& lambda_tilde() const noexcept { return lambda_tilde_; }
  bool h_convex() const noexcept { return lambda_tilde_.front() > 0.0; }
  int n() const noexcept { return static_cast<int>(lambda_.size()); }

 private:
  std::vector<double> lambda_;
  std::vector<double> lambda_tilde_;
};

struct TildeQuantities {
  double H;   // H̃ = Σ λ̃_i
  double K;   // K̃ = Π λ̃_i
  double A2;  // |Ã|² = Σ λ̃_i²
  int n;

  /// Q̃ = K̃ / H̃ⁿ; throws SingularityError when H̃ = 0.
  double Q() const;
};

TildeQuantities tilde_quantities(const CurvatureSpectrum& spec);

/// f = 1/nⁿ − K̃/H̃ⁿ evaluated without cancellation (through the elementary
/// symmetric functions of the deviations from the mean). Requires H̃ > 0.
double pinching_deficit(const CurvatureSpectrum& spec);

/// K̃ > c_star·H̃ⁿ and H̃ > 0.
bool pinching_predicate(const CurvatureSpectrum& spec, const FlowParams& params,
                        double c_star);

/// 𝒩(ε) on (0, 1/n); DomainError otherwise.
double script_N(double epsilon, int n);

/// Largest Q̃ on the slice λ̃_1 = ε H̃: ε((1−ε)/(n−1))^{n−1}.
double slice_max_pinching(double epsilon, int n);

}  // namespace horoflow
