#pragma once

// Numerical construction of the pinching constants ε₀ and C*.
//
// W1(ε) = min Ḟ^i and W2(ε) = sup |F̈(B,B)| over the pinched cone
// {λ : min λ_i ≥ ε Σ λ_j > 0} intersected with the unit sphere. Points of the
// cone are parametrised as λ ∝ ε·1 + (1 − nε)·y with y in the unit simplex, so
// a fixed set of simplex samples serves every ε (common random numbers): the
// estimates are then continuous in ε and bisection on 𝒩′ is well posed.

#include <cstdint>
#include <vector>

#include "horoflow/curvalg.hpp"

namespace horoflow {

struct SamplerOptions {
  int samples = 100000;
  std::uint64_t seed = 20240601;
  int refine_sweeps = 40;  // coordinate-descent sweeps from the best sample
};

/// Fixed simplex sample set; half interior (Dirichlet(1)), half on the faces
/// y_i = 0 where the pinching constraint is active, plus vertices and the
/// barycentre.
class ConeSampler {
 public:
  ConeSampler(int n, SamplerOptions options);

  int n() const noexcept { return n_; }
  const SamplerOptions& options() const noexcept { return options_; }
  std::size_t size() const noexcept { return points_.size() / n_; }
  std::span<const double> simplex_point(std::size_t i) const {
    return {points_.data() + i * n_, static_cast<std::size_t>(n_)};
  }

 private:
  int n_;
  SamplerOptions options_;
  std::vector<double> points_;
};

/// Unit vector λ(ε, y) ∝ ε·1 + (1 − nε)·y.
std::vector<double> cone_point(double epsilon, std::span<const double> y);

struct ConeEstimate {
  double value;
  std::vector<double> argext;  // extremal λ (unit norm)
  std::size_t feasible;        // samples evaluated
};

ConeEstimate W1(double epsilon, const FlowParams& params, const ConeSampler& sampler);
ConeEstimate W2(double epsilon, const FlowParams& params, const ConeSampler& sampler);

/// 𝒩′(ε) = (n−1)/(2√n)·W1(ε)ε² − W2(ε)𝒩(ε).
double script_N_prime(double epsilon, const FlowParams& params, const ConeSampler& sampler);

struct ConstantsRow {
  double epsilon;
  double N;
  double W1;
  double W2;
  double N_prime;
};

struct PinchingConstants {
  double epsilon0 = 0.0;
  double c_star = 0.0;
  bool degenerate = false;  // no sign change of 𝒩′: floor convention used
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<ConstantsRow> table;
};

struct ConstantsOptions {
  SamplerOptions sampler{};
  int table_points = 32;
  double epsilon_floor = 0.01;  // ε₀ when 𝒩′ never changes sign
  double bisection_tol = 1e-8;
};

PinchingConstants solve_epsilon0_and_cstar(const FlowParams& params,
                                           const ConstantsOptions& options = {});

}  // namespace horoflow
