#include "horoflow/pinching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "horoflow/errors.hpp"

namespace horoflow {

ConeSampler::ConeSampler(int n, SamplerOptions options) : n_(n), options_(options) {
  if (n < 2) throw DomainError("ConeSampler: n must be >= 2");
  if (options.samples < 1) throw DomainError("ConeSampler: need at least one sample");

  std::mt19937_64 rng(options.seed);
  std::exponential_distribution<double> expo(1.0);
  const int count = options.samples;
  points_.reserve(static_cast<std::size_t>(count + n + 1) * n);

  auto push_dirichlet = [&](int skip) {
    double y[32];
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      y[i] = (i == skip) ? 0.0 : expo(rng);
      total += y[i];
    }
    for (int i = 0; i < n; ++i) points_.push_back(y[i] / total);
  };

  for (int s = 0; s < count; ++s) {
    // Even samples fill the interior, odd ones the faces in round-robin order.
    push_dirichlet(s % 2 == 0 ? -1 : (s / 2) % n);
  }
  for (int v = 0; v < n; ++v) {
    for (int i = 0; i < n; ++i) points_.push_back(i == v ? 1.0 : 0.0);
  }
  for (int i = 0; i < n; ++i) points_.push_back(1.0 / n);
}

std::vector<double> cone_point(double epsilon, std::span<const double> y) {
  const int n = static_cast<int>(y.size());
  std::vector<double> lambda(y.size());
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    lambda[i] = epsilon + (1.0 - n * epsilon) * y[i];
    norm2 += lambda[i] * lambda[i];
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& l : lambda) l *= inv;
  return lambda;
}

namespace {

void check_epsilon(double epsilon, int n) {
  if (!(epsilon > 0.0 && epsilon <= 1.0 / n + 1e-15)) {
    throw DomainError("pinched-cone parameter epsilon must lie in (0, 1/n]");
  }
}

double min_gradient(std::span<const double> lambda, const FlowParams& params) {
  const auto g = speed_gradient(lambda, params);
  return *std::min_element(g.begin(), g.end());
}

double hessian_norm(std::span<const double> lambda, const FlowParams& params) {
  return speed_hessian_operator_norm(lambda, params);
}

// Extremise objective(λ(ε, y)) over the sample set, then polish the best
// sample by pairwise mass transfers inside the simplex. sign = +1 minimises,
// sign = −1 maximises.
template <class Objective>
ConeEstimate extremise(double epsilon, const FlowParams& params, const ConeSampler& sampler,
                       Objective objective, double sign) {
  check_epsilon(epsilon, params.n);
  if (sampler.n() != params.n) throw DomainError("sampler dimension does not match n");
  if (sampler.size() == 0) throw DomainError("empty feasible sample set");

  const int n = params.n;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t s = 0; s < sampler.size(); ++s) {
    const auto lambda = cone_point(epsilon, sampler.simplex_point(s));
    const double v = sign * objective(lambda, params);
    if (v < best) {
      best = v;
      best_index = s;
    }
  }

  std::vector<double> y(sampler.simplex_point(best_index).begin(),
                        sampler.simplex_point(best_index).end());
  double step = 0.05;
  for (int sweep = 0; sweep < sampler.options().refine_sweeps; ++sweep) {
    bool improved = false;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double delta = std::min(step, y[j]);
        if (delta <= 0.0) continue;
        std::vector<double> trial = y;
        trial[i] += delta;
        trial[j] -= delta;
        const double v = sign * objective(cone_point(epsilon, trial), params);
        if (v < best) {
          best = v;
          y = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return ConeEstimate{sign * best, cone_point(epsilon, y), sampler.size()};
}

}  // namespace

ConeEstimate W1(double epsilon, const FlowParams& params, const ConeSampler& sampler) {
  return extremise(epsilon, params, sampler, min_gradient, 1.0);
}

ConeEstimate W2(double epsilon, const FlowParams& params, const ConeSampler& sampler) {
  // |λ| = 1 on the sampled set, so the |𝒲|^{mβ−2} normalisation is 1.
  return extremise(epsilon, params, sampler, hessian_norm, -1.0);
}

double script_N_prime(double epsilon, const FlowParams& params, const ConeSampler& sampler) {
  const int n = params.n;
  const double w1 = W1(epsilon, params, sampler).value;
  const double w2 = W2(epsilon, params, sampler).value;
  return (n - 1) / (2.0 * std::sqrt(static_cast<double>(n))) * w1 * epsilon * epsilon -
         w2 * script_N(epsilon, n);
}

PinchingConstants solve_epsilon0_and_cstar(const FlowParams& params,
                                           const ConstantsOptions& options) {
  params.validate();
  const int n = params.n;
  const ConeSampler sampler(n, options.sampler);

  PinchingConstants out;
  out.samples = options.sampler.samples;
  out.seed = options.sampler.seed;

  const int P = std::max(options.table_points, 4);
  const double rn = std::sqrt(static_cast<double>(n));
  for (int k = 1; k <= P; ++k) {
    const double eps = static_cast<double>(k) / (n * (P + 1.0));
    const double w1 = W1(eps, params, sampler).value;
    const double w2 = W2(eps, params, sampler).value;
    const double N = script_N(eps, n);
    out.table.push_back({eps, N, w1, w2, (n - 1) / (2.0 * rn) * w1 * eps * eps - w2 * N});
  }
  // Points feasible at a larger ε are feasible at every smaller one, so the
  // tabulated extrema may borrow from the right without leaving the cone.
  for (int k = P - 2; k >= 0; --k) {
    auto& row = out.table[k];
    row.W1 = std::min(row.W1, out.table[k + 1].W1);
    row.W2 = std::max(row.W2, out.table[k + 1].W2);
    row.N_prime = (n - 1) / (2.0 * rn) * row.W1 * row.epsilon * row.epsilon - row.W2 * row.N;
  }

  double lo = 0.0;
  double hi = 0.0;
  bool bracket = false;
  for (int k = 0; k + 1 < P; ++k) {
    if (out.table[k].N_prime < 0.0 && out.table[k + 1].N_prime >= 0.0) {
      lo = out.table[k].epsilon;
      hi = out.table[k + 1].epsilon;
      bracket = true;
      break;
    }
  }
  if (!bracket && out.table.back().N_prime < 0.0) {
    const double edge = (1.0 / n) * (1.0 - 1e-9);
    if (script_N_prime(edge, params, sampler) >= 0.0) {
      lo = out.table.back().epsilon;
      hi = edge;
      bracket = true;
    }
  }

  if (!bracket) {
    out.degenerate = true;
    out.epsilon0 = options.epsilon_floor;
  } else {
    while (hi - lo > options.bisection_tol) {
      const double mid = 0.5 * (lo + hi);
      if (script_N_prime(mid, params, sampler) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.epsilon0 = 0.5 * (lo + hi);
  }
  out.c_star = slice_max_pinching(out.epsilon0, n);
  if (!(out.c_star > 0.0 && out.c_star < 1.0 / std::pow(static_cast<double>(n), n))) {
    throw NumericalAbort("pinching constant C* outside (0, 1/n^n)");
  }
  return out;
}

}  // namespace horoflow
