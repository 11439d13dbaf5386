#include "horoflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "horoflow/errors.hpp"
#include "horoflow/geometry.hpp"

namespace horoflow {

namespace {

double bisect_increasing(const std::function<double(double)>& f, double lo, double hi) {
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::max(1.0, b); };
  const auto root = boost::math::tools::bisect(f, lo, hi, tol);
  return 0.5 * (root.first + root.second);
}

}  // namespace

double ta_power_integral(double a, double b, double power, const AmbientCurvature& ac) {
  if (a == b) return 0.0;
  auto integrand = [&](double s) { return std::pow(ta_kappa(std::abs(s), ac), power); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 20,
                                                                        1e-11);
}

double sphere_extinction_time(double r0, const FlowParams& params) {
  if (!(r0 > 0.0)) throw DomainError("sphere radius must be positive");
  return ta_power_integral(0.0, r0, params.homogeneity(), params.ac);
}

SphereTrajectory sphere_contraction(double r0, const FlowParams& params,
                                    std::span<const double> t_grid) {
  namespace odeint = boost::numeric::odeint;
  if (!(r0 > 0.0)) throw DomainError("sphere radius must be positive");
  if (t_grid.empty()) throw DomainError("sphere_contraction: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("time grid must be increasing");
  }

  SphereTrajectory traj;
  traj.params = params;
  const double t0 = t_grid.front();
  const double extinction = t0 + sphere_extinction_time(r0, params);
  std::vector<double> times;
  for (double t : t_grid) {
    if (t < extinction) {
      times.push_back(t);
    } else {
      traj.truncated = true;
    }
  }

  const double power = params.homogeneity();
  const double a = params.ac.a();
  auto rhs = [&](const double& r, double& drdt, double) {
    // Trial states overshooting r = 0 see a huge speed and get rejected.
    const double rr = std::max(r, 1e-300);
    drdt = -std::pow(a / std::tanh(a * rr), power);
  };
  auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<double>());
  double r = r0;
  auto observer = [&](const double& value, double t) {
    if (!(value > 0.0)) return;
    traj.times.push_back(t);
    traj.radii.push_back(value);
  };
  if (times.size() == 1) {
    observer(r, times.front());
  } else if (!times.empty()) {
    odeint::integrate_times(stepper, rhs, r, times.begin(), times.end(), 1e-6, observer);
  }
  if (traj.times.size() < times.size()) traj.truncated = true;

  traj.residuals.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double integral = ta_power_integral(r0, traj.radii[i], power, params.ac);
    traj.residuals.push_back(std::abs(integral + (traj.times[i] - t0)));
  }
  return traj;
}

double ball_volume(double s, int n, const AmbientCurvature& ac) {
  return unit_sphere_volume(n) * radial_volume_integral(s, n, ac);
}

double psi_inverse(double V, const FlowParams& params) {
  if (!(V > 0.0)) throw DomainError("psi_inverse: volume must be positive");
  double hi = 1.0;
  while (ball_volume(hi, params.n, params.ac) < V) hi *= 2.0;
  return bisect_increasing(
      [&](double s) { return ball_volume(s, params.n, params.ac) - V; }, 0.0, hi);
}

double xi_forward(double s, const AmbientCurvature& ac) {
  if (!(s >= 0.0)) throw DomainError("xi_forward: argument must be >= 0");
  const double t = ta_kappa(0.5 * s, ac);
  const double root = 1.0 + std::sqrt(t);
  return s + ac.a() * std::log(root * root / (1.0 + t));
}

double xi_inverse(double s_target, const AmbientCurvature& ac) {
  if (!(s_target > 0.0)) throw DomainError("xi_inverse: argument must be positive");
  const double x = bisect_increasing([&](double s) { return xi_forward(s, ac) - s_target; },
                                     0.0, s_target);
  if (!(x < s_target)) throw NumericalAbort("xi_inverse: expected xi(x) < x");
  return x;
}

double tau_bound(double V0, const FlowParams& params) {
  const double R = xi_inverse(psi_inverse(V0, params), params.ac);
  return ta_power_integral(0.5 * R, R, params.homogeneity(), params.ac);
}

double geodesic_distance(double r1, const Eigen::VectorXd& u1, double r2,
                         const Eigen::VectorXd& u2, const AmbientCurvature& ac) {
  // 2 sinh²(ad/2) = 2 sinh²(a(r1−r2)/2) + sinh(a r1) sinh(a r2)(1 − u1·u2):
  // the hyperboloid-model inner product rearranged to avoid cancellation.
  const double a = ac.a();
  const double dr = std::sinh(0.5 * a * (r1 - r2));
  const double chord2 = (u1 - u2).squaredNorm();
  const double v = dr * dr + 0.25 * std::sinh(a * r1) * std::sinh(a * r2) * chord2;
  return 2.0 * std::asinh(std::sqrt(std::max(0.0, v))) / a;
}

namespace {

// Distance from exp_p(v) to every node; v is a tangent vector at p.
double distance_to_node(const Eigen::VectorXd& v, const GraphState& state, std::size_t node,
                        const Eigen::VectorXd& u_node, const AmbientCurvature& ac) {
  const double len = v.norm();
  if (len == 0.0) return state.r[node];
  return geodesic_distance(len, v / len, state.r[node], u_node, ac);
}

struct SurfaceProbe {
  const GraphState& state;
  const AmbientCurvature& ac;
  std::vector<Eigen::VectorXd> dirs;

  SurfaceProbe(const GraphState& s, const AmbientCurvature& a) : state(s), ac(a) {
    for (std::size_t i = 0; i < s.grid->node_count(); ++i) dirs.push_back(s.grid->direction(i));
  }

  double min_distance(const Eigen::VectorXd& v) const {
    double out = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      out = std::min(out, distance_to_node(v, state, i, dirs[i], ac));
    }
    return out;
  }

  double max_distance(const Eigen::VectorXd& v) const {
    double out = 0.0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      out = std::max(out, distance_to_node(v, state, i, dirs[i], ac));
    }
    return out;
  }
};

InnerRadius axisymmetric_inner_radius(const GraphState& state, const AmbientCurvature& ac) {
  const SurfaceProbe probe(state, ac);
  const int dim = state.grid->n() + 1;
  auto axis_point = [&](double z) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v[0] = z;
    return v;
  };
  const double top = state.r.front();
  const double bottom = state.r.back();
  constexpr int candidates = 33;
  double best = -1.0;
  int best_k = -1;
  std::vector<double> zs(candidates);
  for (int k = 0; k < candidates; ++k) {
    zs[k] = -bottom + (k + 1) * (top + bottom) / (candidates + 1);
    const double d = probe.min_distance(axis_point(zs[k]));
    if (d > best) {
      best = d;
      best_k = k;
    }
  }
  if (best_k < 0 || !(best > 0.0)) throw DomainError("no interior inball candidate found");

  double lo = best_k > 0 ? zs[best_k - 1] : -bottom;
  double hi = best_k + 1 < candidates ? zs[best_k + 1] : top;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = probe.min_distance(axis_point(x1));
  double f2 = probe.min_distance(axis_point(x2));
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = probe.min_distance(axis_point(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = probe.min_distance(axis_point(x1));
    }
  }
  double z = zs[best_k];
  if (std::max(f1, f2) > best) {
    z = f1 >= f2 ? x1 : x2;
    best = std::max(f1, f2);
  }
  const Eigen::VectorXd center = axis_point(z);
  return {best, center, probe.max_distance(center)};
}

InnerRadius lattice_inner_radius(const GraphState& state, const AmbientCurvature& ac) {
  const SurfaceProbe probe(state, ac);
  const int dim = state.grid->n() + 1;
  const double rmin = *std::min_element(state.r.begin(), state.r.end());
  Eigen::VectorXd center = Eigen::VectorXd::Zero(dim);
  double half = 0.9 * rmin;
  double best = probe.min_distance(center);
  constexpr int per_axis = 9;
  for (int level = 0; level < 4; ++level) {
    Eigen::VectorXd level_best = center;
    const Eigen::VectorXd origin = center;
    long total = 1;
    for (int d = 0; d < dim; ++d) total *= per_axis;
    for (long code = 0; code < total; ++code) {
      Eigen::VectorXd v = origin;
      long rest = code;
      for (int d = 0; d < dim; ++d) {
        const int idx = static_cast<int>(rest % per_axis);
        rest /= per_axis;
        v[d] += half * (2.0 * idx / (per_axis - 1) - 1.0);
      }
      if (v.norm() >= rmin) continue;
      const double dist = probe.min_distance(v);
      if (dist > best) {
        best = dist;
        level_best = v;
      }
    }
    center = level_best;
    half *= 0.25;
  }
  if (!(best > 0.0)) throw DomainError("no interior inball candidate found");
  return {best, center, probe.max_distance(center)};
}

}  // namespace

InnerRadius inner_radius_estimate(const GraphState& state, const AmbientCurvature& ac) {
  return state.grid->mode() == GridMode::axisymmetric ? axisymmetric_inner_radius(state, ac)
                                                      : lattice_inner_radius(state, ac);
}

double surface_diameter(const GraphState& state, const AmbientCurvature& ac) {
  const GridSpec& grid = *state.grid;
  const std::size_t N = grid.node_count();
  double out = 0.0;
  if (grid.mode() == GridMode::axisymmetric) {
    // Farthest points of two rings sit at opposite azimuths.
    for (std::size_t i = 0; i < N; ++i) {
      const Eigen::VectorXd ui = grid.direction(i);
      for (std::size_t j = i; j < N; ++j) {
        Eigen::VectorXd uj = grid.direction(j);
        uj[1] = -uj[1];
        out = std::max(out, geodesic_distance(state.r[i], ui, state.r[j], uj, ac));
      }
    }
    return out;
  }
  std::vector<Eigen::VectorXd> dirs;
  for (std::size_t i = 0; i < N; ++i) dirs.push_back(grid.direction(i));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      out = std::max(out, geodesic_distance(state.r[i], dirs[i], state.r[j], dirs[j], ac));
    }
  }
  return out;
}

}  // namespace horoflow
