#include "horoflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "horoflow/errors.hpp"
#include "horoflow/parallel.hpp"

namespace horoflow {

namespace {

SphericalDerivatives axisymmetric_derivatives(const GraphState& state) {
  const GridSpec& grid = *state.grid;
  const auto& r = state.r;
  const std::size_t N = grid.rows() - 1;
  const double h = grid.dtheta();
  SphericalDerivatives out;
  out.Dr.resize(N + 1);
  out.D2r.resize(N + 1);
  for (std::size_t j = 0; j <= N; ++j) {
    // Reflected ghosts enforce r′ = 0 on the axis.
    const double left = (j == 0) ? r[1] : r[j - 1];
    const double right = (j == N) ? r[N - 1] : r[j + 1];
    const double d1 = (right - left) / (2.0 * h);
    const double d2 = (right - 2.0 * r[j] + left) / (h * h);
    const bool near_pole = j < 2 || j + 2 > N;
    const double azimuthal = near_pole ? d2 : d1 / std::tan(grid.theta_row(j));
    out.Dr[j] = Vec2(d1, 0.0);
    out.D2r[j] << d2, 0.0, 0.0, azimuthal;
  }
  return out;
}

SphericalDerivatives full2d_derivatives(const GraphState& state) {
  const GridSpec& grid = *state.grid;
  const auto rows = static_cast<int>(grid.rows());
  const int cols = grid.n_phi();
  const int half_turn = cols / 2;
  const double h = grid.dtheta();

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> R(
      state.r.data(), rows, cols);
  // Rows of r_φ and r_φφ; spectral in φ, applied to each row minus its first entry.
  const Eigen::MatrixXd Rdev = R.colwise() - R.col(0);
  const Eigen::MatrixXd Rphi = Rdev * grid.dphi1().transpose();
  const Eigen::MatrixXd Rphiphi = Rdev * grid.dphi2().transpose();

  // Value of field F at (row, col) with rows −1 and `rows` reached across the pole.
  auto at = [&](const auto& Fm, int row, int col) {
    if (row < 0) return Fm(0, (col + half_turn) % cols);
    if (row >= rows) return Fm(rows - 1, (col + half_turn) % cols);
    return Fm(row, col);
  };

  SphericalDerivatives out;
  out.Dr.resize(grid.node_count());
  out.D2r.resize(grid.node_count());
  for (int j = 0; j < rows; ++j) {
    const double th = grid.theta_row(j);
    const double sn = std::sin(th);
    const double cot = std::cos(th) / sn;
    for (int k = 0; k < cols; ++k) {
      const double rt = (at(R, j + 1, k) - at(R, j - 1, k)) / (2.0 * h);
      const double rtt = (at(R, j + 1, k) - 2.0 * R(j, k) + at(R, j - 1, k)) / (h * h);
      const double rp = Rphi(j, k);
      const double rpp = Rphiphi(j, k);
      const double rtp = (at(Rphi, j + 1, k) - at(Rphi, j - 1, k)) / (2.0 * h);
      // TODO: the cot θ·r_θ term carries an O(h) error on the first ring next
      // to each pole; a pole-centred stencil for r_θ would restore O(h²) there.
      const std::size_t node = grid.index(j, k);
      out.Dr[node] = Vec2(rt, rp / sn);
      const double off = (rtp - cot * rp) / sn;
      out.D2r[node] << rtt, off, off, rpp / (sn * sn) + cot * rt;
    }
  }
  return out;
}

}  // namespace

SphericalDerivatives spherical_derivatives(const GraphState& state) {
  if (!state.grid || state.r.size() != state.grid->node_count()) {
    throw DomainError("graph state does not match its grid");
  }
  return state.grid->mode() == GridMode::axisymmetric ? axisymmetric_derivatives(state)
                                                      : full2d_derivatives(state);
}

GeometryFields geometry_from_graph(const GraphState& state, const FlowParams& params) {
  const GridSpec& grid = *state.grid;
  if (grid.n() != params.n) throw DomainError("grid dimension does not match params.n");
  SphericalDerivatives d = spherical_derivatives(state);

  GeometryFields f;
  f.n = params.n;
  f.mode = grid.mode();
  f.nodes = grid.node_count();
  const std::size_t N = f.nodes;
  const int n = f.n;
  f.s.resize(N);
  f.c.resize(N);
  f.xi_norm.resize(N);
  f.g.resize(N);
  f.g_inv.resize(N);
  f.h.resize(N);
  f.W.resize(N);
  f.lambda.resize(N * n);
  f.H.resize(N);
  f.Hm.resize(N);
  f.F.resize(N);
  f.area_weight.resize(N);
  f.Phi.resize(N);
  const bool axisym = f.mode == GridMode::axisymmetric;
  const int mult = f.azimuthal_multiplicity();

  parallel_for(N, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double r = state.r[i];
      if (!(r > 0.0)) {
        throw NumericalAbort("radial function must stay positive (node " + std::to_string(i) +
                             ")");
      }
      const KappaTrig kt = kappa_trig(r, params.ac);
      const double s = kt.s;
      const double c = kt.c;
      const Vec2& p = d.Dr[i];
      const Mat2& D = d.D2r[i];
      const double xi2 = s * s + p.squaredNorm();
      const double xi = std::sqrt(xi2);

      const Mat2 ppT = p * p.transpose();
      const Mat2 g = ppT + s * s * Mat2::Identity();
      const Mat2 g_inv = (Mat2::Identity() - ppT / xi2) / (s * s);
      const Mat2 h = -(s * D - s * s * c * Mat2::Identity() - 2.0 * c * ppT) / xi;
      const Mat2 W = g_inv * h;

      double* lam = f.lambda.data() + i * n;
      if (axisym) {
        lam[0] = W(0, 0);
        for (int a = 1; a < n; ++a) lam[a] = W(1, 1);
      } else {
        const double half_tr = 0.5 * W.trace();
        const double half_diff = 0.5 * (W(0, 0) - W(1, 1));
        const double disc = std::max(0.0, half_diff * half_diff + W(0, 1) * W(1, 0));
        lam[0] = half_tr - std::sqrt(disc);
        lam[1] = half_tr + std::sqrt(disc);
      }
      std::sort(lam, lam + n);

      f.s[i] = s;
      f.c[i] = c;
      f.xi_norm[i] = xi;
      f.g[i] = g;
      f.g_inv[i] = g_inv;
      f.h[i] = h;
      f.W[i] = W;
      f.H[i] = W(0, 0) + mult * W(1, 1);
      const std::span<const double> lspan(lam, static_cast<std::size_t>(n));
      f.Hm[i] = mean_curvature_m(lspan, params);
      if (!(f.Hm[i] > 0.0)) {
        throw ParabolicityLost("H_m = " + std::to_string(f.Hm[i]) + " <= 0 at node " +
                                   std::to_string(i) + " (theta=" +
                                   std::to_string(grid.theta(i)) + ", phi=" +
                                   std::to_string(grid.phi(i)) + ")",
                               i, grid.theta(i), grid.phi(i));
      }
      f.F[i] = speed(lspan, params);
      f.area_weight[i] = grid.weight(i) * xi * std::pow(s, n - 1);
      f.Phi[i] = s * s / xi;
    }
  });

  f.Dr = std::move(d.Dr);
  f.D2r = std::move(d.D2r);
  return f;
}

double mean_curvature_formula(const GeometryFields& f, std::size_t i) {
  const int mult = f.azimuthal_multiplicity();
  const Vec2& p = f.Dr[i];
  const Mat2& D = f.D2r[i];
  const double xi = f.xi_norm[i];
  const double xi2 = xi * xi;
  const double laplacian = D(0, 0) + mult * D(1, 1);
  const double hess_pp = p.dot(D * p);
  return -(laplacian - hess_pp / xi2) / (xi * f.s[i]) +
         f.c[i] * (f.n + p.squaredNorm() / xi2) / xi;
}

Mat2 weingarten_closed_form(const GeometryFields& f, std::size_t i) {
  const Vec2& p = f.Dr[i];
  const Mat2& D = f.D2r[i];
  const double xi = f.xi_norm[i];
  const double xi2 = xi * xi;
  // Row index = upper index i, column = lower index j.
  const Mat2 curvature = (D - (p * (D * p).transpose()) / xi2) / f.s[i];
  const Mat2 radial = f.c[i] * (Mat2::Identity() + p * p.transpose() / xi2);
  return -(curvature - radial) / xi;
}

ChristoffelField sphere_christoffels(const GeometryFields& f) {
  const int n = f.n;
  ChristoffelField out;
  out.n = n;
  out.nodes = f.nodes;
  out.data.assign(f.nodes * n * n * n, 0.0);
  Eigen::VectorXd p(n);
  Eigen::MatrixXd D(n, n);
  for (std::size_t node = 0; node < f.nodes; ++node) {
    p.setZero();
    D.setZero();
    p[0] = f.Dr[node][0];
    if (f.mode == GridMode::axisymmetric) {
      D(0, 0) = f.D2r[node](0, 0);
      for (int a = 1; a < n; ++a) D(a, a) = f.D2r[node](1, 1);
    } else {
      p[1] = f.Dr[node][1];
      D = f.D2r[node];
    }
    const double s = f.s[node];
    const double c = f.c[node];
    const double xi2 = f.xi_norm[node] * f.xi_norm[node];
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - p * p.transpose() / xi2;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double v = 0.0;
          for (int l = 0; l < n; ++l) {
            const double bracket =
                D(i, j) * p[l] + s * c *
                                     ((l == j ? p[i] : 0.0) + (i == l ? p[j] : 0.0) -
                                      (i == j ? p[l] : 0.0));
            v += bracket * proj(k, l);
          }
          out.data[((node * n + k) * n + i) * n + j] = v / (s * s);
        }
      }
    }
  }
  return out;
}

double radial_volume_integral(double r, int n, const AmbientCurvature& ac) {
  if (!(r >= 0.0)) throw DomainError("radial_volume_integral: r must be >= 0");
  if (r == 0.0) return 0.0;
  const double a = ac.a();
  auto integrand = [&](double rho) { return std::pow(std::sinh(a * rho) / a, n); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, r, 15,
                                                                        1e-11);
}

AreaVolume area_and_volume(const GraphState& state, const FlowParams& params) {
  const GridSpec& grid = *state.grid;
  const SphericalDerivatives d = spherical_derivatives(state);
  const std::size_t N = grid.node_count();
  std::vector<double> area(N);
  std::vector<double> vol(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double s = s_kappa(state.r[i], params.ac);
    const double xi = std::sqrt(s * s + d.Dr[i].squaredNorm());
    area[i] = grid.weight(i) * xi * std::pow(s, params.n - 1);
    vol[i] = grid.weight(i) * radial_volume_integral(state.r[i], params.n, params.ac);
  }
  return {pairwise_sum(area), pairwise_sum(vol)};
}

double enclosed_volume(const GraphState& state, const FlowParams& params) {
  const GridSpec& grid = *state.grid;
  std::vector<double> vol(grid.node_count());
  for (std::size_t i = 0; i < vol.size(); ++i) {
    vol[i] = grid.weight(i) * radial_volume_integral(state.r[i], params.n, params.ac);
  }
  return pairwise_sum(vol);
}

}  // namespace horoflow
