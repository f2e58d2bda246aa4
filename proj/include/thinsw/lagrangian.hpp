#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "thinsw/shallow_water.hpp"

namespace thinsw {

/// Zeroth-order Lagrangian chart: dX0/dt = u0(X0), dZ0/dt = -Z0 div u0(X0),
/// on material nodes x0 (grid nodes) and levels z0 (Chebyshev nodes of [0, eps]).
/// X0 is stored per x0 only, unwrapped.
struct Chart {
  Grid grid;
  double eps = 0.1;
  std::vector<double> z0;
  std::vector<double> times;
  std::vector<HVec> X;                   // [time][axis]
  std::vector<std::vector<HField>> Z;    // [time][level]
  double dt = 0.0;

  int levels() const { return int(z0.size()); }
  /// Periodic displacement X0 - x0 along `axis`.
  HField displacement(std::size_t time_index, int axis) const {
    HField d = X[time_index][axis];
    for (std::size_t j = 0; j < d.size(); ++j) d[j] -= d.point(j)[axis];
    return d;
  }
  Point position(std::size_t time_index, std::size_t node) const {
    Point p{0.0, 0.0};
    for (int a = 0; a < grid.dim; ++a) p[a] = X[time_index][a][node];
    return p;
  }
};

namespace detail {

/// Velocity field and its divergence at a time inside [t_n, t_n + dt] by cubic
/// Hermite interpolation of the stored states and rates; s = (t - t_n)/dt.
struct FlowSnapshot {
  std::vector<Spectrum> u;
  Spectrum div;
};

inline FlowSnapshot hermite_snapshot(const SWTrajectory& tr, std::size_t n, double s) {
  const double dt = tr.stored_dt();
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  HVec u;
  for (std::size_t a = 0; a < tr.states[n].u0.size(); ++a) {
    if (s == 0.0) {
      u.push_back(tr.states[n].u0[a]);
    } else if (s == 1.0) {
      u.push_back(tr.states[n + 1].u0[a]);
    } else {
      u.push_back(h00 * tr.states[n].u0[a] + (h10 * dt) * tr.rates[n].du0[a] + h01 * tr.states[n + 1].u0[a] +
                  (h11 * dt) * tr.rates[n + 1].du0[a]);
    }
  }
  FlowSnapshot snap;
  for (const auto& c : u) snap.u.push_back(spectrum(c));
  snap.div = spectrum(divergence(u));
  return snap;
}

}  // namespace detail

/// Carries points (X, R = Z0/z0) along the stored trajectory with RK4 at the stored
/// step; velocities between stored states come from cubic Hermite interpolation,
/// off-grid values from trigonometric interpolation. `record` sees every step.
template <class Record>
void transport(const SWTrajectory& tr, HVec& X, HField& R, Record&& record) {
  require(tr.states.size() >= 1 && tr.rates.size() == tr.states.size(), ErrorKind::Validation,
          "trajectory needs states with rates");
  const int dim = tr.states.front().grid().dim;
  require(int(X.size()) == dim && X[0].size() == R.size(), ErrorKind::Validation, "transport point shape mismatch");
  record(tr.states.front().t, X, R);
  const double dt = tr.stored_dt();
  for (std::size_t n = 0; n + 1 < tr.states.size(); ++n) {
    const detail::FlowSnapshot s0 = detail::hermite_snapshot(tr, n, 0.0);
    const detail::FlowSnapshot sh = detail::hermite_snapshot(tr, n, 0.5);
    const detail::FlowSnapshot s1 = detail::hermite_snapshot(tr, n, 1.0);
    using Vec = std::array<double, 3>;  // X components then R
    auto f = [&](const detail::FlowSnapshot& snap, const Vec& y) {
      const Point p{y[0], dim == 2 ? y[1] : 0.0};
      Vec out{0.0, 0.0, 0.0};
      for (int a = 0; a < dim; ++a) out[a] = interpolate(snap.u[a], p);
      out[2] = -y[2] * interpolate(snap.div, p);
      return out;
    };
    auto axpy = [](const Vec& y, double h, const Vec& k) {
      return Vec{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]};
    };
    for (std::size_t j = 0; j < R.size(); ++j) {
      const Vec y{X[0][j], dim == 2 ? X[1][j] : 0.0, R[j]};
      const Vec k1 = f(s0, y);
      const Vec k2 = f(sh, axpy(y, 0.5 * dt, k1));
      const Vec k3 = f(sh, axpy(y, 0.5 * dt, k2));
      const Vec k4 = f(s1, axpy(y, dt, k3));
      Vec next;
      for (int q = 0; q < 3; ++q) next[q] = y[q] + dt / 6.0 * (k1[q] + 2 * k2[q] + 2 * k3[q] + k4[q]);
      if (!std::isfinite(next[0]) || !std::isfinite(next[1]) || !std::isfinite(next[2]))
        throw Error(ErrorKind::Blowup, "chart integration produced a non-finite value", tr.states[n + 1].t);
      for (int a = 0; a < dim; ++a) X[a][j] = next[a];
      R[j] = next[2];
    }
    record(tr.states[n + 1].t, X, R);
  }
}

/// Chart started from the identity at the first stored state.
inline Chart integrate_chart(const SWTrajectory& tr, double eps, int nz) {
  require(eps > 0.0 && nz >= 2, ErrorKind::Validation, "chart needs eps > 0 and nz >= 2");
  require(!tr.states.empty(), ErrorKind::Validation, "empty trajectory");
  const Grid g = tr.states.front().grid();
  Chart c;
  c.grid = g;
  c.eps = eps;
  c.dt = tr.stored_dt();
  for (double z : cheb::nodes(nz)) c.z0.push_back(eps * z);
  HVec X;
  for (int a = 0; a < g.dim; ++a) X.push_back(HField::from_function(g, [&](Point p) { return p[a]; }));
  HField R(g, 1.0);
  transport(tr, X, R, [&](double t, const HVec& Xn, const HField& Rn) {
    c.times.push_back(t);
    c.X.push_back(Xn);
    std::vector<HField> levels;
    for (double z : c.z0) levels.push_back(z * Rn);
    c.Z.push_back(std::move(levels));
  });
  return c;
}

namespace detail {

/// d X0 / d x0 per node, from spectral derivatives of the displacement.
inline std::vector<Eigen::MatrixXd> flow_gradient(const Chart& c, std::size_t k) {
  const int dim = c.grid.dim;
  std::vector<std::vector<HField>> d(dim);
  for (int a = 0; a < dim; ++a) {
    const HField disp = c.displacement(k, a);
    for (int b = 0; b < dim; ++b) d[a].push_back(dx(disp, b));
  }
  std::vector<Eigen::MatrixXd> out(c.grid.size(), Eigen::MatrixXd::Identity(dim, dim));
  for (std::size_t j = 0; j < c.grid.size(); ++j)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) out[j](a, b) += d[a][b][j];
  return out;
}

}  // namespace detail

/// Sup residuals of Z0 = z0 h0(t, X0) / h0(0, x0) and det(dX0/dx0) h0(t, X0) = h0(0, x0).
/// With a flat initial layer (h0(0) = 1) these are the identities of the chart as
/// usually stated.
struct ChartIdentityReport {
  double z_abs = 0.0;   // sup |Z0 - z0 h0(t,X0)/h0(0,x0)|
  double z_rel = 0.0;   // same divided by z0, over z0 > 0
  double det_abs = 0.0; // sup |det(dX0/dx0) h0(t,X0)/h0(0,x0) - 1|
  double z_abs_literal = 0.0;    // sup |Z0 - z0 h0(t,X0)|
  double det_abs_literal = 0.0;  // sup |det(dX0/dx0) h0(t,X0) - 1|
  bool flat_start = false;       // h0(0) == 1, where both forms coincide
  std::vector<double> z_rel_series, det_series;  // per chart time
};

inline ChartIdentityReport chart_identities(const Chart& c, const SWTrajectory& tr) {
  require(tr.states.size() == c.times.size(), ErrorKind::Validation, "chart and trajectory times differ");
  ChartIdentityReport rep;
  const HField& h_init = tr.states.front().h0;
  rep.flat_start = std::all_of(h_init.values.begin(), h_init.values.end(), [](double v) { return v == 1.0; });
  for (std::size_t k = 0; k < c.times.size(); ++k) {
    require(std::abs(tr.states[k].t - c.times[k]) <= 1e-12 * std::max(1.0, c.times[k]), ErrorKind::Validation,
            "chart and trajectory times differ");
    const Spectrum hs = spectrum(tr.states[k].h0);
    const auto grad = detail::flow_gradient(c, k);
    double zr = 0.0, dr = 0.0;
    for (std::size_t j = 0; j < c.grid.size(); ++j) {
      const double hX = interpolate(hs, c.position(k, j));
      const double hx = hX / h_init[j];
      const double det = grad[j].determinant();
      for (int m = 0; m < c.levels(); ++m) {
        const double e = std::abs(c.Z[k][m][j] - c.z0[m] * hx);
        rep.z_abs = std::max(rep.z_abs, e);
        rep.z_abs_literal = std::max(rep.z_abs_literal, std::abs(c.Z[k][m][j] - c.z0[m] * hX));
        if (c.z0[m] > 0.0) zr = std::max(zr, e / c.z0[m]);
      }
      dr = std::max(dr, std::abs(det * hx - 1.0));
      rep.det_abs_literal = std::max(rep.det_abs_literal, std::abs(det * hX - 1.0));
    }
    rep.z_rel = std::max(rep.z_rel, zr);
    rep.det_abs = std::max(rep.det_abs, dr);
    rep.z_rel_series.push_back(zr);
    rep.det_series.push_back(dr);
  }
  return rep;
}

/// Per node and level (node-major, level fastest) Jacobian
/// A = [[dX/dx0, dX/dz0], [(grad_x0 Z)^T, dZ/dz0]] with dX0/dz0 = 0.
struct JacobianField {
  int nodes = 0, levels = 0;
  std::vector<Eigen::MatrixXd> A;
  std::vector<double> det;
  const Eigen::MatrixXd& at(std::size_t node, int level) const { return A[node * levels + level]; }
};

inline JacobianField jacobian(const Chart& c, std::size_t time_index) {
  require(time_index < c.times.size(), ErrorKind::Validation, "time index outside the chart");
  const int dim = c.grid.dim;
  const auto grad = detail::flow_gradient(c, time_index);
  const Eigen::MatrixXd dz = cheb::diff_matrix(c.levels()) * (1.0 / c.eps);
  std::vector<HVec> gz;  // [level][axis]
  for (const auto& lev : c.Z[time_index]) gz.push_back(gradient(lev));
  JacobianField J;
  J.nodes = int(c.grid.size());
  J.levels = c.levels();
  for (std::size_t j = 0; j < c.grid.size(); ++j) {
    Eigen::VectorXd col(c.levels());
    for (int m = 0; m < c.levels(); ++m) col[m] = c.Z[time_index][m][j];
    const Eigen::VectorXd dzdz0 = dz * col;
    for (int m = 0; m < c.levels(); ++m) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
      A.topLeftCorner(dim, dim) = grad[j];
      for (int b = 0; b < dim; ++b) A(dim, b) = gz[m][b][j];
      A(dim, dim) = dzdz0[m];
      const double d = A.determinant();
      if (!(d > 0.0))
        throw Error(ErrorKind::DegenerateChart, "det A <= 0 at node " + std::to_string(j), c.times[time_index]);
      J.A.push_back(std::move(A));
      J.det.push_back(d);
    }
  }
  return J;
}

namespace detail {

/// Inverse by the adjugate formula for 2x2 and 3x3 matrices.
inline Eigen::MatrixXd direct_inverse(const Eigen::MatrixXd& A) {
  const double d = A.determinant();
  Eigen::MatrixXd inv(A.rows(), A.cols());
  if (A.rows() == 2) {
    inv << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
  } else {
    require(A.rows() == 3, ErrorKind::Unsupported, "only 2x2 and 3x3 Jacobians");
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        inv(i, j) = A(r0, c0) * A(r1, c1) - A(r0, c1) * A(r1, c0);
      }
  }
  return inv / d;
}

}  // namespace detail

inline constexpr double kIllConditioned = 1e8;

struct DeformationResult {
  std::vector<Eigen::MatrixXd> P;
  std::vector<std::size_t> ill_conditioned;  // indices with cond(A) > 1e8
};

/// P = G A^{-1} A^{-T} + A^{-T} G^T A^{-T} per node.
inline DeformationResult transformed_deformation(const std::vector<Eigen::MatrixXd>& gradU,
                                                 const std::vector<Eigen::MatrixXd>& A) {
  require(gradU.size() == A.size(), ErrorKind::Validation, "gradient and Jacobian counts differ");
  DeformationResult out;
  for (std::size_t i = 0; i < A.size(); ++i) {
    require(A[i].determinant() > 0.0, ErrorKind::DegenerateChart, "det A <= 0");
    const Eigen::MatrixXd inv = detail::direct_inverse(A[i]);
    const Eigen::MatrixXd invT = inv.transpose();
    out.P.push_back(gradU[i] * inv * invT + invT * gradU[i].transpose() * invT);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A[i]);
    const auto& sv = svd.singularValues();
    if (sv(0) / sv(sv.size() - 1) > kIllConditioned) out.ill_conditioned.push_back(i);
  }
  return out;
}

/// f(x, z) = sum_q a_q(x) z^q with a_q(x) = c_q sin(k.x + phase); exact derivatives.
struct ChainTestField {
  std::array<double, 2> k{1.0, 0.0};
  double phase = 0.3;
  std::vector<double> coef{1.0, 0.5, -2.0};

  double value(Point x, double z) const {
    const double s = std::sin(k[0] * x[0] + k[1] * x[1] + phase);
    double p = 0.0;
    for (std::size_t q = coef.size(); q-- > 0;) p = p * z + coef[q];
    return s * p;
  }
  /// (d/dx_0, d/dx_1 [2D only], d/dz)
  Eigen::VectorXd gradient(Point x, double z, int dim) const {
    const double arg = k[0] * x[0] + k[1] * x[1] + phase;
    double p = 0.0, dp = 0.0;
    for (std::size_t q = coef.size(); q-- > 0;) {
      dp = dp * z + p;
      p = p * z + coef[q];
    }
    Eigen::VectorXd g(dim + 1);
    for (int a = 0; a < dim; ++a) g[a] = k[a] * std::cos(arg) * p;
    g[dim] = std::sin(arg) * dp;
    return g;
  }
};

/// sup over nodes of |(grad_x0, d_z0)(f o Phi) - A^T (grad f)(Phi)|, the left side by
/// spectral (x0) and Chebyshev (z0) differentiation of the composed samples.
inline double chain_rule_check(const Chart& c, std::size_t time_index, const ChainTestField& f) {
  const int dim = c.grid.dim;
  const JacobianField J = jacobian(c, time_index);
  std::vector<HField> comp;
  for (int m = 0; m < c.levels(); ++m) {
    HField v(c.grid);
    for (std::size_t j = 0; j < c.grid.size(); ++j) v[j] = f.value(c.position(time_index, j), c.Z[time_index][m][j]);
    comp.push_back(std::move(v));
  }
  std::vector<HVec> gx;
  for (const auto& v : comp) gx.push_back(gradient(v));
  const Eigen::MatrixXd dz = cheb::diff_matrix(c.levels()) * (1.0 / c.eps);
  double err = 0.0;
  for (std::size_t j = 0; j < c.grid.size(); ++j) {
    Eigen::VectorXd col(c.levels());
    for (int m = 0; m < c.levels(); ++m) col[m] = comp[m][j];
    const Eigen::VectorXd fz = dz * col;
    for (int m = 0; m < c.levels(); ++m) {
      Eigen::VectorXd lhs(dim + 1);
      for (int a = 0; a < dim; ++a) lhs[a] = gx[m][a][j];
      lhs[dim] = fz[m];
      const Eigen::VectorXd rhs = J.at(j, m).transpose() * f.gradient(c.position(time_index, j), c.Z[time_index][m][j], dim);
      err = std::max(err, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return err;
}

/// Surface condition (P - p Id) n at z0 = eps with n = (-(dX/dx0)^{-T} grad_x0 Z, 1).
inline Eigen::VectorXd lagrangian_surface_stress(const Eigen::MatrixXd& P, double p, const Eigen::MatrixXd& dXdx0,
                                                 const Eigen::VectorXd& grad_x0_Z) {
  const int dim = int(dXdx0.rows());
  require(P.rows() == dim + 1 && grad_x0_Z.size() == dim, ErrorKind::Validation, "surface stress shape mismatch");
  Eigen::VectorXd n(dim + 1);
  n.head(dim) = -(detail::direct_inverse(dXdx0).transpose() * grad_x0_Z);
  n[dim] = 1.0;
  return (P - p * Eigen::MatrixXd::Identity(dim + 1, dim + 1)) * n;
}

struct LagrangianSlip {
  double vertical = 0.0;   // u_V at z0 = 0
  Eigen::VectorXd slip;    // det(dX/dx0) d_z0 u_H - eps gamma_bar u_H at z0 = 0
};

inline LagrangianSlip lagrangian_bottom_slip(const Eigen::MatrixXd& dXdx0, const Eigen::VectorXd& dz0_uH,
                                             const Eigen::VectorXd& uH, double uV, double eps, double gamma_bar) {
  require(dz0_uH.size() == uH.size() && dXdx0.rows() == uH.size(), ErrorKind::Validation, "bottom slip shape mismatch");
  return {uV, dXdx0.determinant() * dz0_uH - eps * gamma_bar * uH};
}

}  // namespace thinsw
