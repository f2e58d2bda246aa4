#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "thinsw/fields/norms.hpp"
#include "thinsw/fields/thin_field.hpp"

namespace thinsw {

inline constexpr double kEllipticResidualTol = 1e-10;

/// Vertical profile of one horizontal mode on [0, eps].
struct ModeProfile {
  double k = 0.0, eps = 0.0;
  std::vector<double> z;         // Chebyshev nodes of [0, eps], ascending
  std::vector<double> numeric;   // collocation solution
  std::vector<double> analytic;  // closed form
  double sup_error = 0.0;
  double residual = 0.0;         // backward error of the collocation solve
  double energy = 0.0;           // int_0^eps p'^2 + k^2 p^2
  double ratio = 0.0;
};

namespace detail {

/// -p'' + M^2 p = 0 on zeta in [0, 1] with one Dirichlet and one Neumann row.
/// dirichlet_top: p(1) = value, p'(0) = 0; otherwise p(1) = 0, p'(0) = value (in zeta units).
inline ModeProfile solve_mode(double k, double eps, int nz, bool dirichlet_top, double value) {
  require(k > 0.0 && std::isfinite(k), ErrorKind::Validation, "mode solve needs k != 0");
  require(eps > 0.0 && std::isfinite(eps), ErrorKind::Validation, "mode solve needs eps > 0");
  require(nz >= 4, ErrorKind::Validation, "mode solve needs nz >= 4");
  const double M = k * eps;
  const Eigen::MatrixXd D = cheb::diff_matrix(nz);
  const Eigen::MatrixXd D2 = D * D;
  Eigen::MatrixXd A = -D2 + M * M * Eigen::MatrixXd::Identity(nz, nz);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nz);
  A.row(nz - 1).setZero();
  A(nz - 1, nz - 1) = 1.0;
  A.row(0) = D.row(0);
  if (dirichlet_top) {
    rhs[nz - 1] = value;
  } else {
    rhs[0] = value * eps;
  }
  const Eigen::VectorXd p = A.partialPivLu().solve(rhs);
  const double scale = A.cwiseAbs().rowwise().sum().maxCoeff() * p.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();
  ModeProfile out;
  out.k = k;
  out.eps = eps;
  out.residual = scale > 0.0 ? (A * p - rhs).cwiseAbs().maxCoeff() / scale : 0.0;
  if (out.residual > kEllipticResidualTol) throw Error(ErrorKind::Solver, "mode collocation residual too large");
  const auto zeta = cheb::nodes(nz);
  const auto w = cheb::clenshaw_curtis(nz);
  const Eigen::VectorXd dp = D * p / eps;
  for (int m = 0; m < nz; ++m) {
    out.z.push_back(eps * zeta[m]);
    out.numeric.push_back(p[m]);
    out.energy += eps * w[m] * (dp[m] * dp[m] + k * k * p[m] * p[m]);
  }
  return out;
}

}  // namespace detail

/// -p'' + k^2 p = 0, p(eps) = h, p'(0) = 0; closed form h cosh(kz)/cosh(k eps).
/// ratio = energy / (k h^2), which equals tanh(k eps).
inline ModeProfile mode_pressure_dirichlet_top(double k, double eps, double h, int nz = 24) {
  ModeProfile out = detail::solve_mode(std::abs(k), eps, nz, true, h);
  const double ak = std::abs(k), M = ak * eps;
  for (double z : out.z) {
    // cosh(kz)/cosh(M) without overflow
    const double r = (std::exp(ak * z - M) + std::exp(-ak * z - M)) / (1.0 + std::exp(-2.0 * M));
    out.analytic.push_back(h * r);
  }
  for (std::size_t m = 0; m < out.z.size(); ++m)
    out.sup_error = std::max(out.sup_error, std::abs(out.numeric[m] - out.analytic[m]));
  out.ratio = h != 0.0 ? out.energy / (ak * h * h) : 0.0;
  return out;
}

/// -p'' + k^2 p = 0, p(eps) = 0, p'(0) = g; closed form -g sinh(k(eps - z))/(k cosh(k eps)).
/// ratio = energy / (eps g^2), the energy per unit thickness, equal to tanh(M)/M.
inline ModeProfile mode_pressure_neumann_bottom(double k, double eps, double g, int nz = 24) {
  ModeProfile out = detail::solve_mode(std::abs(k), eps, nz, false, g);
  const double ak = std::abs(k), M = ak * eps;
  for (double z : out.z) {
    const double r = (std::exp(ak * (eps - z) - M) - std::exp(-ak * (eps - z) - M)) / (1.0 + std::exp(-2.0 * M));
    out.analytic.push_back(-g * r / ak);
  }
  for (std::size_t m = 0; m < out.z.size(); ++m)
    out.sup_error = std::max(out.sup_error, std::abs(out.numeric[m] - out.analytic[m]));
  out.ratio = g != 0.0 ? out.energy / (eps * g * g) : 0.0;
  return out;
}

struct LiftResult {
  ThinField phi;
  double projected = 0.0;  // sup of the incompatible vertical mean removed from the k = 0 mode
  double residual = 0.0;   // backward error |r| / (|A||phi| + |b|), worst over modes
  double grad_ratio = 0.0; // |grad phi| / |h|
  double h2_ratio = 0.0;   // |phi|_{H^2} / |h|
};

/// Delta phi = h on the flat strip X x (0, eps) with d_z phi = 0 at z = 0 and z = eps,
/// mode by mode in x with a Chebyshev solve in z. phi has zero mean.
inline LiftResult divergence_lift(const ThinField& h) {
  require(h.components == 1, ErrorKind::Validation, "divergence lift needs a scalar field");
  for (double d : h.depth.values)
    require(d == 1.0, ErrorKind::Unsupported, "divergence lift is posed on the flat strip");
  const int nz = h.nz;
  const double eps = h.eps;
  const Grid& g = h.grid;
  const Eigen::MatrixXd D = cheb::diff_matrix(nz);
  const Eigen::MatrixXd D2 = D * D;
  const auto w = cheb::clenshaw_curtis(nz);

  std::vector<Spectrum> levels;
  for (int m = 0; m < nz; ++m) levels.push_back(spectrum(h.level(0, m)));
  std::vector<Spectrum> out = levels;

  LiftResult res;
  double scale_max = 0.0, res_max = 0.0;
  for_each_mode(g, [&](std::size_t idx, std::array<int, 2> mode, double) {
    const double kx = g.wavenumber(mode[0]), ky = g.dim == 2 ? g.wavenumber(mode[1]) : 0.0;
    const double M2 = (kx * kx + ky * ky) * eps * eps;
    Eigen::VectorXcd rhs(nz);
    for (int m = 0; m < nz; ++m) rhs[m] = levels[m].coef[idx] * (eps * eps);
    Eigen::MatrixXd A = D2 - M2 * Eigen::MatrixXd::Identity(nz, nz);
    const bool zero_mode = M2 == 0.0;
    if (zero_mode) {
      std::complex<double> mean = 0.0;
      for (int m = 0; m < nz; ++m) mean += w[m] * rhs[m];
      res.projected = std::max(res.projected, std::abs(mean) / (eps * eps));
      for (int m = 0; m < nz; ++m) rhs[m] -= mean;
    }
    // Neumann rows replace the end-point equations.
    A.row(0) = D.row(0);
    A.row(nz - 1) = D.row(nz - 1);
    rhs[0] = rhs[nz - 1] = 0.0;
    Eigen::VectorXcd phi;
    if (zero_mode) {
      Eigen::MatrixXd Aug(nz + 1, nz);
      Aug.topRows(nz) = A;
      for (int m = 0; m < nz; ++m) Aug(nz, m) = w[m];
      Eigen::VectorXcd r2(nz + 1);
      r2.head(nz) = rhs;
      r2[nz] = 0.0;
      const auto qr = Aug.colPivHouseholderQr();
      phi = Eigen::VectorXcd(nz);
      phi.real() = qr.solve(r2.real());
      phi.imag() = qr.solve(r2.imag());
      scale_max = std::max(scale_max, Aug.cwiseAbs().rowwise().sum().maxCoeff() * phi.cwiseAbs().maxCoeff() + r2.cwiseAbs().maxCoeff());
      res_max = std::max(res_max, (Aug.cast<std::complex<double>>() * phi - r2).cwiseAbs().maxCoeff());
    } else {
      const auto lu = A.partialPivLu();
      phi = Eigen::VectorXcd(nz);
      phi.real() = lu.solve(Eigen::VectorXd(rhs.real()));
      phi.imag() = lu.solve(Eigen::VectorXd(rhs.imag()));
      scale_max = std::max(scale_max, A.cwiseAbs().rowwise().sum().maxCoeff() * phi.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff());
      res_max = std::max(res_max, (A.cast<std::complex<double>>() * phi - rhs).cwiseAbs().maxCoeff());
    }
    for (int m = 0; m < nz; ++m) out[m].coef[idx] = phi[m];
  });
  res.residual = scale_max > 0.0 ? res_max / scale_max : 0.0;
  if (res.residual > kEllipticResidualTol) throw Error(ErrorKind::Solver, "divergence lift residual too large");

  res.phi = ThinField::flat(g, eps, nz);
  for (int m = 0; m < nz; ++m) res.phi.set_level(0, m, field(out[m]));
  const double hn = norm(h, NormKind::l2(NormKind::Domain::Thin));
  if (hn > 0.0) {
    double grad2 = 0.0;
    for (int a = 0; a < g.dim; ++a) grad2 += std::pow(norm(thin_dx(res.phi, a), NormKind::l2(NormKind::Domain::Thin)), 2);
    grad2 += std::pow(norm(thin_dz(res.phi), NormKind::l2(NormKind::Domain::Thin)), 2);
    res.grad_ratio = std::sqrt(grad2) / hn;
    res.h2_ratio = norm(res.phi, NormKind::hk(2, NormKind::Domain::Thin)) / hn;
  }
  return res;
}

}  // namespace thinsw
