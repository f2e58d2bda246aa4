#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "thinsw/errors.hpp"

namespace thinsw::cheb {

/// Chebyshev-Gauss-Lobatto nodes on [0, 1], ascending, nodes[0] = 0.
inline std::vector<double> nodes(int nz) {
  require(nz >= 2, ErrorKind::Validation, "need at least two Chebyshev nodes");
  std::vector<double> z(nz);
  for (int m = 0; m < nz; ++m) {
    const double s = std::sin(std::numbers::pi * m / (2.0 * (nz - 1)));
    z[m] = s * s;
  }
  return z;
}

/// Differentiation matrix on the nodes of `nodes(nz)`.
inline Eigen::MatrixXd diff_matrix(int nz) {
  const int n = nz - 1;
  Eigen::VectorXd x(nz), c(nz);
  for (int j = 0; j < nz; ++j) {
    x[j] = std::cos(std::numbers::pi * j / n);  // descending on [-1, 1]
    c[j] = ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nz, nz);
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j)
      if (i != j) d(i, j) = (c[i] / c[j]) / (x[i] - x[j]);
  for (int i = 0; i < nz; ++i) d(i, i) = -d.row(i).sum();
  // zeta = (1 - x) / 2, so d/dzeta = -2 d/dx
  return -2.0 * d;
}

/// Clenshaw-Curtis weights for the nodes of `nodes(nz)` on [0, 1]. Exact for
/// polynomials of degree <= nz - 1.
inline std::vector<double> clenshaw_curtis(int nz) {
  const int n = nz - 1;
  std::vector<double> w(nz, 0.0);
  std::vector<double> theta(nz);
  for (int k = 0; k <= n; ++k) theta[k] = std::numbers::pi * k / n;
  if (n % 2 == 0) {
    w[0] = w[n] = 1.0 / (n * n - 1.0);
    for (int k = 1; k < n; ++k) {
      double v = 1.0;
      for (int j = 1; j < n / 2; ++j) v -= 2.0 * std::cos(2.0 * j * theta[k]) / (4.0 * j * j - 1.0);
      v -= std::cos(n * theta[k]) / (n * n - 1.0);
      w[k] = 2.0 * v / n;
    }
  } else {
    w[0] = w[n] = 1.0 / double(n * n);
    for (int k = 1; k < n; ++k) {
      double v = 1.0;
      for (int j = 1; j <= (n - 1) / 2; ++j) v -= 2.0 * std::cos(2.0 * j * theta[k]) / (4.0 * j * j - 1.0);
      w[k] = 2.0 * v / n;
    }
  }
  for (double& x : w) x *= 0.5;
  return w;
}

/// Barycentric interpolation through values sampled at `nodes(values.size())`.
inline double barycentric(std::span<const double> zeta, std::span<const double> values, double t) {
  const int nz = static_cast<int>(zeta.size());
  double num = 0.0, den = 0.0;
  for (int m = 0; m < nz; ++m) {
    const double diff = t - zeta[m];
    if (diff == 0.0) return values[m];
    double w = (m % 2) ? -1.0 : 1.0;
    if (m == 0 || m == nz - 1) w *= 0.5;
    num += w * values[m] / diff;
    den += w / diff;
  }
  return num / den;
}

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [a, b] (Newton iteration on P_n).
inline Quadrature gauss_legendre(int n, double a = -1.0, double b = 1.0) {
  require(n >= 1, ErrorKind::Validation, "Gauss-Legendre rule needs at least one node");
  Quadrature q{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {  // recompute derivative at the converged root
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = q.weights[n - 1 - i] = w;
  }
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = mid + half * q.nodes[i];
    q.weights[i] *= half;
  }
  return q;
}

}  // namespace thinsw::cheb
