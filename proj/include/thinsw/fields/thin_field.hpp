#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "thinsw/fields/chebyshev.hpp"
#include "thinsw/fields/spectral.hpp"

namespace thinsw {

/// Samples on the thin layer {0 <= z <= eps * depth(x)} at nodes (x_j, zeta_m)
/// with z = zeta_m * eps * depth(x_j); zeta_m are Chebyshev-Gauss-Lobatto
/// nodes of [0, 1] so m = 0 is the bottom and m = nz - 1 the top.
struct ThinField {
  Grid grid;
  double eps = 0.1;
  int nz = 8;
  HField depth;
  int components = 1;
  std::vector<std::vector<double>> values;  // [component][x_index * nz + m]

  static ThinField zeros(const Grid& g, double eps, int nz, const HField& depth, int components = 1) {
    require(eps > 0.0 && std::isfinite(eps), ErrorKind::Validation, "thin field needs eps > 0");
    require(nz >= 4, ErrorKind::Validation, "thin field needs nz >= 4");
    require(depth.grid == g, ErrorKind::Validation, "depth lives on a different grid");
    require(depth.min() > 0.0, ErrorKind::Validation, "depth must be positive");
    ThinField t;
    t.grid = g;
    t.eps = eps;
    t.nz = nz;
    t.depth = depth;
    t.components = components;
    t.values.assign(components, std::vector<double>(g.size() * nz, 0.0));
    return t;
  }

  /// Flat strip X x (0, eps).
  static ThinField flat(const Grid& g, double eps, int nz, int components = 1) {
    return zeros(g, eps, nz, HField(g, 1.0), components);
  }

  std::vector<double> zeta() const { return cheb::nodes(nz); }
  double height(std::size_t x_index, int m, const std::vector<double>& zeta_nodes) const {
    return zeta_nodes[m] * eps * depth[x_index];
  }

  double& at(int c, std::size_t x_index, int m) { return values[c][x_index * nz + m]; }
  double at(int c, std::size_t x_index, int m) const { return values[c][x_index * nz + m]; }

  ThinField component(int c) const {
    ThinField t = *this;
    t.components = 1;
    t.values = {values.at(c)};
    return t;
  }

  HField level(int c, int m) const {
    HField f(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) f[j] = at(c, j, m);
    return f;
  }
  void set_level(int c, int m, const HField& f) {
    for (std::size_t j = 0; j < grid.size(); ++j) at(c, j, m) = f[j];
  }

  double max_abs() const {
    double r = 0.0;
    for (const auto& comp : values)
      for (double v : comp) r = std::max(r, std::abs(v));
    return r;
  }
  bool finite() const {
    for (const auto& comp : values)
      for (double v : comp)
        if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Barycentric evaluation of a column at physical height z.
inline double vertical_eval(const ThinField& f, int component, std::size_t x_index, double z) {
  const double top = f.eps * f.depth[x_index];
  require(z >= -1e-14 * top && z <= top * (1.0 + 1e-14), ErrorKind::Validation,
          "height " + std::to_string(z) + " outside the layer");
  const auto zeta = f.zeta();
  const auto begin = f.values.at(component).begin() + std::ptrdiff_t(x_index * f.nz);
  std::vector<double> column(begin, begin + f.nz);
  return cheb::barycentric(zeta, column, std::clamp(z / top, 0.0, 1.0));
}

namespace detail {

inline ThinField dzeta(const ThinField& f) {
  const Eigen::MatrixXd d = cheb::diff_matrix(f.nz);
  ThinField out = f;
  for (int c = 0; c < f.components; ++c)
    for (std::size_t j = 0; j < f.grid.size(); ++j) {
      Eigen::Map<const Eigen::VectorXd> col(f.values[c].data() + j * f.nz, f.nz);
      Eigen::Map<Eigen::VectorXd> dst(out.values[c].data() + j * f.nz, f.nz);
      dst = d * col;
    }
  return out;
}

}  // namespace detail

/// Vertical derivative in the physical coordinate z.
inline ThinField thin_dz(const ThinField& f) {
  ThinField out = detail::dzeta(f);
  for (int c = 0; c < f.components; ++c)
    for (std::size_t j = 0; j < f.grid.size(); ++j) {
      const double scale = 1.0 / (f.eps * f.depth[j]);
      for (int m = 0; m < f.nz; ++m) out.at(c, j, m) *= scale;
    }
  return out;
}

/// Horizontal derivative at fixed physical height:
/// d/dx|_z = d/dx|_zeta - zeta * (depth_x / depth) * d/dzeta.
inline ThinField thin_dx(const ThinField& f, int axis) {
  ThinField out = f;
  for (int c = 0; c < f.components; ++c)
    for (int m = 0; m < f.nz; ++m) out.set_level(c, m, dx(f.level(c, m), axis));
  const HField slope = dx(f.depth, axis);
  if (slope.max_abs() == 0.0) return out;
  const ThinField dz = detail::dzeta(f);
  const auto zeta = f.zeta();
  for (int c = 0; c < f.components; ++c)
    for (std::size_t j = 0; j < f.grid.size(); ++j) {
      const double r = slope[j] / f.depth[j];
      for (int m = 0; m < f.nz; ++m) out.at(c, j, m) -= zeta[m] * r * dz.at(c, j, m);
    }
  return out;
}

/// Quadrature of a pointwise functional over the layer: trapezoid in x times
/// Clenshaw-Curtis in zeta with Jacobian eps * depth(x).
template <class Fn>
double thin_integral(const ThinField& f, Fn&& integrand) {
  const auto w = cheb::clenshaw_curtis(f.nz);
  double acc = 0.0;
  for (std::size_t j = 0; j < f.grid.size(); ++j) {
    double col = 0.0;
    for (int m = 0; m < f.nz; ++m) col += w[m] * integrand(j, m);
    acc += col * f.eps * f.depth[j];
  }
  return acc * f.grid.cell_volume();
}

}  // namespace thinsw
