#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "thinsw/errors.hpp"
#include "thinsw/fields/chebyshev.hpp"
#include "thinsw/parallel.hpp"

namespace thinsw {

/// Unit direction k/|k| = (c, s).
struct Direction {
  double c = 1.0, s = 0.0;
  void validate() const {
    require(std::isfinite(c) && std::isfinite(s) && std::abs(c * c + s * s - 1.0) <= 1e-12, ErrorKind::Validation,
            "direction must be a unit vector");
  }
};

/// U, U', U'' of a member of the six-dimensional solution space.
struct KornValue {
  Eigen::Vector2d U = Eigen::Vector2d::Zero(), dU = Eigen::Vector2d::Zero(), ddU = Eigen::Vector2d::Zero();
};

/// U(z) = (-c,s)(a1 z + b1 sinh z + c1 (cosh z - 1)) + (s,c)(a2 sinh z + b2 z sinh z + c2 z cosh z)
/// with coeffs = (a1, b1, c1, a2, b2, c2).
inline KornValue korn_basis_eval(double M, Direction sigma, const std::array<double, 6>& coeffs, double z) {
  sigma.validate();
  require(M > 0.0 && z >= 0.0 && z <= M * (1.0 + 1e-14), ErrorKind::Validation, "korn basis: z outside [0, M]");
  for (double v : coeffs) require(std::isfinite(v), ErrorKind::Validation, "korn basis: non-finite coefficient");
  const auto [a1, b1, c1, a2, b2, c2] = coeffs;
  const double sh = std::sinh(z), ch = std::cosh(z);
  const double g = a1 * z + b1 * sh + c1 * (ch - 1.0);
  const double dg = a1 + b1 * ch + c1 * sh;
  const double ddg = b1 * sh + c1 * ch;
  const double f = a2 * sh + b2 * z * sh + c2 * z * ch;
  const double df = a2 * ch + b2 * (sh + z * ch) + c2 * (ch + z * sh);
  const double ddf = a2 * sh + b2 * (2.0 * ch + z * sh) + c2 * (2.0 * sh + z * ch);
  const Eigen::Vector2d e1(-sigma.c, sigma.s), e2(sigma.s, sigma.c);
  return {g * e1 + f * e2, dg * e1 + df * e2, ddg * e1 + ddf * e2};
}

namespace detail {

/// Scalar profile with its first two derivatives.
struct Profile {
  double v = 0.0, d = 0.0, dd = 0.0;
};

/// sinh z - z and z cosh z - sinh z without cancellation near 0.
inline double sinh_minus_id(double z) {
  if (std::abs(z) > 0.5) return std::sinh(z) - z;
  double term = z * z * z / 6.0, acc = 0.0;
  for (int n = 1; n < 12; ++n) {
    acc += term;
    term *= z * z / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
  }
  return acc;
}

inline double zcosh_minus_sinh(double z) {
  if (std::abs(z) > 0.5) return z * std::cosh(z) - std::sinh(z);
  // sum_{n>=1} 2n z^{2n+1} / (2n+1)!
  double pw = z * z * z / 6.0, acc = 0.0;  // z^{2n+1}/(2n+1)!
  for (int n = 1; n < 12; ++n) {
    acc += 2.0 * n * pw;
    pw *= z * z / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
  }
  return acc;
}

/// Regime-adapted basis of the same space: entries 0..2 multiply (-c,s), 3..5 multiply (s,c).
/// For M <= 2 the small-z parts are cancellation free; for M > 2 every function is bounded by
/// O(1) on [0, M] so no entry overflows or swamps the others.
inline std::array<Profile, 6> conditioned_basis(double M, double z) {
  std::array<Profile, 6> b;
  const double sh = std::sinh(z), ch = std::cosh(z);
  if (M <= 2.0) {
    b[0] = {z, 1.0, 0.0};
    b[1] = {sinh_minus_id(z), 2.0 * std::pow(std::sinh(0.5 * z), 2), sh};
    b[2] = {2.0 * std::pow(std::sinh(0.5 * z), 2), sh, ch};
    b[3] = {sh, ch, sh};
    b[4] = {z * sh, sh + z * ch, 2.0 * ch + z * sh};
    b[5] = {zcosh_minus_sinh(z), z * sh, sh + z * ch};
  } else {
    const double ep = std::exp(z - M), em = std::exp(-z), eM = std::exp(-M);
    b[0] = {z / M, 1.0 / M, 0.0};
    b[1] = {ep - eM, ep, ep};
    b[2] = {1.0 - em, em, -em};
    const double emM = std::exp(-z - M);
    b[3] = {ep - emM, ep + emM, ep - emM};
    b[4] = {z / M * ep, (1.0 + z) / M * ep, (2.0 + z) / M * ep};
    b[5] = {z * em, (1.0 - z) * em, (z - 2.0) * em};
  }
  return b;
}

/// Rows are the linear features whose squares integrate to Q1 (first six) and Q2 (last six).
inline Eigen::Matrix<double, 12, 6> korn_features(double M, Direction d, double z) {
  const auto b = conditioned_basis(M, z);
  Eigen::Matrix<double, 12, 6> F;
  const double c = d.c, s = d.s, r2 = std::sqrt(2.0);
  for (int i = 0; i < 6; ++i) {
    const double e0 = i < 3 ? -c : s, e1 = i < 3 ? s : c;
    const double U1 = e0 * b[i].v, U2 = e1 * b[i].v;
    const double dU1 = e0 * b[i].d, dU2 = e1 * b[i].d;
    const double ddU1 = e0 * b[i].dd, ddU2 = e1 * b[i].dd;
    const double proj = c * U1 + s * U2, dproj = c * dU1 + s * dU2;
    // Q1: |U'|^2 + (cU1'+sU2')^2 + |U''|^2 + (cU1+sU2)^2
    F(0, i) = dU1;
    F(1, i) = dU2;
    F(2, i) = dproj;
    F(3, i) = ddU1;
    F(4, i) = ddU2;
    F(5, i) = proj;
    // Q2: 2c^2U1'^2 + 2s^2U2'^2 + 2(cU1'+sU2')^2 + (sU1'+cU2')^2 + (U1''+c proj)^2 + (U2''+s proj)^2
    F(6, i) = r2 * c * dU1;
    F(7, i) = r2 * s * dU2;
    F(8, i) = r2 * dproj;
    F(9, i) = s * dU1 + c * dU2;
    F(10, i) = ddU1 + c * proj;
    F(11, i) = ddU2 + s * proj;
  }
  return F;
}

inline std::array<Eigen::MatrixXd, 2> gram_raw(double M, Direction d, int nodes) {
  const int panels = std::max(1, int(std::ceil(M / 2.0)));
  const int per = std::max(16, (nodes + panels - 1) / panels);
  const auto ref = cheb::gauss_legendre(per, 0.0, 1.0);
  Eigen::MatrixXd q1 = Eigen::MatrixXd::Zero(6, 6), q2 = Eigen::MatrixXd::Zero(6, 6);
  const double width = M / panels;
  for (int p = 0; p < panels; ++p)
    for (int i = 0; i < per; ++i) {
      const double z = width * (p + ref.nodes[i]);
      const double w = width * ref.weights[i];
      const auto F = korn_features(M, d, z);
      q1.noalias() += w * F.topRows<6>().transpose() * F.topRows<6>();
      q2.noalias() += w * F.bottomRows<6>().transpose() * F.bottomRows<6>();
    }
  return {q1, q2};
}

}  // namespace detail

inline constexpr double kKornQuadratureTol = 1e-10;
inline constexpr int kKornMinNodes = 64;

/// Generalized eigenproblem q2 a = X q1 a on the six-dimensional solution space.
struct KornPencil {
  double M = 1.0;
  Direction sigma;
  Eigen::MatrixXd q1, q2;
  double asymmetry = 0.0;          // before symmetrization, relative to the matrix scale
  double quadrature_change = 0.0;  // relative change under node doubling
  std::vector<double> spectrum;    // ascending
  double Lambda = 0.0;
};

/// Gram matrices of Q1 and Q2 on the regime-adapted basis, composite Gauss-Legendre
/// with a node-doubling check.
inline KornPencil korn_gram(double M, Direction sigma, int quad_nodes = kKornMinNodes) {
  sigma.validate();
  require(M > 0.0 && std::isfinite(M), ErrorKind::Validation, "korn: M must be positive");
  require(quad_nodes >= kKornMinNodes, ErrorKind::Validation, "korn: at least 64 quadrature nodes");
  const auto coarse = detail::gram_raw(M, sigma, quad_nodes);
  const auto fine = detail::gram_raw(M, sigma, 2 * quad_nodes);
  KornPencil p;
  p.M = M;
  p.sigma = sigma;
  const double scale = std::max(fine[0].cwiseAbs().maxCoeff(), fine[1].cwiseAbs().maxCoeff());
  p.quadrature_change = std::max((fine[0] - coarse[0]).cwiseAbs().maxCoeff(), (fine[1] - coarse[1]).cwiseAbs().maxCoeff()) / scale;
  if (p.quadrature_change > kKornQuadratureTol)
    throw Error(ErrorKind::Precision, "korn quadrature not converged at M=" + std::to_string(M));
  p.asymmetry = std::max((fine[0] - fine[0].transpose()).cwiseAbs().maxCoeff(),
                         (fine[1] - fine[1].transpose()).cwiseAbs().maxCoeff()) / scale;
  p.q1 = 0.5 * (fine[0] + fine[0].transpose());
  p.q2 = 0.5 * (fine[1] + fine[1].transpose());
  return p;
}

/// Boundary linear forms v1 = (cU1+sU2)(M), v2 = (cU1'+sU2')(M) in the basis of the pencil.
inline std::array<Eigen::VectorXd, 2> korn_boundary_forms(const KornPencil& p) {
  const auto b = detail::conditioned_basis(p.M, p.M);
  Eigen::VectorXd v1(6), v2(6);
  for (int i = 0; i < 6; ++i) {
    const double e0 = i < 3 ? -p.sigma.c : p.sigma.s, e1 = i < 3 ? p.sigma.s : p.sigma.c;
    const double w = p.sigma.c * e0 + p.sigma.s * e1;
    v1[i] = w * b[i].v;
    v2[i] = w * b[i].d;
  }
  return {v1, v2};
}

/// v1 v2^T + v2 v1^T, the matrix of 2 (cU1+sU2)(M) (cU1'+sU2')(M).
inline Eigen::MatrixXd korn_boundary_matrix(const KornPencil& p) {
  const auto [v1, v2] = korn_boundary_forms(p);
  return v1 * v2.transpose() + v2 * v1.transpose();
}

inline constexpr double kClusterTol = 1e-6;

struct EigenCluster {
  double value = 0.0;
  int multiplicity = 0;
};

/// Groups ascending eigenvalues whose relative gap is below tol.
inline std::vector<EigenCluster> cluster_eigenvalues(const std::vector<double>& ev, double tol = kClusterTol) {
  std::vector<EigenCluster> out;
  for (double x : ev) {
    if (!out.empty() && std::abs(x - out.back().value) <= tol * std::max(1.0, std::abs(x))) {
      auto& c = out.back();
      c.value = (c.value * c.multiplicity + x) / (c.multiplicity + 1);
      ++c.multiplicity;
    } else {
      out.push_back({x, 1});
    }
  }
  return out;
}

/// Solves the pencil after q1-orthonormalizing the basis by modified Gram-Schmidt.
inline KornPencil& korn_spectrum(KornPencil& p) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(6, 6);
  const double scale = p.q1.diagonal().cwiseAbs().maxCoeff();
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < i; ++j) {
      const double proj = T.col(j).dot(p.q1 * T.col(i));
      T.col(i) -= proj * T.col(j);
    }
    const double n2 = T.col(i).dot(p.q1 * T.col(i));
    if (!(n2 > 1e-15 * scale * T.col(i).squaredNorm()))
      throw Error(ErrorKind::Conditioning, "korn: q1 not positive definite at M=" + std::to_string(p.M) +
                                               " sigma=(" + std::to_string(p.sigma.c) + "," +
                                               std::to_string(p.sigma.s) + ")");
    T.col(i) /= std::sqrt(n2);
  }
  Eigen::MatrixXd B = T.transpose() * p.q2 * T;
  B = 0.5 * (B + B.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
  p.spectrum.assign(es.eigenvalues().data(), es.eigenvalues().data() + 6);
  std::sort(p.spectrum.begin(), p.spectrum.end());
  p.Lambda = p.spectrum.front();
  return p;
}

inline KornPencil korn_pencil(double M, Direction sigma, int quad_nodes = kKornMinNodes) {
  KornPencil p = korn_gram(M, sigma, quad_nodes);
  korn_spectrum(p);
  return p;
}

/// Geometric grid of n points on [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int n) {
  require(lo > 0.0 && hi > lo && n >= 2, ErrorKind::Validation, "log grid needs 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  g.back() = hi;
  return g;
}

/// n directions at angles 2 pi i / n; one horizontal dimension only has (+-1, 0).
inline std::vector<Direction> direction_grid(int dim, int n) {
  if (dim == 1) return {{1.0, 0.0}, {-1.0, 0.0}};
  require(n >= 1, ErrorKind::Validation, "need at least one direction");
  std::vector<Direction> out;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * std::numbers::pi * i / n;
    out.push_back({std::cos(th), std::sin(th)});
  }
  return out;
}

struct KornCell {
  double M = 0.0;
  Direction sigma;
  double Lambda = 0.0;
  std::vector<double> spectrum;
  std::vector<EigenCluster> clusters;
  bool failed = false;
  std::string failure;
};

struct KornSweep {
  std::vector<KornCell> cells;  // M-major, sigma fastest
  double infimum = 0.0;
  double argmin_M = 0.0;
  Direction argmin_sigma;
  double max_jump = 0.0;  // largest |Lambda| change between M-neighbours at fixed sigma
  int failures = 0;
};

inline KornSweep korn_sweep(const std::vector<double>& Ms, const std::vector<Direction>& sigmas, int threads = 1,
                            int quad_nodes = kKornMinNodes) {
  require(!Ms.empty() && !sigmas.empty(), ErrorKind::Validation, "empty korn sweep");
  for (double M : Ms) require(M >= 1e-2 && M <= 50.0, ErrorKind::Validation, "korn sweep: M outside [1e-2, 50]");
  const std::size_t ns = sigmas.size();
  KornSweep out;
  out.cells = parallel_map(Ms.size() * ns, threads, [&](std::size_t i) {
    KornCell c;
    c.M = Ms[i / ns];
    c.sigma = sigmas[i % ns];
    try {
      const KornPencil p = korn_pencil(c.M, c.sigma, quad_nodes);
      c.Lambda = p.Lambda;
      c.spectrum = p.spectrum;
      c.clusters = cluster_eigenvalues(p.spectrum, c.M < 0.1 ? 1e-4 : kClusterTol);
    } catch (const Error& e) {
      c.failed = true;
      c.failure = e.what();
    }
    return c;
  });
  out.infimum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    const auto& c = out.cells[i];
    if (c.failed) {
      ++out.failures;
      continue;
    }
    if (c.Lambda < out.infimum) {
      out.infimum = c.Lambda;
      out.argmin_M = c.M;
      out.argmin_sigma = c.sigma;
    }
    if (i >= ns && !out.cells[i - ns].failed)
      out.max_jump = std::max(out.max_jump, std::abs(c.Lambda - out.cells[i - ns].Lambda));
  }
  return out;
}

}  // namespace thinsw
