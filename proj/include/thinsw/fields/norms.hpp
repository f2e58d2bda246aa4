#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>

#include "thinsw/fields/thin_field.hpp"

namespace thinsw {

struct NormKind {
  enum class Tag { L2, Hk, L6, Linf, BoundaryHs };
  enum class Domain { Horizontal, Thin };

  Tag tag = Tag::L2;
  int k = 0;
  double s = 0.0;
  Domain domain = Domain::Horizontal;

  static NormKind l2(Domain d = Domain::Horizontal) { return {Tag::L2, 0, 0.0, d}; }
  static NormKind hk(int k, Domain d = Domain::Horizontal) { return {Tag::Hk, k, 0.0, d}; }
  static NormKind l6(Domain d = Domain::Horizontal) { return {Tag::L6, 0, 0.0, d}; }
  static NormKind linf(Domain d = Domain::Horizontal) { return {Tag::Linf, 0, 0.0, d}; }
  static NormKind boundary(double s, Domain d = Domain::Horizontal) { return {Tag::BoundaryHs, 0, s, d}; }

  void validate() const {
    require(tag != Tag::Hk || (k >= 0 && k <= 3), ErrorKind::Validation, "Sobolev order must be in 0..3");
    if (tag == Tag::BoundaryHs) {
      require(s == -0.5 || s == 0.5 || s == 1.5, ErrorKind::Validation, "boundary order must be -1/2, 1/2 or 3/2");
    } else {
      require(s >= 0.0, ErrorKind::Validation, "negative order only for boundary norms");
    }
  }
};

namespace detail {

inline double sum_pow(const HField& f, int p) {
  double acc = 0.0;
  for (double v : f.values) acc += std::pow(std::abs(v), p);
  return acc * f.grid.cell_volume();
}

/// Squared (1 + |kappa|^2)^{s/2} norm of a periodic field.
inline double boundary_sq(const HField& f, double s) {
  const Spectrum sp = spectrum(f);
  double acc = 0.0;
  for_each_mode(f.grid, [&](std::size_t idx, std::array<int, 2> k, double w) {
    double kk = 0.0;
    for (int a = 0; a < f.grid.dim; ++a) kk += std::pow(f.grid.wavenumber(k[a]), 2);
    acc += w * std::pow(1.0 + kk, s) * std::norm(sp.coef[idx]);
  });
  return acc * f.grid.measure();
}

/// All multi-indices over `vars` variables with total order <= k.
inline std::vector<std::array<int, 3>> multi_indices(int vars, int k) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= (vars > 1 ? k - a : 0); ++b)
      for (int c = 0; c <= (vars > 2 ? k - a - b : 0); ++c) out.push_back({a, b, c});
  return out;
}

/// Memoized derivatives of a thin field; index = (d/dx_0 count, d/dx_1 count, d/dz count).
class ThinDerivatives {
 public:
  explicit ThinDerivatives(const ThinField& f) { cache_.emplace(std::array<int, 3>{0, 0, 0}, f); }

  const ThinField& get(std::array<int, 3> idx) {
    auto it = cache_.find(idx);
    if (it != cache_.end()) return it->second;
    ThinField d;
    if (idx[2] > 0) {
      d = thin_dz(get({idx[0], idx[1], idx[2] - 1}));
    } else if (idx[1] > 0) {
      d = thin_dx(get({idx[0], idx[1] - 1, 0}), 1);
    } else {
      d = thin_dx(get({idx[0] - 1, 0, 0}), 0);
    }
    return cache_.emplace(idx, std::move(d)).first->second;
  }

 private:
  std::map<std::array<int, 3>, ThinField> cache_;
};

inline double thin_sum_pow(const ThinField& f, int p) {
  return thin_integral(f, [&](std::size_t j, int m) {
    double acc = 0.0;
    for (int c = 0; c < f.components; ++c) acc += std::pow(std::abs(f.at(c, j, m)), p);
    return acc;
  });
}

/// Top trace z = eps * depth(x) of component c.
inline HField top_trace(const ThinField& f, int c) { return f.level(c, f.nz - 1); }

}  // namespace detail

inline double norm(const HField& f, NormKind kind) {
  kind.validate();
  require_finite(f, "norm");
  switch (kind.tag) {
    case NormKind::Tag::L2:
      return std::sqrt(detail::sum_pow(f, 2));
    case NormKind::Tag::L6:
      return std::pow(detail::sum_pow(f, 6), 1.0 / 6.0);
    case NormKind::Tag::Linf:
      return f.max_abs();
    case NormKind::Tag::BoundaryHs:
      return std::sqrt(detail::boundary_sq(f, kind.s));
    case NormKind::Tag::Hk: {
      double acc = 0.0;
      for (const auto& idx : detail::multi_indices(f.grid.dim, kind.k))
        acc += detail::sum_pow(derivative(f, {idx[0], idx[1]}), 2);
      return std::sqrt(acc);
    }
  }
  return 0.0;
}

/// Vector fields: L^p-type norms of the pointwise Euclidean magnitude, Hilbert norms summed.
inline double norm(const HVec& v, NormKind kind) {
  require(!v.empty(), ErrorKind::Validation, "empty vector field");
  if (kind.tag == NormKind::Tag::Linf || kind.tag == NormKind::Tag::L6) {
    HField mag(v.front().grid);
    for (const auto& c : v) mag += c * c;
    for (double& x : mag.values) x = std::sqrt(x);
    return norm(mag, kind);
  }
  double acc = 0.0;
  for (const auto& c : v) acc += std::pow(norm(c, kind), 2);
  return std::sqrt(acc);
}

/// Thin-layer norms. Derivatives are taken in the physical coordinates (x, z);
/// boundary norms act on the top trace.
inline double norm(const ThinField& f, NormKind kind) {
  kind.validate();
  require(f.finite(), ErrorKind::Validation, "norm: non-finite thin field");
  switch (kind.tag) {
    case NormKind::Tag::L2:
      return std::sqrt(detail::thin_sum_pow(f, 2));
    case NormKind::Tag::L6:
      return std::pow(detail::thin_sum_pow(f, 6), 1.0 / 6.0);
    case NormKind::Tag::Linf:
      return f.max_abs();
    case NormKind::Tag::BoundaryHs: {
      double acc = 0.0;
      for (int c = 0; c < f.components; ++c) acc += detail::boundary_sq(detail::top_trace(f, c), kind.s);
      return std::sqrt(acc);
    }
    case NormKind::Tag::Hk: {
      detail::ThinDerivatives d(f);
      double acc = 0.0;
      for (const auto& idx : detail::multi_indices(f.grid.dim + 1, kind.k)) {
        std::array<int, 3> key = f.grid.dim == 1 ? std::array<int, 3>{idx[0], 0, idx[1]} : idx;
        acc += detail::thin_sum_pow(d.get(key), 2);
      }
      return std::sqrt(acc);
    }
  }
  return 0.0;
}

}  // namespace thinsw
