#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "thinsw/fields/hfield.hpp"

namespace thinsw {

/// Orders of differentiation along each horizontal axis.
using MultiIndex = std::array<int, 2>;

inline void require_finite(const HField& f, const char* what) {
  require(f.finite(), ErrorKind::Validation, std::string(what) + ": non-finite input");
}

/// Exact derivative of the trigonometric interpolant. Odd derivatives along an
/// axis annihilate that axis' Nyquist mode (it has no real-valued derivative).
inline HField derivative(const HField& f, MultiIndex orders) {
  require(orders[0] >= 0 && orders[1] >= 0, ErrorKind::Validation, "negative derivative order");
  require(orders[0] + orders[1] <= 4, ErrorKind::Unsupported, "derivative order above 4");
  require(f.grid.dim == 2 || orders[1] == 0, ErrorKind::Validation,
          "derivative along axis 1 of a one-dimensional field");
  require_finite(f, "derivative");
  if (orders[0] + orders[1] == 0) return f;
  Spectrum s = spectrum(f);
  const Grid& g = f.grid;
  const int half = g.n / 2;
  for_each_mode(g, [&](std::size_t idx, std::array<int, 2> k, double) {
    cplx factor{1.0, 0.0};
    for (int a = 0; a < g.dim; ++a) {
      const int o = orders[a];
      if (o == 0) continue;
      if ((o % 2 == 1) && std::abs(k[a]) == half) {
        factor = 0.0;
        break;
      }
      const cplx ik{0.0, g.wavenumber(k[a])};
      for (int p = 0; p < o; ++p) factor *= ik;
    }
    s.coef[idx] *= factor;
  });
  return field(s);
}

inline HField dx(const HField& f, int axis, int order = 1) {
  MultiIndex m{0, 0};
  m[axis] = order;
  return derivative(f, m);
}

inline HVec gradient(const HField& f) {
  HVec g;
  for (int a = 0; a < f.grid.dim; ++a) g.push_back(dx(f, a));
  return g;
}

inline HField divergence(const HVec& v) {
  HField out(v.at(0).grid);
  for (int a = 0; a < out.grid.dim; ++a) out += dx(v[a], a);
  return out;
}

inline HField laplacian(const HField& f) {
  HField out(f.grid);
  for (int a = 0; a < f.grid.dim; ++a) out += dx(f, a, 2);
  return out;
}

/// Zeroes every mode whose index exceeds `fraction * n / 2` along any axis.
/// fraction = 2/3 is the standard dealiasing filter (retains |k| <= n/3).
inline HField truncate_modes(const HField& f, double fraction = 2.0 / 3.0) {
  Spectrum s = spectrum(f);
  const double cutoff = fraction * f.grid.n / 2.0;
  for_each_mode(f.grid, [&](std::size_t idx, std::array<int, 2> k, double) {
    for (int a = 0; a < f.grid.dim; ++a)
      if (std::abs(k[a]) > cutoff + 1e-9) s.coef[idx] = 0.0;
  });
  return field(s);
}

namespace detail {

/// Copies coefficients between half-complex layouts of sizes n_from and n_to,
/// dropping modes that do not fit and every Nyquist mode.
inline std::vector<cplx> resize_spectrum(int dim, int n_from, int n_to, const std::vector<cplx>& in) {
  const int keep = std::min(n_from, n_to) / 2;  // |k| < keep survive
  const int half_to = n_to / 2 + 1;
  const int half_from = n_from / 2 + 1;
  std::vector<cplx> out(dim == 1 ? std::size_t(half_to) : std::size_t(n_to) * half_to);
  if (dim == 1) {
    for (int j = 0; j < keep; ++j) out[j] = in[j];
    return out;
  }
  for (int k0 = -(keep - 1); k0 < keep; ++k0) {
    const int i_from = k0 >= 0 ? k0 : n_from + k0;
    const int i_to = k0 >= 0 ? k0 : n_to + k0;
    for (int j = 0; j < keep; ++j)
      out[std::size_t(i_to) * half_to + j] = in[std::size_t(i_from) * half_from + j];
  }
  return out;
}

}  // namespace detail

/// Product of two fields evaluated on a 3/2 zero-padded grid and truncated back.
/// For inputs without Nyquist content the retained modes equal those of the
/// exact product.
inline HField dealiased_product(const HField& a, const HField& b) {
  require(a.grid == b.grid, ErrorKind::Validation, "fields live on different grids");
  const Grid& g = a.grid;
  const int m = 3 * g.n / 2;
  auto pa = inverse_transform(g.dim, m, detail::resize_spectrum(g.dim, g.n, m, spectrum(a).coef));
  auto pb = inverse_transform(g.dim, m, detail::resize_spectrum(g.dim, g.n, m, spectrum(b).coef));
  for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
  auto back = detail::resize_spectrum(g.dim, m, g.n, forward_transform(g.dim, m, pa));
  return field(Spectrum{g, std::move(back)});
}

/// Evaluates the trigonometric interpolant at an arbitrary point. Nyquist
/// modes are ignored (interpolated fields are expected to be filtered).
inline double interpolate(const Spectrum& s, Point p) {
  const Grid& g = s.grid;
  const int half = g.n / 2;
  if (g.dim == 1) {
    double acc = s.coef[0].real();
    for (int j = 1; j < half; ++j)
      acc += 2.0 * (s.coef[j] * std::polar(1.0, g.wavenumber(j) * p[0])).real();
    return acc;
  }
  std::vector<cplx> e0(g.n), e1(half);
  for (int i = 0; i < g.n; ++i) e0[i] = std::polar(1.0, g.wavenumber(g.signed_index(i)) * p[0]);
  for (int j = 0; j < half; ++j) e1[j] = std::polar(1.0, g.wavenumber(j) * p[1]);
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i) {
    if (i == half) continue;
    for (int j = 0; j < half; ++j) {
      const double w = j == 0 ? 1.0 : 2.0;
      acc += w * (s.coef[std::size_t(i) * (half + 1) + j] * e0[i] * e1[j]).real();
    }
  }
  return acc;
}

/// measure * sum |c_k|^2 over the full spectrum (Parseval's right-hand side).
inline double spectral_energy(const HField& f) {
  const Spectrum s = spectrum(f);
  double acc = 0.0;
  for_each_mode(f.grid, [&](std::size_t idx, std::array<int, 2>, double w) { acc += w * std::norm(s.coef[idx]); });
  return acc * f.grid.measure();
}

/// Fraction of spectral energy carried by the top third of the retained
/// (2/3-filtered) band; a resolution diagnostic.
inline double spectral_tail_fraction(const HField& f) {
  const Spectrum s = spectrum(f);
  const double retained = f.grid.n / 3.0;
  double total = 0.0, tail = 0.0;
  for_each_mode(f.grid, [&](std::size_t idx, std::array<int, 2> k, double w) {
    const double e = w * std::norm(s.coef[idx]);
    if (k[0] == 0 && k[1] == 0) return;
    total += e;
    int kmax = 0;
    for (int a = 0; a < f.grid.dim; ++a) kmax = std::max(kmax, std::abs(k[a]));
    if (kmax > 2.0 * retained / 3.0) tail += e;
  });
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace thinsw
