#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "thinsw/errors.hpp"
#include "thinsw/fields/fft.hpp"
#include "thinsw/fields/grid.hpp"

namespace thinsw {

using Point = std::array<double, 2>;

/// Real samples of a horizontal field at the collocation nodes. Storage is
/// row-major with axis 0 slowest in two dimensions.
struct HField {
  Grid grid;
  std::vector<double> values;

  HField() = default;
  explicit HField(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  HField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    require(values.size() == grid.size(), ErrorKind::Validation, "field size does not match grid");
  }

  template <class Fn>
  static HField from_function(const Grid& g, Fn&& fn) {
    HField f(g);
    for (std::size_t idx = 0; idx < g.size(); ++idx) f.values[idx] = fn(f.point(idx));
    return f;
  }

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  Point point(std::size_t idx) const {
    if (grid.dim == 1) return {grid.node(int(idx)), 0.0};
    return {grid.node(int(idx / grid.n)), grid.node(int(idx % grid.n))};
  }

  double min() const { return *std::min_element(values.begin(), values.end()); }
  double max() const { return *std::max_element(values.begin(), values.end()); }
  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  bool finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
  }

  HField& operator+=(const HField& o) { return zip(o, std::plus<>{}); }
  HField& operator-=(const HField& o) { return zip(o, std::minus<>{}); }
  HField& operator*=(const HField& o) { return zip(o, std::multiplies<>{}); }
  HField& operator/=(const HField& o) { return zip(o, std::divides<>{}); }
  HField& operator*=(double s) {
    for (double& v : values) v *= s;
    return *this;
  }
  HField& operator+=(double s) {
    for (double& v : values) v += s;
    return *this;
  }

 private:
  template <class Op>
  HField& zip(const HField& o, Op op) {
    require(o.grid == grid, ErrorKind::Validation, "fields live on different grids");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = op(values[i], o.values[i]);
    return *this;
  }
};

inline HField operator+(HField a, const HField& b) { return a += b; }
inline HField operator-(HField a, const HField& b) { return a -= b; }
inline HField operator*(HField a, const HField& b) { return a *= b; }
inline HField operator/(HField a, const HField& b) { return a /= b; }
inline HField operator*(HField a, double s) { return a *= s; }
inline HField operator*(double s, HField a) { return a *= s; }
inline HField operator+(HField a, double s) { return a += s; }
inline HField operator-(HField a) { return a *= -1.0; }

/// Vector of horizontal fields (one per horizontal component).
using HVec = std::vector<HField>;

inline HVec zeros_like(const HVec& v) {
  HVec out;
  for (const auto& c : v) out.emplace_back(c.grid);
  return out;
}

/// Trapezoidal integral over the torus; exact for trigonometric polynomials
/// resolved by the grid.
inline double integral(const HField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.cell_volume();
}

inline double mean(const HField& f) { return integral(f) / f.grid.measure(); }

/// Half-complex spectrum of a real field (normalized Fourier coefficients).
struct Spectrum {
  Grid grid;
  std::vector<cplx> coef;

  std::size_t index(int i0, int j) const {
    return grid.dim == 1 ? std::size_t(j) : std::size_t(i0) * (grid.n / 2 + 1) + std::size_t(j);
  }
};

inline Spectrum spectrum(const HField& f) {
  return Spectrum{f.grid, forward_transform(f.grid.dim, f.grid.n, f.values)};
}

inline HField field(const Spectrum& s) {
  return HField(s.grid, inverse_transform(s.grid.dim, s.grid.n, s.coef));
}

/// Calls fn(storage index, signed mode indices, Parseval multiplicity) for every
/// stored coefficient. The multiplicity is 2 for modes whose conjugate partner
/// is implicit in the half-complex layout.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  const int half = g.n / 2;
  if (g.dim == 1) {
    for (int j = 0; j <= half; ++j)
      fn(std::size_t(j), std::array<int, 2>{j, 0}, (j == 0 || j == half) ? 1.0 : 2.0);
    return;
  }
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j <= half; ++j)
      fn(std::size_t(i) * (half + 1) + j, std::array<int, 2>{g.signed_index(i), j},
         (j == 0 || j == half) ? 1.0 : 2.0);
}

}  // namespace thinsw
