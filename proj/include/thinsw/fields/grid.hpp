#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "thinsw/errors.hpp"

namespace thinsw {

/// Periodic collocation grid on the torus [0, length)^dim.
struct Grid {
  int dim = 1;
  int n = 32;
  double length = 2.0 * std::numbers::pi;

  static Grid make(int dim, int n, double length = 2.0 * std::numbers::pi) {
    require(dim == 1 || dim == 2, ErrorKind::Validation, "grid dimension must be 1 or 2");
    require(n >= 8 && (n & (n - 1)) == 0, ErrorKind::Validation,
            "grid size must be a power of two >= 8, got " + std::to_string(n));
    require(std::isfinite(length) && length > 0.0, ErrorKind::Validation,
            "grid period must be positive");
    return Grid{dim, n, length};
  }

  std::size_t size() const { return dim == 1 ? std::size_t(n) : std::size_t(n) * n; }
  std::size_t spectral_size() const {
    return dim == 1 ? std::size_t(n / 2 + 1) : std::size_t(n) * (n / 2 + 1);
  }
  double spacing() const { return length / n; }
  double node(int j) const { return j * spacing(); }
  double measure() const { return dim == 1 ? length : length * length; }
  double cell_volume() const { return dim == 1 ? spacing() : spacing() * spacing(); }
  /// Physical wavenumber of a signed mode index.
  double wavenumber(int signed_index) const {
    return signed_index * (2.0 * std::numbers::pi / length);
  }
  /// Signed index of the full (non-halved) axis storage position i.
  int signed_index(int i) const { return i <= n / 2 ? i : i - n; }

  bool operator==(const Grid&) const = default;
};

}  // namespace thinsw
