#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace thinsw {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Random stream derived from a root seed and a stream counter. Conversions
/// to floating point are done by hand so results do not depend on the
/// standard library's distribution implementations.
class RandomStream {
 public:
  RandomStream(std::uint64_t root_seed, std::uint64_t stream)
      : engine_(splitmix64(root_seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace thinsw
