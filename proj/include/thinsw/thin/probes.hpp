#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "thinsw/fields/norms.hpp"
#include "thinsw/parallel.hpp"
#include "thinsw/rng.hpp"

namespace thinsw {

/// Inequalities probed on the flat strip X x (0, eps), one horizontal dimension.
/// L6:            eps^{1/3} |u|_{L6} / |u|_{H1}
/// Agmon:         eps^{1/2} |u|_{Linf} / |u|_{H2}
/// TraceZero:     |u(., eps)|_{H1/2} / |u|_{H1}, u(., 0) = 0
/// TraceGeneral:  eps^{1/2} |u(., eps)|_{H1/2} / |u|_{H1}
/// Korn:          (2 |D(u)|^2 + eps gamma_bar |u_H(., 0)|^2) / |u|_{H1}^2, div u = 0, u_V(., 0) = 0
enum class ProbeTag { L6, Agmon, TraceZero, TraceGeneral, Korn };

inline const char* to_string(ProbeTag t) {
  switch (t) {
    case ProbeTag::L6: return "L6";
    case ProbeTag::Agmon: return "Agmon";
    case ProbeTag::TraceZero: return "trace_zero";
    case ProbeTag::TraceGeneral: return "trace_general";
    case ProbeTag::Korn: return "korn";
  }
  return "?";
}

inline ProbeTag parse_probe_tag(const std::string& s) {
  for (ProbeTag t : {ProbeTag::L6, ProbeTag::Agmon, ProbeTag::TraceZero, ProbeTag::TraceGeneral, ProbeTag::Korn})
    if (s == to_string(t)) return t;
  throw Error(ErrorKind::Validation, "unknown probe tag '" + s + "'");
}

inline constexpr double kDegenerateNorm = 1e-12;
inline constexpr int kMinProbeSamples = 50;
inline constexpr double kProbeVariationBound = 3.0;

namespace detail {

inline double thin_l2(const ThinField& f) { return norm(f, NormKind::l2(NormKind::Domain::Thin)); }

}  // namespace detail

/// Scaled ratio of a scalar field for the first four tags. NaN marks a degenerate sample.
inline double probe_ratio(ProbeTag tag, const ThinField& u) {
  require(tag != ProbeTag::Korn, ErrorKind::Validation, "use korn_ratio for the Korn functional");
  const double eps = u.eps;
  const double h1 = norm(u, NormKind::hk(1, NormKind::Domain::Thin));
  switch (tag) {
    case ProbeTag::L6:
      if (h1 < kDegenerateNorm) return std::numeric_limits<double>::quiet_NaN();
      return std::cbrt(eps) * norm(u, NormKind::l6(NormKind::Domain::Thin)) / h1;
    case ProbeTag::Agmon: {
      const double h2 = norm(u, NormKind::hk(2, NormKind::Domain::Thin));
      if (h2 < kDegenerateNorm) return std::numeric_limits<double>::quiet_NaN();
      return std::sqrt(eps) * u.max_abs() / h2;
    }
    case ProbeTag::TraceZero:
    case ProbeTag::TraceGeneral: {
      if (h1 < kDegenerateNorm) return std::numeric_limits<double>::quiet_NaN();
      const double tr = norm(u, NormKind::boundary(0.5, NormKind::Domain::Thin));
      return (tag == ProbeTag::TraceGeneral ? std::sqrt(eps) : 1.0) * tr / h1;
    }
    case ProbeTag::Korn: break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Korn functional of a two-component field (u_H, u_V) on the flat strip.
inline double korn_ratio(const ThinField& u, double gamma_bar) {
  require(u.components == 2 && u.grid.dim == 1, ErrorKind::Validation, "korn ratio needs (u_H, u_V) in one dimension");
  const double h1 = norm(u, NormKind::hk(1, NormKind::Domain::Thin));
  if (h1 < kDegenerateNorm) return std::numeric_limits<double>::quiet_NaN();
  const ThinField ux = thin_dx(u, 0), uz = thin_dz(u);
  const double dsq = thin_integral(u, [&](std::size_t j, int m) {
    const double a = ux.at(0, j, m), b = uz.at(1, j, m), s = 0.5 * (uz.at(0, j, m) + ux.at(1, j, m));
    return a * a + b * b + 2.0 * s * s;
  });
  double slip = 0.0;
  for (std::size_t j = 0; j < u.grid.size(); ++j) slip += u.at(0, j, 0) * u.at(0, j, 0);
  slip *= u.grid.cell_volume();
  return (2.0 * dsq + u.eps * gamma_bar * slip) / (h1 * h1);
}

/// One random band-limited sample: 1-3 horizontal modes, each with probability 1/2 from
/// k in {1, 2, 3} or with M = k eps log-uniform in [eps, 4], each with its own random polynomial profile of degree <= 4 in zeta. Without
/// a bottom constraint half of the samples are vertically constant, where the L6, Agmon
/// and general trace ratios attain their eps-scaling.
struct ProbeSample {
  struct Mode {
    int k = 1;
    double a = 0.0, b = 0.0;       // cos / sin amplitudes
    std::array<double, 5> p{};     // profile coefficients in zeta
  };
  std::vector<Mode> modes;
  int max_k() const {
    int m = 0;
    for (const auto& md : modes) m = std::max(m, md.k);
    return m;
  }
};

inline ProbeSample draw_probe_sample(RandomStream& rng, double eps, bool zero_bottom) {
  ProbeSample s;
  const bool flat_profile = !zero_bottom && rng.uniform() < 0.5;
  const int count = rng.integer(1, 3);
  for (int i = 0; i < count; ++i) {
    ProbeSample::Mode m;
    if (rng.uniform() < 0.5) {
      m.k = rng.integer(1, 3);
    } else {
      const double M = eps * std::pow(4.0 / eps, rng.uniform());
      m.k = std::max(1, int(std::lround(M / eps)));
    }
    m.a = rng.normal();
    m.b = rng.normal();
    for (double& c : m.p) c = rng.normal();
    if (zero_bottom) m.p[0] = 0.0;
    if (flat_profile) std::fill(m.p.begin() + 1, m.p.end(), 0.0);
    s.modes.push_back(m);
  }
  return s;
}

/// Smallest power-of-two grid that resolves sixth powers of the sample exactly.
inline Grid probe_grid(const ProbeSample& s) {
  int n = 32;
  while (n <= 7 * s.max_k()) n *= 2;
  return Grid::make(1, n);
}

inline constexpr int kProbeLevels = 26;  // Clenshaw-Curtis exact for degree-24 profiles

/// Scalar sample u = sum T_i(x) P_i(zeta).
inline ThinField scalar_sample(const ProbeSample& s, double eps) {
  ThinField u = ThinField::flat(probe_grid(s), eps, kProbeLevels);
  const auto zeta = u.zeta();
  for (std::size_t j = 0; j < u.grid.size(); ++j) {
    const double x = u.depth.point(j)[0];
    for (const auto& md : s.modes) {
      const double T = md.a * std::cos(md.k * x) + md.b * std::sin(md.k * x);
      for (int m = 0; m < u.nz; ++m) {
        double P = 0.0;
        for (int q = 4; q >= 0; --q) P = P * zeta[m] + md.p[q];
        u.at(0, j, m) += T * P;
      }
    }
  }
  return u;
}

/// Divergence-free sample from the stream function psi = eps sum T_i(x) P_i(zeta) with
/// P_i(0) = 0: u_H = d_z psi, u_V = -d_x psi.
inline ThinField stream_sample(const ProbeSample& s, double eps) {
  ThinField u = ThinField::flat(probe_grid(s), eps, kProbeLevels, 2);
  const auto zeta = u.zeta();
  for (std::size_t j = 0; j < u.grid.size(); ++j) {
    const double x = u.depth.point(j)[0];
    for (const auto& md : s.modes) {
      const double T = md.a * std::cos(md.k * x) + md.b * std::sin(md.k * x);
      const double dT = md.k * (-md.a * std::sin(md.k * x) + md.b * std::cos(md.k * x));
      for (int m = 0; m < u.nz; ++m) {
        double P = 0.0, dP = 0.0;
        for (int q = 4; q >= 0; --q) {
          dP = dP * zeta[m] + P;
          P = P * zeta[m] + md.p[q];
        }
        u.at(0, j, m) += T * dP;
        u.at(1, j, m) -= eps * dT * P;
      }
    }
  }
  return u;
}

struct ProbeStats {
  double eps = 0.0;
  int samples = 0;
  int skipped = 0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
};

struct ProbeReport {
  ProbeTag tag = ProbeTag::L6;
  std::vector<ProbeStats> per_eps;
  double variation = 0.0;  // ratio of the largest to the smallest extremal value across eps
  bool bounded = false;    // variation < 3
  /// Korn is a lower bound, so its extremal value is the minimum; the others use the maximum.
  double extremal(const ProbeStats& s) const { return tag == ProbeTag::Korn ? s.min_ratio : s.max_ratio; }
};

/// Extremal scaled ratio over `samples` random fields per eps.
inline ProbeReport anisotropy_probe(ProbeTag tag, const std::vector<double>& eps_list, int samples,
                                    std::uint64_t seed, double gamma_bar = 1.0, int threads = 1) {
  require(!eps_list.empty(), ErrorKind::Validation, "probe needs at least one eps");
  require(samples >= kMinProbeSamples, ErrorKind::Validation, "probe needs at least 50 samples per eps");
  for (double e : eps_list) require(e > 0.0 && e < 1.0, ErrorKind::Validation, "probe eps must lie in (0, 1)");
  ProbeReport rep;
  rep.tag = tag;
  const bool zero_bottom = tag == ProbeTag::TraceZero || tag == ProbeTag::Korn;
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    const double eps = eps_list[e];
    const auto ratios = parallel_map(std::size_t(samples), threads, [&](std::size_t i) {
      RandomStream rng(seed, (std::uint64_t(e) << 32) | i);
      const ProbeSample s = draw_probe_sample(rng, eps, zero_bottom);
      if (tag == ProbeTag::Korn) return korn_ratio(stream_sample(s, eps), gamma_bar);
      return probe_ratio(tag, scalar_sample(s, eps));
    });
    ProbeStats st;
    st.eps = eps;
    st.max_ratio = 0.0;
    st.min_ratio = std::numeric_limits<double>::infinity();
    for (double r : ratios) {
      if (!std::isfinite(r)) {
        ++st.skipped;
        continue;
      }
      ++st.samples;
      st.max_ratio = std::max(st.max_ratio, r);
      st.min_ratio = std::min(st.min_ratio, r);
    }
    rep.per_eps.push_back(st);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& st : rep.per_eps) {
    if (st.samples == 0) continue;
    lo = std::min(lo, rep.extremal(st));
    hi = std::max(hi, rep.extremal(st));
  }
  rep.variation = (lo > 0.0 && std::isfinite(lo)) ? hi / lo : std::numeric_limits<double>::infinity();
  rep.bounded = rep.variation < kProbeVariationBound;
  return rep;
}

}  // namespace thinsw
