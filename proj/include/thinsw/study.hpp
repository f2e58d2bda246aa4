#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "thinsw/ns_residual.hpp"
#include "thinsw/parallel.hpp"

namespace thinsw {

/// Norms at or below this value are treated as roundoff and excluded from fits.
inline constexpr double kFitFloor = 1e-13;

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
  bool degenerate = true;
};

/// Least-squares fit of log(norm) against log(eps) over the above-floor points.
inline FitResult fit_loglog(const std::vector<double>& eps, const std::vector<double>& norms, double floor = kFitFloor) {
  require(eps.size() == norms.size(), ErrorKind::Validation, "fit: length mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (std::isfinite(norms[i]) && norms[i] > floor) {
      x.push_back(std::log(eps[i]));
      y.push_back(std::log(norms[i]));
    }
  FitResult f;
  f.points = int(x.size());
  if (f.points < 3) return f;
  const double n = double(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.degenerate = false;
  return f;
}

/// Largest step <= dt_max that is stable for `init` and divides T.
inline double study_step(const SWState& init, const Params& p, double dt_max, double T) {
  const double bound = std::min(dt_max, 0.99 * stable_dt(init, p).value());
  if (T <= 0.0) return bound;
  return T / std::ceil(T / bound - 1e-9);
}

struct StudyInput {
  SWState init;
  Params params;  // eps is overwritten per study point
  std::vector<double> eps_list;
  double t_eval = 0.5;
  int nz = 16;
  double dt = 1e-3;
  int threads = 1;
};

struct TermSeries {
  std::string kind, source;
  int component = 0;
  int eps_order = 0;
  std::vector<double> magnitudes;  // per eps
  FitResult fit;
};

struct ClaimDiscrepancy {
  std::string kind;
  FitResult fit;
  TermSeries dominant;              // largest surviving total entry below the claimed order
  std::vector<TermSeries> sources;  // contributions to the same (component, eps-order)
};

struct StudyReport {
  std::vector<double> eps_list;
  double t_eval = 0.0;
  double dt = 0.0;
  int n = 0, nz = 0;
  std::vector<ResidualReport> reports;
  std::map<std::string, std::vector<double>> series;
  std::map<std::string, FitResult> fits;
  std::vector<std::string> flags;
  std::vector<TermSeries> terms;
  std::vector<ClaimDiscrepancy> discrepancies;
  bool tail_flag = false;
};

/// Residual kinds whose orders are claimed; the pass band for their slopes.
inline const std::vector<std::string>& claimed_kinds() {
  static const std::vector<std::string> k{"interior_sup", "kinematic_sup", "traction_sup"};
  return k;
}
inline constexpr double kClaimSlopeLow = 2.5;
inline constexpr double kClaimSlopeHigh = 3.5;
inline constexpr double kClaimMinR2 = 0.98;

inline bool claim_holds(const FitResult& f) {
  return !f.degenerate && f.slope >= kClaimSlopeLow && f.slope <= kClaimSlopeHigh && f.r2 >= kClaimMinR2;
}

namespace detail {

inline std::map<std::string, double> report_series(const ResidualReport& r) {
  const std::size_t nh = r.interior_sup.size() - 1;
  auto hmax = [&](const std::vector<double>& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < nh; ++i) m = std::max(m, v[i]);
    return m;
  };
  auto l2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  return {{"interior_sup", r.interior()},
          {"interior_h_sup", hmax(r.interior_sup)},
          {"interior_v_sup", r.interior_sup.back()},
          {"interior_l2", l2(r.interior_l2)},
          {"divergence_sup", r.divergence_sup},
          {"kinematic_sup", r.kinematic_sup},
          {"kinematic_l2", r.kinematic_l2},
          {"traction_sup", r.traction()},
          {"traction_h_sup", hmax(r.traction_sup)},
          {"traction_v_sup", r.traction_sup.back()},
          {"traction_l2", l2(r.traction_l2)},
          {"bottom_vertical_sup", r.bottom_vertical_sup},
          {"bottom_slip_sup", r.bottom_slip_sup}};
}

}  // namespace detail

/// Fits, flags, term series and claim discrepancies from per-eps reports.
inline void analyse_study(StudyReport& rep) {
  rep.series.clear();
  rep.fits.clear();
  rep.flags.clear();
  rep.terms.clear();
  rep.discrepancies.clear();
  for (const auto& r : rep.reports)
    for (const auto& [k, v] : detail::report_series(r)) rep.series[k].push_back(v);
  for (const auto& [k, v] : rep.series) {
    rep.fits[k] = fit_loglog(rep.eps_list, v);
    if (rep.fits[k].degenerate) rep.flags.push_back("degenerate fit: " + k);
  }
  if (rep.tail_flag) rep.flags.push_back("spectral tail above threshold");

  if (!rep.reports.empty()) {
    const auto& first = rep.reports.front().term_breakdown;
    for (std::size_t e = 0; e < first.size(); ++e) {
      TermSeries t{first[e].kind, first[e].source, first[e].component, first[e].eps_order, {}, {}};
      for (const auto& r : rep.reports) t.magnitudes.push_back(r.term_breakdown.at(e).magnitude);
      t.fit = fit_loglog(rep.eps_list, t.magnitudes);
      rep.terms.push_back(std::move(t));
    }
  }

  for (const auto& kind : claimed_kinds()) {
    const FitResult& f = rep.fits[kind];
    if (claim_holds(f)) continue;
    rep.flags.push_back("claim discrepancy: " + kind);
    ClaimDiscrepancy d{kind.substr(0, kind.find('_')), f, {}, {}};
    const TermSeries* best = nullptr;
    for (const auto& t : rep.terms) {
      if (t.kind != d.kind || t.source != "total" || t.fit.degenerate || t.fit.slope >= kClaimSlopeLow) continue;
      if (!best || t.magnitudes.back() > best->magnitudes.back()) best = &t;
    }
    if (best) {
      d.dominant = *best;
      for (const auto& t : rep.terms)
        if (t.kind == best->kind && t.component == best->component && t.eps_order == best->eps_order && t.source != "total")
          d.sources.push_back(t);
    }
    rep.discrepancies.push_back(std::move(d));
  }
}

/// Solves the shallow-water system once to t_eval, then builds and measures
/// the ansatz for every eps on the same state.
inline StudyReport convergence_study(const StudyInput& in) {
  require(in.eps_list.size() >= 4, ErrorKind::Validation, "eps_list needs at least 4 entries");
  for (std::size_t i = 1; i < in.eps_list.size(); ++i)
    require(in.eps_list[i] < in.eps_list[i - 1], ErrorKind::Validation, "eps_list must be strictly decreasing");
  require(in.t_eval >= 0.0, ErrorKind::Validation, "t_eval must be >= 0");
  Params p = in.params;
  p.eps = in.eps_list.front();
  p.validate();

  StudyReport rep;
  rep.eps_list = in.eps_list;
  rep.t_eval = in.t_eval;
  rep.n = in.init.grid().n;
  rep.nz = in.nz;
  rep.dt = study_step(in.init, p, in.dt, in.t_eval);
  SWState state = in.init;
  if (in.t_eval > 0.0) {
    const SWTrajectory tr = sw_solve(in.init, p, in.t_eval, rep.dt);
    state = tr.final_state();
    rep.tail_flag = tr.tail_flag;
  } else {
    rep.tail_flag = diagnose(state, p).tail > kTailThreshold;
  }
  rep.reports = parallel_map(in.eps_list.size(), in.threads, [&](std::size_t i) {
    Params pe = in.params;
    pe.eps = in.eps_list[i];
    return residual_report(build_ansatz(state, pe), ansatz_rate(state, pe), in.nz);
  });
  analyse_study(rep);
  return rep;
}

}  // namespace thinsw
