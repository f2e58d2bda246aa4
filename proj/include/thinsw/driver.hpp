#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "thinsw/config.hpp"
#include "thinsw/io/report.hpp"
#include "thinsw/lagrangian.hpp"
#include "thinsw/study.hpp"
#include "thinsw/thin/elliptic.hpp"
#include "thinsw/thin/korn.hpp"
#include "thinsw/thin/probes.hpp"

namespace thinsw {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitUsage = 64,
  kExitIo = 74,
};

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Validation:
    case ErrorKind::Unsupported: return kExitValidation;
    case ErrorKind::Io: return kExitIo;
    default: return kExitNumerical;
  }
}

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"sw",    "ansatz", "residuals",  "study", "korn",
                                          "laplace", "probe", "lagrangian", "all"};
  return s;
}

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

inline Grid config_grid(const Config& c) { return Grid::make(c.domain.n, c.domain.N, c.domain.L); }

inline Params config_params(const Config& c, double eps) { return Params{c.params.F, c.params.Re, c.params.gamma_bar, eps}; }

inline SWState config_init(const Config& c) {
  return single_mode_state(config_grid(c), c.sw.amplitude, c.sw.wavenumber, c.sw.velocity_amplitude);
}

inline ojson fit_json(const FitResult& f) {
  return {{"slope", number_or_null(f.slope)},
          {"intercept", number_or_null(f.intercept)},
          {"r2", number_or_null(f.r2)},
          {"points", f.points},
          {"degenerate", f.degenerate}};
}

/// Shallow-water state at t_eval (the study's evaluation time) with the study step rule.
inline SWState state_at(const Config& c, double t) {
  const SWState init = config_init(c);
  const Params p = config_params(c, c.study.eps_list.front());
  if (t <= 0.0) return init;
  return sw_solve(init, p, t, study_step(init, p, c.sw.dt, t)).final_state();
}

}  // namespace detail

inline nlohmann::ordered_json run_sw(const Config& c, Emitter& out) {
  using detail::ojson;
  const Params p = detail::config_params(c, c.study.eps_list.front());
  const SWState init = detail::config_init(c);
  const StepBound bound = stable_dt(init, p);
  const SWTrajectory tr = sw_solve(init, p, c.sw.T, c.sw.dt, c.sw.stride);
  CsvTable diag({"t", "mass", "energy", "min_h", "max_u", "tail"});
  double max_mass_drift = 0.0, max_energy_rise = 0.0;
  for (std::size_t i = 0; i < tr.diagnostics.size(); ++i) {
    const auto& d = tr.diagnostics[i];
    if (i % std::size_t(c.sw.stride) == 0) diag.row(d.t, d.mass, d.energy, d.min_h, d.max_u, d.tail);
    max_mass_drift = std::max(max_mass_drift, std::abs(d.mass - tr.diagnostics.front().mass));
    if (i > 0) max_energy_rise = std::max(max_energy_rise, d.energy - tr.diagnostics[i - 1].energy);
  }
  const SWState& fin = tr.final_state();
  std::vector<std::string> head{"x"};
  if (c.domain.n == 2) head.push_back("y");
  head.push_back("h0");
  for (int a = 0; a < c.domain.n; ++a) head.push_back("u0_" + std::to_string(a));
  CsvTable state(head);
  for (std::size_t j = 0; j < fin.h0.size(); ++j) {
    std::vector<std::string> r{CsvTable::cell(fin.h0.point(j)[0])};
    if (c.domain.n == 2) r.push_back(CsvTable::cell(fin.h0.point(j)[1]));
    r.push_back(CsvTable::cell(fin.h0[j]));
    for (const auto& u : fin.u0) r.push_back(CsvTable::cell(u[j]));
    state.row(std::move(r));
  }
  ojson s = {{"dt", c.sw.dt},
             {"steps", long(tr.diagnostics.size()) - 1},
             {"dt_bound_advective", bound.advective},
             {"dt_bound_viscous", bound.viscous},
             {"max_mass_drift", max_mass_drift},
             {"max_energy_increase_per_step", max_energy_rise},
             {"final_min_h", fin.h0.min()},
             {"spectral_tail_flag", tr.tail_flag}};
  if (c.wants("csv")) {
    out.write_csv("sw_diagnostics.csv", diag);
    out.write_csv("sw_final_state.csv", state);
  }
  if (c.wants("json")) out.write_json("sw_summary.json", s);
  return s;
}

inline nlohmann::ordered_json run_ansatz(const Config& c, Emitter& out) {
  using detail::ojson;
  const SWState s = detail::state_at(c, c.study.t_eval);
  const double eps = c.study.eps_list.front();
  const AnsatzFields a = build_ansatz(s, detail::config_params(c, eps));
  const int n = c.domain.n;
  std::vector<std::string> head{"x"};
  if (n == 2) head.push_back("y");
  for (const char* name : {"u0", "u1", "u2"})
    for (int i = 0; i < n; ++i) head.push_back(n == 1 ? std::string(name) : std::string(name) + "_" + std::to_string(i));
  head.insert(head.end(), {"w1", "w2", "w3", "p0"});
  CsvTable t(head);
  for (std::size_t j = 0; j < s.h0.size(); ++j) {
    const Point x = s.h0.point(j);
    std::vector<std::string> r{CsvTable::cell(x[0])};
    if (n == 2) r.push_back(CsvTable::cell(x[1]));
    for (const HVec* v : {&a.u0, &a.u1, &a.u2})
      for (const auto& f : *v) r.push_back(CsvTable::cell(f[j]));
    for (const HField* f : {&a.w1, &a.w2, &a.w3, &a.p0}) r.push_back(CsvTable::cell((*f)[j]));
    t.row(std::move(r));
  }
  auto vmax = [](const HVec& v) {
    double m = 0.0;
    for (const auto& f : v) m = std::max(m, f.max_abs());
    return m;
  };
  ojson j = {{"eps", eps},         {"t", s.t},
             {"max_u0", vmax(a.u0)}, {"max_u1", vmax(a.u1)},
             {"max_u2", vmax(a.u2)}, {"max_w1", a.w1.max_abs()},
             {"max_w2", a.w2.max_abs()}, {"max_w3", a.w3.max_abs()},
             {"max_p0", a.p0.max_abs()}};
  if (c.wants("csv")) out.write_csv("ansatz_coefficients.csv", t);
  if (c.wants("json")) out.write_json("ansatz_summary.json", j);
  return j;
}

namespace detail {

inline void write_residual_tables(const std::vector<ResidualReport>& reps, Emitter& out, const std::string& prefix) {
  CsvTable norms({"eps", "kind", "component", "sup", "l2"});
  CsvTable terms({"eps", "kind", "component", "source", "eps_order", "magnitude"});
  for (const auto& r : reps) {
    for (std::size_t i = 0; i < r.interior_sup.size(); ++i)
      norms.row(r.eps, "interior", int(i), r.interior_sup[i], r.interior_l2[i]);
    norms.row(r.eps, "divergence", 0, r.divergence_sup, std::nan(""));
    norms.row(r.eps, "kinematic", 0, r.kinematic_sup, r.kinematic_l2);
    for (std::size_t i = 0; i < r.traction_sup.size(); ++i)
      norms.row(r.eps, "traction", int(i), r.traction_sup[i], r.traction_l2[i]);
    norms.row(r.eps, "bottom_vertical", 0, r.bottom_vertical_sup, std::nan(""));
    norms.row(r.eps, "bottom_slip", 0, r.bottom_slip_sup, std::nan(""));
    for (const auto& t : r.term_breakdown) terms.row(r.eps, t.kind, t.component, t.source, t.eps_order, t.magnitude);
  }
  out.write_csv(prefix + "_norms.csv", norms);
  out.write_csv(prefix + "_terms.csv", terms);
}

}  // namespace detail

inline nlohmann::ordered_json run_residuals(const Config& c, Emitter& out) {
  using detail::ojson;
  const SWState s = detail::state_at(c, c.study.t_eval);
  const auto reps = parallel_map(c.study.eps_list.size(), c.threads, [&](std::size_t i) {
    const Params p = detail::config_params(c, c.study.eps_list[i]);
    return residual_report(build_ansatz(s, p), ansatz_rate(s, p), c.study.nz);
  });
  ojson j = ojson::array();
  for (const auto& r : reps)
    j.push_back({{"eps", r.eps},
                 {"interior_sup", r.interior()},
                 {"divergence_sup", r.divergence_sup},
                 {"kinematic_sup", r.kinematic_sup},
                 {"traction_sup", r.traction()},
                 {"bottom_vertical_sup", r.bottom_vertical_sup},
                 {"bottom_slip_sup", r.bottom_slip_sup}});
  if (c.wants("csv")) detail::write_residual_tables(reps, out, "residuals");
  ojson summary = {{"t", s.t}, {"reports", j}};
  if (c.wants("json")) out.write_json("residuals_summary.json", summary);
  return summary;
}

inline nlohmann::ordered_json study_json(const StudyReport& rep) {
  using detail::ojson;
  ojson fits = ojson::object();
  for (const auto& [k, f] : rep.fits) fits[k] = detail::fit_json(f);
  ojson claims = ojson::object();
  for (const auto& k : claimed_kinds()) claims[k] = claim_holds(rep.fits.at(k));
  return {{"eps_list", rep.eps_list}, {"t_eval", rep.t_eval}, {"dt", rep.dt},   {"N", rep.n},
          {"nz", rep.nz},             {"fits", fits},         {"claims", claims}, {"flags", rep.flags},
          {"spectral_tail_flag", rep.tail_flag}};
}

inline nlohmann::ordered_json discrepancy_json(const StudyReport& rep) {
  using detail::ojson;
  auto series = [](const TermSeries& t) {
    return ojson{{"kind", t.kind},           {"component", t.component},  {"source", t.source},
                 {"eps_order", t.eps_order}, {"magnitudes", t.magnitudes}, {"fit", detail::fit_json(t.fit)}};
  };
  ojson list = ojson::array();
  for (const auto& d : rep.discrepancies) {
    ojson srcs = ojson::array();
    for (const auto& s : d.sources) srcs.push_back(series(s));
    list.push_back({{"kind", d.kind},
                    {"fit", detail::fit_json(d.fit)},
                    {"claimed_slope_band", {kClaimSlopeLow, kClaimSlopeHigh}},
                    {"dominant_term", d.dominant.kind.empty() ? ojson(nullptr) : series(d.dominant)},
                    {"sources", srcs}});
  }
  return {{"eps_list", rep.eps_list}, {"discrepancies", list}};
}

/// Writes study tables; a claim_discrepancy.json appears only when a claimed slope misses its band.
inline nlohmann::ordered_json run_study(const Config& c, Emitter& out) {
  StudyInput in;
  in.init = detail::config_init(c);
  in.params = detail::config_params(c, c.study.eps_list.front());
  in.eps_list = c.study.eps_list;
  in.t_eval = c.study.t_eval;
  in.nz = c.study.nz;
  in.dt = c.sw.dt;
  in.threads = c.threads;
  const StudyReport rep = convergence_study(in);
  if (c.wants("csv")) {
    std::vector<std::string> head{"eps"};
    for (const auto& [k, v] : rep.series) head.push_back(k);
    CsvTable norms(head);
    for (std::size_t i = 0; i < rep.eps_list.size(); ++i) {
      std::vector<std::string> r{CsvTable::cell(rep.eps_list[i])};
      for (const auto& [k, v] : rep.series) r.push_back(CsvTable::cell(v[i]));
      norms.row(std::move(r));
    }
    out.write_csv("study_norms.csv", norms);
    CsvTable fits({"series", "slope", "intercept", "r2", "points", "degenerate"});
    for (const auto& [k, f] : rep.fits) fits.row(k, f.slope, f.intercept, f.r2, f.points, f.degenerate);
    out.write_csv("study_fits.csv", fits);
    CsvTable terms({"kind", "component", "source", "eps_order", "slope", "r2", "magnitude_smallest_eps"});
    for (const auto& t : rep.terms)
      terms.row(t.kind, t.component, t.source, t.eps_order, t.fit.slope, t.fit.r2, t.magnitudes.back());
    out.write_csv("study_terms.csv", terms);
    detail::write_residual_tables(rep.reports, out, "study_residuals");
  }
  const auto j = study_json(rep);
  if (c.wants("json")) out.write_json("study_summary.json", j);
  if (!rep.discrepancies.empty()) out.write_json("claim_discrepancy.json", discrepancy_json(rep));
  return j;
}

inline nlohmann::ordered_json run_korn(const Config& c, Emitter& out) {
  using detail::ojson;
  const auto Ms = log_grid(c.korn.M_min, c.korn.M_max, c.korn.M_count);
  const auto sig = direction_grid(c.domain.n, c.korn.sigma_count);
  const KornSweep sw = korn_sweep(Ms, sig, c.threads, c.korn.quad_nodes);
  CsvTable t({"M", "c", "s", "lambda", "eig1", "eig2", "eig3", "eig4", "eig5", "eig6", "mult_one", "has_two",
              "cond_flag"});
  int structure_ok = 0;
  for (const auto& cell : sw.cells) {
    std::vector<std::string> r{CsvTable::cell(cell.M), CsvTable::cell(cell.sigma.c), CsvTable::cell(cell.sigma.s),
                               CsvTable::cell(cell.failed ? std::nan("") : cell.Lambda)};
    for (int i = 0; i < 6; ++i) r.push_back(CsvTable::cell(cell.failed ? std::nan("") : cell.spectrum[i]));
    // spectrum[0] is Lambda; it may join the unit cluster at small M
    int ones = 0;
    bool two = false;
    const double tol = cell.M < 0.1 ? 1e-4 : kClusterTol;
    for (int i = 1; i < 6 && !cell.failed; ++i) {
      if (std::abs(cell.spectrum[i] - 1.0) <= tol) ++ones;
      if (std::abs(cell.spectrum[i] - 2.0) <= 2.0 * tol) two = true;
    }
    if (ones == 4 && two) ++structure_ok;
    r.push_back(CsvTable::cell(ones));
    r.push_back(CsvTable::cell(two));
    r.push_back(CsvTable::cell(cell.failed));
    t.row(std::move(r));
  }
  ojson j = {{"M_min", c.korn.M_min},
             {"M_max", c.korn.M_max},
             {"M_count", c.korn.M_count},
             {"directions", sig.size()},
             {"infimum", detail::number_or_null(sw.infimum)},
             {"argmin", {{"M", sw.argmin_M}, {"c", sw.argmin_sigma.c}, {"s", sw.argmin_sigma.s}}},
             {"max_jump", sw.max_jump},
             {"failures", sw.failures},
             {"cells_with_structure", structure_ok},
             {"cells", sw.cells.size()}};
  if (c.wants("csv")) out.write_csv("korn_sweep.csv", t);
  if (c.wants("json")) out.write_json("korn_summary.json", j);
  return j;
}

inline nlohmann::ordered_json run_laplace(const Config& c, Emitter& out) {
  using detail::ojson;
  CsvTable t({"k", "eps", "problem", "sup_error", "ratio", "expected_ratio"});
  double worst_err = 0.0, worst_ratio = 0.0;
  for (int k = 1; k <= c.laplace.k_max; ++k)
    for (double eps : c.laplace.eps_list) {
      const auto d = mode_pressure_dirichlet_top(k, eps, 1.0, c.laplace.nz);
      const auto n = mode_pressure_neumann_bottom(k, eps, 1.0, c.laplace.nz);
      const double td = std::tanh(k * eps), tn = std::tanh(k * eps) / (k * eps);
      t.row(k, eps, "dirichlet_top", d.sup_error, d.ratio, td);
      t.row(k, eps, "neumann_bottom", n.sup_error, n.ratio, tn);
      worst_err = std::max({worst_err, d.sup_error, n.sup_error});
      worst_ratio = std::max(worst_ratio, std::abs(d.ratio - td));
    }
  CsvTable lift({"eps", "grad_ratio", "h2_ratio", "projected_mean", "residual"});
  const Grid g = detail::config_grid(c);
  for (double eps : c.laplace.eps_list) {
    ThinField h = ThinField::flat(g, eps, c.laplace.nz);
    const auto zeta = h.zeta();
    for (std::size_t j = 0; j < g.size(); ++j)
      for (int m = 0; m < h.nz; ++m) {
        const Point x = h.depth.point(j);
        h.at(0, j, m) = std::cos(x[0]) * (1.0 + zeta[m]) + 0.5 * std::sin(2.0 * x[0]) * zeta[m] * zeta[m];
      }
    const auto r = divergence_lift(h);
    lift.row(eps, r.grad_ratio, r.h2_ratio, r.projected, r.residual);
  }
  ojson j = {{"k_max", c.laplace.k_max},
             {"eps_list", c.laplace.eps_list},
             {"max_profile_error", worst_err},
             {"max_dirichlet_ratio_error", worst_ratio}};
  if (c.wants("csv")) {
    out.write_csv("laplace_modes.csv", t);
    out.write_csv("laplace_lift.csv", lift);
  }
  if (c.wants("json")) out.write_json("laplace_summary.json", j);
  return j;
}

inline nlohmann::ordered_json run_probe(const Config& c, Emitter& out) {
  using detail::ojson;
  CsvTable t({"tag", "eps", "n_samples", "skipped", "max_ratio", "min_ratio"});
  ojson j = ojson::object();
  for (const auto& name : c.probes.tags) {
    const ProbeReport r = anisotropy_probe(parse_probe_tag(name), c.probes.eps_list, c.probes.samples, c.probes.seed,
                                           c.params.gamma_bar, c.threads);
    for (const auto& s : r.per_eps) t.row(name, s.eps, s.samples, s.skipped, s.max_ratio, s.min_ratio);
    j[name] = {{"variation", detail::number_or_null(r.variation)}, {"bounded", r.bounded}};
  }
  if (c.wants("csv")) out.write_csv("probes.csv", t);
  if (c.wants("json")) out.write_json("probes_summary.json", j);
  return j;
}

inline nlohmann::ordered_json run_lagrangian(const Config& c, Emitter& out) {
  using detail::ojson;
  const Params p = detail::config_params(c, c.lagrangian.eps);
  const SWState init = detail::config_init(c);
  const SWTrajectory tr = sw_solve(init, p, c.sw.T, c.sw.dt, c.sw.stride);
  const Chart chart = integrate_chart(tr, c.lagrangian.eps, c.lagrangian.nz);
  const auto rep = chart_identities(chart, tr);
  std::vector<std::string> head{"t", "x0"};
  if (c.domain.n == 2) head.push_back("y0");
  head.push_back("X0");
  if (c.domain.n == 2) head.push_back("Y0");
  head.insert(head.end(), {"Z0_over_z0", "det_h0_minus_1"});
  CsvTable t(head);
  const HField& h_init = tr.states.front().h0;
  for (std::size_t k = 0; k < chart.times.size(); k += std::size_t(c.lagrangian.csv_stride)) {
    const auto grad = detail::flow_gradient(chart, k);
    const Spectrum hs = spectrum(tr.states[k].h0);
    for (std::size_t j = 0; j < chart.grid.size(); ++j) {
      const Point x0 = h_init.point(j), X = chart.position(k, j);
      std::vector<std::string> r{CsvTable::cell(chart.times[k]), CsvTable::cell(x0[0])};
      if (c.domain.n == 2) r.push_back(CsvTable::cell(x0[1]));
      r.push_back(CsvTable::cell(X[0]));
      if (c.domain.n == 2) r.push_back(CsvTable::cell(X[1]));
      r.push_back(CsvTable::cell(chart.Z[k].back()[j] / chart.z0.back()));
      r.push_back(CsvTable::cell(grad[j].determinant() * interpolate(hs, X) / h_init[j] - 1.0));
      t.row(std::move(r));
    }
  }
  ojson j = {{"eps", c.lagrangian.eps},
             {"dt", tr.stored_dt()},
             {"T", c.sw.T},
             {"flat_start", rep.flat_start},
             {"z_residual", rep.z_abs},
             {"z_residual_relative", rep.z_rel},
             {"det_residual", rep.det_abs},
             {"z_residual_unnormalized", rep.z_abs_literal},
             {"det_residual_unnormalized", rep.det_abs_literal}};
  if (!c.lagrangian.dt_list.empty()) {
    std::vector<double> zr, dr;
    for (double dt : c.lagrangian.dt_list) {
      const SWTrajectory trd = sw_solve(init, p, c.sw.T, dt);
      const auto r = chart_identities(integrate_chart(trd, c.lagrangian.eps, c.lagrangian.nz), trd);
      zr.push_back(r.z_abs);
      dr.push_back(r.det_abs);
    }
    j["dt_series"] = {{"dt", c.lagrangian.dt_list},
                      {"z_residual", zr},
                      {"det_residual", dr},
                      {"z_fit", detail::fit_json(fit_loglog(c.lagrangian.dt_list, zr))},
                      {"det_fit", detail::fit_json(fit_loglog(c.lagrangian.dt_list, dr))}};
  }
  if (c.wants("csv")) out.write_csv("lagrangian_chart.csv", t);
  if (c.wants("json")) out.write_json("lagrangian_summary.json", j);
  return j;
}

/// Runs one subcommand (or all) and writes the manifest.
inline nlohmann::ordered_json run(const std::string& sub, const Config& c) {
  using detail::ojson;
  Emitter out(c.output.dir);
  ojson j = ojson::object();
  auto want = [&](const char* s) { return sub == s || sub == "all"; };
  if (want("sw")) j["sw"] = run_sw(c, out);
  if (want("ansatz")) j["ansatz"] = run_ansatz(c, out);
  if (want("residuals")) j["residuals"] = run_residuals(c, out);
  if (want("study")) j["study"] = run_study(c, out);
  if (want("korn")) j["korn"] = run_korn(c, out);
  if (want("laplace")) j["laplace"] = run_laplace(c, out);
  if (want("probe")) j["probe"] = run_probe(c, out);
  if (want("lagrangian")) j["lagrangian"] = run_lagrangian(c, out);
  out.finish(to_json(c), sub);
  return j;
}

}  // namespace thinsw
