#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "thinsw/errors.hpp"

namespace thinsw {

struct Config {
  struct Domain {
    int n = 1;
    int N = 32;
    double L = 6.283185307179586;
  } domain;
  struct Physical {
    double F = 1.0, Re = 1.0, gamma_bar = 1.0;
  } params;
  struct SW {
    double amplitude = 0.05, wavenumber = 1.0, velocity_amplitude = 0.0;
    double T = 1.0, dt = 1e-3;
    int stride = 1;
  } sw;
  struct Study {
    std::vector<double> eps_list{0.1, 0.05, 0.025, 0.0125};
    double t_eval = 0.5;
    int nz = 16;
  } study;
  struct Korn {
    double M_min = 0.01, M_max = 50.0;
    int M_count = 40;
    int sigma_count = 8;
    int quad_nodes = 64;
  } korn;
  struct Laplace {
    int k_max = 8;
    std::vector<double> eps_list{0.1, 0.01, 0.001};
    int nz = 24;
  } laplace;
  struct Probes {
    std::vector<double> eps_list{0.1, 0.01, 0.001};
    int samples = 64;
    std::uint64_t seed = 20240601;
    std::vector<std::string> tags{"L6", "Agmon", "trace_zero", "trace_general", "korn"};
  } probes;
  struct Lagrangian {
    double eps = 0.1;
    int nz = 8;
    int csv_stride = 100;           // chart rows written every csv_stride steps
    std::vector<double> dt_list{};  // optional dt-halving series on the sw setup
  } lagrangian;
  struct Output {
    std::string dir = "out";
    std::vector<std::string> formats{"csv", "json"};
  } output;
  int threads = 1;

  bool wants(const std::string& format) const {
    for (const auto& f : output.formats)
      if (f == format) return true;
    return false;
  }
};

inline nlohmann::ordered_json to_json(const Config& c) {
  nlohmann::ordered_json j;
  j["domain"] = {{"n", c.domain.n}, {"N", c.domain.N}, {"L", c.domain.L}};
  j["params"] = {{"F", c.params.F}, {"Re", c.params.Re}, {"gamma_bar", c.params.gamma_bar}};
  j["sw"] = {{"init",
              {{"amplitude", c.sw.amplitude},
               {"wavenumber", c.sw.wavenumber},
               {"velocity_amplitude", c.sw.velocity_amplitude}}},
             {"T", c.sw.T},
             {"dt", c.sw.dt},
             {"stride", c.sw.stride}};
  j["study"] = {{"eps_list", c.study.eps_list}, {"t_eval", c.study.t_eval}, {"nz", c.study.nz}};
  j["korn"] = {{"M_min", c.korn.M_min},
               {"M_max", c.korn.M_max},
               {"M_count", c.korn.M_count},
               {"sigma_count", c.korn.sigma_count},
               {"quad_nodes", c.korn.quad_nodes}};
  j["laplace"] = {{"k_max", c.laplace.k_max}, {"eps_list", c.laplace.eps_list}, {"nz", c.laplace.nz}};
  j["probes"] = {{"eps_list", c.probes.eps_list},
                 {"samples", c.probes.samples},
                 {"seed", c.probes.seed},
                 {"tags", c.probes.tags}};
  j["lagrangian"] = {{"eps", c.lagrangian.eps},
                     {"nz", c.lagrangian.nz},
                     {"csv_stride", c.lagrangian.csv_stride},
                     {"dt_list", c.lagrangian.dt_list}};
  j["output"] = {{"dir", c.output.dir}, {"formats", c.output.formats}};
  j["threads"] = c.threads;
  return j;
}

namespace detail {

/// Reads known keys from a JSON object and records every problem instead of stopping.
class ConfigReader {
 public:
  explicit ConfigReader(std::vector<std::string>& out) : out_(out) {}

  void fail(const std::string& path, const std::string& msg) { out_.push_back(path + ": " + msg); }

  bool object(const nlohmann::json& j, const std::string& path, const std::vector<std::string>& keys) {
    if (!j.is_object()) {
      fail(path, "must be an object");
      return false;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (const auto& k : keys) known = known || k == it.key();
      if (!known) fail(join(path, it.key()), "unknown key");
    }
    return true;
  }

  void number(const nlohmann::json& j, const std::string& key, const std::string& path, double& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) return fail(join(path, key), "must be a number");
    dst = v.get<double>();
    if (!std::isfinite(dst)) fail(join(path, key), "must be finite");
  }

  void integer(const nlohmann::json& j, const std::string& key, const std::string& path, int& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) return fail(join(path, key), "must be an integer");
    dst = v.get<int>();
  }

  void seed(const nlohmann::json& j, const std::string& key, const std::string& path, std::uint64_t& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) return fail(join(path, key), "must be a non-negative integer");
    dst = v.get<std::uint64_t>();
  }

  void text(const nlohmann::json& j, const std::string& key, const std::string& path, std::string& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_string()) return fail(join(path, key), "must be a string");
    dst = v.get<std::string>();
  }

  void numbers(const nlohmann::json& j, const std::string& key, const std::string& path, std::vector<double>& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array()) return fail(join(path, key), "must be an array of numbers");
    std::vector<double> tmp;
    for (const auto& x : v) {
      if (!x.is_number()) return fail(join(path, key), "must be an array of numbers");
      tmp.push_back(x.get<double>());
    }
    dst = tmp;
  }

  void texts(const nlohmann::json& j, const std::string& key, const std::string& path, std::vector<std::string>& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array()) return fail(join(path, key), "must be an array of strings");
    std::vector<std::string> tmp;
    for (const auto& x : v) {
      if (!x.is_string()) return fail(join(path, key), "must be an array of strings");
      tmp.push_back(x.get<std::string>());
    }
    dst = tmp;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  std::vector<std::string>& out_;
};

inline bool power_of_two(int n) { return n >= 8 && (n & (n - 1)) == 0; }

inline void check_eps_list(const std::vector<double>& v, const std::string& path, std::size_t min_size,
                           std::vector<std::string>& out) {
  if (v.size() < min_size) out.push_back(path + ": needs at least " + std::to_string(min_size) + " entries");
  for (double e : v)
    if (!(e > 0.0 && e < 1.0)) {
      out.push_back(path + ": entries must lie in (0, 1)");
      break;
    }
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) {
      out.push_back(path + ": eps_list must be strictly decreasing");
      break;
    }
}

}  // namespace detail

/// Range checks on a parsed config; returns every violation.
inline std::vector<std::string> check_config(const Config& c) {
  std::vector<std::string> v;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) v.push_back(msg);
  };
  need(c.domain.n == 1 || c.domain.n == 2, "domain.n: must be 1 or 2");
  need(detail::power_of_two(c.domain.N), "domain.N: must be a power of two >= 8");
  need(c.domain.L > 0.0, "domain.L: must be positive");
  need(c.params.F > 0.0, "params.F: must be positive");
  need(c.params.Re > 0.0, "params.Re: must be positive");
  need(c.params.gamma_bar >= 0.0, "params.gamma_bar: must be >= 0");
  need(std::abs(c.sw.amplitude) < 0.9, "sw.init.amplitude: |a| must be < 0.9 to keep the depth above the vacuum guard");
  need(c.sw.wavenumber >= 0.0 && std::floor(c.sw.wavenumber) == c.sw.wavenumber,
       "sw.init.wavenumber: must be a non-negative integer");
  need(c.sw.wavenumber <= c.domain.N / 3, "sw.init.wavenumber: must be resolved (<= N/3)");
  need(c.sw.T > 0.0, "sw.T: must be positive");
  need(c.sw.dt > 0.0, "sw.dt: must be positive");
  need(c.sw.stride >= 1, "sw.stride: must be >= 1");
  detail::check_eps_list(c.study.eps_list, "study.eps_list", 4, v);
  need(c.study.t_eval >= 0.0, "study.t_eval: must be >= 0");
  need(c.study.nz >= 4, "study.nz: must be >= 4");
  need(c.korn.M_min >= 1e-2 && c.korn.M_max <= 50.0 && c.korn.M_min < c.korn.M_max,
       "korn: need 1e-2 <= M_min < M_max <= 50");
  need(c.korn.M_count >= 2, "korn.M_count: must be >= 2");
  need(c.korn.sigma_count >= 1, "korn.sigma_count: must be >= 1");
  need(c.korn.quad_nodes >= 64, "korn.quad_nodes: must be >= 64");
  need(c.laplace.k_max >= 1, "laplace.k_max: must be >= 1");
  detail::check_eps_list(c.laplace.eps_list, "laplace.eps_list", 1, v);
  need(c.laplace.nz >= 4, "laplace.nz: must be >= 4");
  detail::check_eps_list(c.probes.eps_list, "probes.eps_list", 1, v);
  need(c.probes.samples >= 50, "probes.samples: must be >= 50");
  for (const auto& t : c.probes.tags)
    need(t == "L6" || t == "Agmon" || t == "trace_zero" || t == "trace_general" || t == "korn",
         "probes.tags: unknown tag '" + t + "'");
  need(c.lagrangian.eps > 0.0, "lagrangian.eps: must be positive");
  need(c.lagrangian.nz >= 2, "lagrangian.nz: must be >= 2");
  need(c.lagrangian.csv_stride >= 1, "lagrangian.csv_stride: must be >= 1");
  for (std::size_t i = 0; i < c.lagrangian.dt_list.size(); ++i) {
    need(c.lagrangian.dt_list[i] > 0.0, "lagrangian.dt_list: entries must be positive");
    if (i > 0) need(c.lagrangian.dt_list[i] < c.lagrangian.dt_list[i - 1], "lagrangian.dt_list: must be strictly decreasing");
  }
  need(c.lagrangian.dt_list.empty() || c.lagrangian.dt_list.size() >= 3, "lagrangian.dt_list: needs 0 or >= 3 entries");
  need(!c.output.dir.empty(), "output.dir: must not be empty");
  for (const auto& f : c.output.formats) need(f == "csv" || f == "json", "output.formats: unknown format '" + f + "'");
  need(c.threads >= 1, "threads: must be >= 1");
  return v;
}

struct ConfigLoad {
  Config config;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Parses JSON text into a config on top of the defaults; collects every violation.
inline ConfigLoad parse_config(const std::string& text) {
  ConfigLoad r;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + std::ptrdiff_t(upto), '\n');
    r.violations.push_back("parse error at line " + std::to_string(line) + ": " + e.what());
    return r;
  }
  detail::ConfigReader rd(r.violations);
  Config& c = r.config;
  if (!rd.object(j, "config", {"domain", "params", "sw", "study", "korn", "laplace", "probes", "lagrangian", "output",
                               "threads"}))
    return r;
  if (j.contains("domain") && rd.object(j["domain"], "domain", {"n", "N", "L"})) {
    rd.integer(j["domain"], "n", "domain", c.domain.n);
    rd.integer(j["domain"], "N", "domain", c.domain.N);
    rd.number(j["domain"], "L", "domain", c.domain.L);
  }
  if (j.contains("params") && rd.object(j["params"], "params", {"F", "Re", "gamma_bar"})) {
    rd.number(j["params"], "F", "params", c.params.F);
    rd.number(j["params"], "Re", "params", c.params.Re);
    rd.number(j["params"], "gamma_bar", "params", c.params.gamma_bar);
  }
  if (j.contains("sw") && rd.object(j["sw"], "sw", {"init", "T", "dt", "stride"})) {
    const auto& s = j["sw"];
    if (s.contains("init") && rd.object(s["init"], "sw.init", {"amplitude", "wavenumber", "velocity_amplitude"})) {
      rd.number(s["init"], "amplitude", "sw.init", c.sw.amplitude);
      rd.number(s["init"], "wavenumber", "sw.init", c.sw.wavenumber);
      rd.number(s["init"], "velocity_amplitude", "sw.init", c.sw.velocity_amplitude);
    }
    rd.number(s, "T", "sw", c.sw.T);
    rd.number(s, "dt", "sw", c.sw.dt);
    rd.integer(s, "stride", "sw", c.sw.stride);
  }
  if (j.contains("study") && rd.object(j["study"], "study", {"eps_list", "t_eval", "nz"})) {
    rd.numbers(j["study"], "eps_list", "study", c.study.eps_list);
    rd.number(j["study"], "t_eval", "study", c.study.t_eval);
    rd.integer(j["study"], "nz", "study", c.study.nz);
  }
  if (j.contains("korn") && rd.object(j["korn"], "korn", {"M_min", "M_max", "M_count", "sigma_count", "quad_nodes"})) {
    rd.number(j["korn"], "M_min", "korn", c.korn.M_min);
    rd.number(j["korn"], "M_max", "korn", c.korn.M_max);
    rd.integer(j["korn"], "M_count", "korn", c.korn.M_count);
    rd.integer(j["korn"], "sigma_count", "korn", c.korn.sigma_count);
    rd.integer(j["korn"], "quad_nodes", "korn", c.korn.quad_nodes);
  }
  if (j.contains("laplace") && rd.object(j["laplace"], "laplace", {"k_max", "eps_list", "nz"})) {
    rd.integer(j["laplace"], "k_max", "laplace", c.laplace.k_max);
    rd.numbers(j["laplace"], "eps_list", "laplace", c.laplace.eps_list);
    rd.integer(j["laplace"], "nz", "laplace", c.laplace.nz);
  }
  if (j.contains("probes") && rd.object(j["probes"], "probes", {"eps_list", "samples", "seed", "tags"})) {
    rd.numbers(j["probes"], "eps_list", "probes", c.probes.eps_list);
    rd.integer(j["probes"], "samples", "probes", c.probes.samples);
    rd.seed(j["probes"], "seed", "probes", c.probes.seed);
    rd.texts(j["probes"], "tags", "probes", c.probes.tags);
  }
  if (j.contains("lagrangian") && rd.object(j["lagrangian"], "lagrangian", {"eps", "nz", "csv_stride", "dt_list"})) {
    rd.number(j["lagrangian"], "eps", "lagrangian", c.lagrangian.eps);
    rd.integer(j["lagrangian"], "nz", "lagrangian", c.lagrangian.nz);
    rd.integer(j["lagrangian"], "csv_stride", "lagrangian", c.lagrangian.csv_stride);
    rd.numbers(j["lagrangian"], "dt_list", "lagrangian", c.lagrangian.dt_list);
  }
  if (j.contains("output") && rd.object(j["output"], "output", {"dir", "formats"})) {
    rd.text(j["output"], "dir", "output", c.output.dir);
    rd.texts(j["output"], "formats", "output", c.output.formats);
  }
  rd.integer(j, "threads", "", c.threads);
  for (auto& msg : check_config(c)) r.violations.push_back(std::move(msg));
  return r;
}

inline ConfigLoad load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// All violations of the file at `path`; empty means valid. Never runs numerics.
inline std::vector<std::string> validate_config(const std::string& path) { return load_config(path).violations; }

}  // namespace thinsw
