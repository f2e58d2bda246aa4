#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "thinsw/driver.hpp"

namespace {

int run_command(const std::string& sub, const std::string& config_path, const std::string& out_dir, int threads) {
  using namespace thinsw;
  ConfigLoad load;
  if (config_path.empty()) {
    load.violations = check_config(load.config);
  } else {
    load = load_config(config_path);
  }
  if (sub == "validate") {
    for (const auto& v : load.violations) std::cout << v << "\n";
    return load.ok() ? kExitOk : kExitValidation;
  }
  if (!load.ok()) {
    for (const auto& v : load.violations) std::cerr << "config: " << v << "\n";
    return kExitValidation;
  }
  Config c = load.config;
  if (!out_dir.empty()) c.output.dir = out_dir;
  if (threads > 0) c.threads = threads;
  run(sub, c);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thin-layer shallow-water verification driver"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int threads = 0;
  std::vector<std::string> names = thinsw::subcommands();
  names.push_back("validate");
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file (defaults apply when omitted)");
    if (name != "validate") {
      sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
      sub->add_option("--threads", threads, "worker threads (overrides threads)")->check(CLI::Range(1, 256));
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : thinsw::kExitUsage;
  }
  try {
    return run_command(app.get_subcommands().front()->get_name(), config_path, out_dir, threads);
  } catch (const thinsw::Error& e) {
    std::cerr << "thinsw: " << e.what();
    if (e.time()) std::cerr << " (t=" << *e.time() << ")";
    std::cerr << "\n";
    return thinsw::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "thinsw: " << e.what() << "\n";
    return thinsw::kExitNumerical;
  }
}
