#include <fmt/format.h>

#include <iostream>

#include "CLI11.hpp"
#include "egwp/harness/config.hpp"
#include "egwp/harness/experiments.hpp"
#include "egwp/harness/runner.hpp"

using namespace egwp::harness;

namespace {

int run(const std::string& config_path, const std::string& out, int threads, long long seed) {
  ExperimentConfig config;
  try {
    config = load_config(config_path);
    if (!out.empty()) apply_override(config, "output.dir", out);
    if (threads > 0) apply_override(config, "experiment.threads", std::to_string(threads));
    if (seed >= 0) apply_override(config, "experiment.seed", std::to_string(seed));
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return exit_config;
  }
  ExperimentResult result;
  const RunManifest m = cmd_run(config, &result);
  for (const auto& a : result.assertions)
    std::cout << fmt::format("{:<4} {}{}\n", a.passed ? "ok" : "FAIL", a.name, a.detail.empty() ? "" : "  " + a.detail);
  if (!m.get("error").empty()) std::cerr << "error: " << m.get("error") << '\n';
  std::cout << fmt::format("{}: {} ({}s) -> {}\n", config.experiment, m.get("status"), m.get("wall_clock_seconds"),
                           (config.output_dir / "manifest.txt").string());
  return m.exit_code;
}

void list() {
  for (const auto& e : experiments()) {
    std::cout << e.name << "\n    " << e.summary << '\n';
    for (const auto& [key, value] : e.tolerances) std::cout << fmt::format("    tolerance.{} = {}\n", key, value);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Euler / Navier-Stokes experiments on the 2D torus"};
  app.require_subcommand(1);

  std::string config_path, out;
  int threads = 0;
  long long seed = -1;
  auto* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
  run_cmd->add_option("--config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out, "output directory (overrides output.dir)");
  run_cmd->add_option("--threads", threads, "worker threads for particle tracking")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "random seed (overrides experiment.seed)")->check(CLI::NonNegativeNumber);

  std::string golden = "golden", verify_out = "verify_out";
  double rel = 1e-8, abs = 1e-12;
  auto* verify_cmd = app.add_subcommand("verify", "re-run golden experiments and compare outputs");
  verify_cmd->add_option("golden", golden, "golden directory")->capture_default_str();
  verify_cmd->add_option("--out", verify_out, "directory for the fresh runs")->capture_default_str();
  verify_cmd->add_option("--rel-tol", rel, "relative tolerance per CSV cell")->capture_default_str();
  verify_cmd->add_option("--abs-tol", abs, "absolute tolerance per CSV cell")->capture_default_str();

  auto* list_cmd = app.add_subcommand("list-experiments", "list experiments and their tolerance keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  if (*run_cmd) return run(config_path, out, threads, seed);
  if (*verify_cmd) return cmd_verify(golden, verify_out, std::cout, {rel, abs});
  if (*list_cmd) list();
  return exit_ok;
}
