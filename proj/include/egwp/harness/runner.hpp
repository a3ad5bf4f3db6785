#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "egwp/harness/config.hpp"
#include "egwp/harness/experiments.hpp"

namespace egwp::harness {

enum ExitCode : int { exit_ok = 0, exit_assertion = 1, exit_config = 2, exit_blow_up = 3 };

/// Written as manifest.txt, one key=value per line:
///
///   format=1
///   experiment=<name>
///   config.<section>.<key>=<value>     (as given)
///   version.egwp / version.fftw / version.compiler
///   wall_clock_seconds=<float>
///   status=ok | blow_up | unresolved | assertion_failed | error
///   run.<label>=ok | blow_up | unresolved
///   assertion.<name>=pass | fail
///   metric.<name>=<float>
///   error=<message>                    (only when aborted)
///   file.<relative path>=<sha256 hex>
///
/// Lines other than version.*, wall_clock_seconds and metric.* are
/// deterministic for a given config.
struct RunManifest {
  std::vector<std::pair<std::string, std::string>> entries;
  int exit_code = exit_ok;

  std::string get(const std::string& key) const;
  void write(std::ostream& os) const;
};

RunManifest read_manifest(const std::filesystem::path& path);

/// Runs the configured experiment into config.output_dir and writes
/// config.ini plus manifest.txt there, also when the run aborts.
RunManifest cmd_run(const ExperimentConfig& config, ExperimentResult* result = nullptr);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct VerifyOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
};

/// Re-runs every golden_dir/<experiment>/config.ini into out_dir and
/// compares: golden file hashes against the golden manifest, CSV columns
/// and snapshot samples within tolerance, deterministic manifest fields
/// exactly. Returns exit_ok when nothing drifted; the report lists every
/// problem found.
int cmd_verify(const std::filesystem::path& golden_dir, const std::filesystem::path& out_dir, std::ostream& report,
               const VerifyOptions& options = {});

}  // namespace egwp::harness
