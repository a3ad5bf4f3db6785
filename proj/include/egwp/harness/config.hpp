#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace egwp::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed experiment configuration. Files are INI text:
///
///   [experiment]  name, seed, threads
///   [grid]        N, M
///   [time]        T, dt, store_every
///   [scheme]      nu, kappa, galerkin_n, reference_n, max_resolution,
///                 epsilon, pairs, k, C, training_runs, heldout_runs
///   [initial]     field (taylor_green | shear | random), kmax, slope, l2_norm
///   [output]      dir
///   [tolerance]   per-experiment keys, see list-experiments
///
/// Lists are comma separated. Keys not listed above are rejected.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  int threads = 1;

  int n = 64;
  int particles = 64;

  double T = 1.0;
  double dt = 1e-3;
  int store_every = 10;

  std::vector<double> nu;
  std::vector<double> kappa;
  std::vector<int> galerkin_n;
  int reference_n = 64;
  int max_resolution = 128;
  std::vector<double> epsilon;
  int pairs = 20;
  std::vector<int> k;
  std::vector<double> C;
  int training_runs = 10;
  int heldout_runs = 20;

  std::string field = "taylor_green";
  int kmax = 4;
  double slope = 1.0;
  double l2_norm = 0.0;

  std::filesystem::path output_dir = "out";
  std::map<std::string, double> tolerance;

  /// section.key=value for every key given, in file order, for the manifest.
  std::vector<std::pair<std::string, std::string>> echo;

  /// Override value, or the fallback when the key was not given.
  double tol(const std::string& key, double fallback) const;
};

/// Throws ConfigError on syntax errors, unknown sections or keys, bad
/// values, unknown experiments and tolerance keys the experiment does not
/// declare.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes the config back in the same INI form (round-trips parse_config).
std::string to_ini(const ExperimentConfig& config);

/// Sets one section.key (not tolerance.*) as if it had been in the file,
/// replacing any earlier value, and revalidates.
void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value);

}  // namespace egwp::harness
