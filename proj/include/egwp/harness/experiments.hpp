#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "egwp/harness/config.hpp"

namespace egwp::harness {

enum class RunStatus { ok, blow_up, unresolved };

const char* to_string(RunStatus s);

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Everything an experiment produces besides its files.
struct ExperimentResult {
  std::vector<std::pair<std::string, RunStatus>> runs;
  std::vector<Assertion> assertions;
  std::vector<std::pair<std::string, double>> metrics;
  /// Paths relative to the output directory, in write order.
  std::vector<std::string> files;

  void check(const std::string& name, bool passed, const std::string& detail = {});
  void metric(const std::string& name, double value);
  bool all_passed() const;
};

/// Output sink handed to experiments; files land in the config's output dir.
class OutputSink {
 public:
  OutputSink(std::filesystem::path dir, ExperimentResult& result);
  /// Opens dir/name for writing and records it.
  std::ofstream open(const std::string& name);
  std::filesystem::path path_for(const std::string& name);

 private:
  std::filesystem::path dir_;
  ExperimentResult& result_;
};

using ExperimentFn = std::function<void(const ExperimentConfig&, OutputSink&, ExperimentResult&)>;

struct ExperimentInfo {
  std::string name;
  std::string summary;
  /// Tolerance keys the experiment reads, with their defaults as text.
  std::map<std::string, std::string> tolerances;
  ExperimentFn fn;
};

const std::vector<ExperimentInfo>& experiments();
/// nullptr for an unknown name.
const ExperimentInfo* find_experiment(const std::string& name);

}  // namespace egwp::harness
