#include "egwp/harness/runner.hpp"

#include <fftw3.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "egwp/error.hpp"
#include "egwp/spectral/snapshot.hpp"

#ifndef EGWP_VERSION
#define EGWP_VERSION "unknown"
#endif

namespace egwp::harness {

namespace fs = std::filesystem;

std::string RunManifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return {};
}

void RunManifest::write(std::ostream& os) const {
  for (const auto& [k, v] : entries) os << k << '=' << v << '\n';
}

RunManifest read_manifest(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  RunManifest m;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("malformed manifest line: " + line);
    m.entries.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return m;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

RunManifest cmd_run(const ExperimentConfig& config, ExperimentResult* result) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult local;
  ExperimentResult& res = result ? *result : local;
  res = {};
  fs::create_directories(config.output_dir);
  OutputSink sink(config.output_dir, res);
  ExperimentConfig portable = config;
  std::erase_if(portable.echo, [](const auto& kv) { return kv.first == "output.dir"; });
  sink.open("config.ini") << to_ini(portable);

  std::string status = "ok", error;
  bool blew_up = false;
  try {
    const ExperimentInfo* info = find_experiment(config.experiment);
    if (!info) throw ConfigError("unknown experiment " + config.experiment);
    info->fn(config, sink, res);
  } catch (const BlowUp& e) {
    blew_up = true;
    status = "blow_up";
    error = fmt::format("{} (last valid time {})", e.what(), e.last_valid_time());
    res.runs.emplace_back("aborted", RunStatus::blow_up);
  } catch (const std::exception& e) {
    status = "error";
    error = e.what();
  }
  if (status == "ok") {
    if (std::any_of(res.runs.begin(), res.runs.end(), [](const auto& r) { return r.second != RunStatus::ok; }))
      status = "unresolved";
    else if (!res.all_passed())
      status = "assertion_failed";
  }

  RunManifest m;
  auto add = [&](std::string k, std::string v) { m.entries.emplace_back(std::move(k), std::move(v)); };
  add("format", "1");
  add("experiment", config.experiment);
  for (const auto& [k, v] : config.echo) add("config." + k, v);
  add("version.egwp", EGWP_VERSION);
  add("version.fftw", fftw_version);
  add("version.compiler", __VERSION__);
  add("wall_clock_seconds",
      fmt::format("{:.3f}", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()));
  add("status", status);
  for (const auto& [label, s] : res.runs) add("run." + label, to_string(s));
  for (const auto& a : res.assertions) {
    add("assertion." + a.name, a.passed ? "pass" : "fail");
    if (!a.detail.empty()) add("detail." + a.name, a.detail);
  }
  for (const auto& [name, value] : res.metrics) add("metric." + name, fmt::format("{:.17g}", value));
  if (!error.empty()) add("error", error);
  for (const auto& f : res.files)
    if (fs::exists(config.output_dir / f)) add("file." + f, sha256_file(config.output_dir / f));

  m.exit_code = status == "ok" ? exit_ok : blew_up ? exit_blow_up : exit_assertion;
  std::ofstream os(config.output_dir / "manifest.txt");
  os << "# egwp run manifest\n";
  m.write(os);
  return m;
}

namespace {

bool deterministic(const std::string& key) {
  if (key == "config.output.dir") return false;
  for (const char* prefix : {"format", "experiment", "config.", "status", "run.", "assertion."})
    if (key.rfind(prefix, 0) == 0) return true;
  return false;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

bool as_number(const std::string& s, double& x) {
  char* end = nullptr;
  x = std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size();
}

bool close(double a, double b, const VerifyOptions& o) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::abs(a - b) <= o.abs_tol + o.rel_tol * std::max(std::abs(a), std::abs(b));
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

void compare_csv(const fs::path& golden, const fs::path& fresh, const VerifyOptions& o,
                 std::vector<std::string>& issues, const std::string& name) {
  const auto a = read_lines(golden), b = read_lines(fresh);
  if (a.empty() || b.empty() || a[0] != b[0]) {
    issues.push_back(name + ": header differs");
    return;
  }
  if (a.size() != b.size())
    issues.push_back(fmt::format("{}: {} rows in golden, {} fresh", name, a.size() - 1, b.size() - 1));
  const auto header = split(a[0]);
  std::map<std::size_t, double> drift;
  for (std::size_t r = 1; r < std::min(a.size(), b.size()); ++r) {
    const auto ra = split(a[r]), rb = split(b[r]);
    if (ra.size() != header.size() || rb.size() != header.size()) {
      issues.push_back(fmt::format("{}: row {} has the wrong width", name, r));
      return;
    }
    for (std::size_t col = 0; col < header.size(); ++col) {
      double x, y;
      const bool numeric = as_number(ra[col], x) && as_number(rb[col], y);
      if (numeric ? !close(x, y, o) : ra[col] != rb[col])
        drift[col] = std::max(drift[col], numeric ? std::abs(x - y) : INFINITY);
    }
  }
  for (const auto& [col, dev] : drift)
    issues.push_back(fmt::format("{}: column {} drifted (max deviation {:.3e})", name, header[col], dev));
}

void compare_snapshot(const fs::path& golden, const fs::path& fresh, const VerifyOptions& o,
                      std::vector<std::string>& issues, const std::string& name) {
  const auto a = spectral::read_snapshot(golden), b = spectral::read_snapshot(fresh);
  if (a.n != b.n || a.kind != b.kind || a.samples.size() != b.samples.size()) {
    issues.push_back(name + ": snapshot layout differs");
    return;
  }
  if (!close(a.time, b.time, o)) issues.push_back(name + ": snapshot time drifted");
  double dev = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    if (!close(a.samples[i], b.samples[i], o)) {
      ok = false;
      dev = std::max(dev, std::abs(a.samples[i] - b.samples[i]));
    }
  if (!ok) issues.push_back(fmt::format("{}: samples drifted (max deviation {:.3e})", name, dev));
}

std::vector<std::string> verify_one(const fs::path& dir, const fs::path& out, const VerifyOptions& o) {
  std::vector<std::string> issues;
  const RunManifest golden = read_manifest(dir / "manifest.txt");
  for (const auto& [k, v] : golden.entries) {
    if (k.rfind("file.", 0) != 0) continue;
    const std::string name = k.substr(5);
    if (!fs::exists(dir / name))
      issues.push_back(name + ": missing from golden directory");
    else if (sha256_file(dir / name) != v)
      issues.push_back(name + ": checksum mismatch against golden manifest");
  }

  ExperimentConfig config = load_config(dir / "config.ini");
  apply_override(config, "output.dir", out.string());
  const RunManifest fresh = cmd_run(config);

  std::map<std::string, std::string> ga, fa;
  std::set<std::string> keys;
  for (const auto& [k, v] : golden.entries)
    if (deterministic(k) || k.rfind("file.", 0) == 0) ga[k] = v, keys.insert(k);
  for (const auto& [k, v] : fresh.entries)
    if (deterministic(k) || k.rfind("file.", 0) == 0) fa[k] = v, keys.insert(k);
  for (const std::string& k : keys) {
    const bool file = k.rfind("file.", 0) == 0;
    if (!ga.count(k) || !fa.count(k))
      issues.push_back(fmt::format("manifest: {} only in {}", k, ga.count(k) ? "golden" : "fresh run"));
    else if (!file && ga[k] != fa[k])
      issues.push_back(fmt::format("manifest: {} golden '{}' fresh '{}'", k, ga[k], fa[k]));
  }

  for (const auto& [k, v] : golden.entries) {
    if (k.rfind("file.", 0) != 0) continue;
    const std::string name = k.substr(5);
    if (name == "config.ini" || !fs::exists(dir / name) || !fs::exists(out / name)) continue;
    const std::string ext = fs::path(name).extension().string();
    if (ext == ".csv")
      compare_csv(dir / name, out / name, o, issues, name);
    else if (ext == ".bin")
      compare_snapshot(dir / name, out / name, o, issues, name);
    else if (sha256_file(out / name) != v)
      issues.push_back(name + ": content differs");
  }
  return issues;
}

}  // namespace

int cmd_verify(const fs::path& golden_dir, const fs::path& out_dir, std::ostream& report,
               const VerifyOptions& options) {
  if (!fs::is_directory(golden_dir)) {
    report << "golden directory " << golden_dir.string() << " not found\n";
    return exit_config;
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(golden_dir))
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.txt")) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) {
    report << "no golden runs under " << golden_dir.string() << '\n';
    return exit_config;
  }
  int failed = 0;
  for (const fs::path& dir : dirs) {
    const std::string name = dir.filename().string();
    std::vector<std::string> issues;
    try {
      issues = verify_one(dir, out_dir / name, options);
    } catch (const std::exception& e) {
      issues.push_back(std::string("error: ") + e.what());
    }
    report << (issues.empty() ? "PASS " : "FAIL ") << name << '\n';
    for (const auto& i : issues) report << "  " << i << '\n';
    failed += !issues.empty();
  }
  report << fmt::format("{} of {} golden runs reproduced\n", dirs.size() - failed, dirs.size());
  return failed ? exit_assertion : exit_ok;
}

}  // namespace egwp::harness
