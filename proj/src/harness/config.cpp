#include "egwp/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "egwp/harness/experiments.hpp"

namespace egwp::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  T value{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    throw ConfigError("config: bad value '" + text + "' for " + key);
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

template <class T>
Setter number(T ExperimentConfig::*field) {
  return [field](ExperimentConfig& c, const std::string& key, const std::string& v) {
    c.*field = parse_number<T>(key, v);
  };
}

template <class T>
Setter list(std::vector<T> ExperimentConfig::*field) {
  return [field](ExperimentConfig& c, const std::string& key, const std::string& v) {
    c.*field = parse_list<T>(key, v);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment.name", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.experiment = trim(v); }},
      {"experiment.seed", number(&ExperimentConfig::seed)},
      {"experiment.threads", number(&ExperimentConfig::threads)},
      {"grid.N", number(&ExperimentConfig::n)},
      {"grid.M", number(&ExperimentConfig::particles)},
      {"time.T", number(&ExperimentConfig::T)},
      {"time.dt", number(&ExperimentConfig::dt)},
      {"time.store_every", number(&ExperimentConfig::store_every)},
      {"scheme.nu", list(&ExperimentConfig::nu)},
      {"scheme.kappa", list(&ExperimentConfig::kappa)},
      {"scheme.galerkin_n", list(&ExperimentConfig::galerkin_n)},
      {"scheme.reference_n", number(&ExperimentConfig::reference_n)},
      {"scheme.max_resolution", number(&ExperimentConfig::max_resolution)},
      {"scheme.epsilon", list(&ExperimentConfig::epsilon)},
      {"scheme.pairs", number(&ExperimentConfig::pairs)},
      {"scheme.k", list(&ExperimentConfig::k)},
      {"scheme.C", list(&ExperimentConfig::C)},
      {"scheme.training_runs", number(&ExperimentConfig::training_runs)},
      {"scheme.heldout_runs", number(&ExperimentConfig::heldout_runs)},
      {"initial.field", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.field = trim(v); }},
      {"initial.kmax", number(&ExperimentConfig::kmax)},
      {"initial.slope", number(&ExperimentConfig::slope)},
      {"initial.l2_norm", number(&ExperimentConfig::l2_norm)},
      {"output.dir", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.output_dir = trim(v); }},
  };
  return table;
}

void validate(const ExperimentConfig& c) {
  const ExperimentInfo* info = find_experiment(c.experiment);
  if (!info) throw ConfigError("config: unknown experiment '" + c.experiment + "'");
  for (const auto& [key, value] : c.tolerance) {
    if (!info->tolerances.count(key))
      throw ConfigError("config: experiment " + c.experiment + " has no tolerance '" + key + "'");
    if (!(value > 0.0)) throw ConfigError("config: tolerance." + key + " must be > 0");
  }
  if (c.n < 8 || c.n % 2) throw ConfigError("config: grid.N must be even and >= 8");
  if (c.particles < 2) throw ConfigError("config: grid.M must be >= 2");
  if (!(c.T > 0.0) || !(c.dt > 0.0)) throw ConfigError("config: time.T and time.dt must be > 0");
  if (c.store_every < 1) throw ConfigError("config: time.store_every must be >= 1");
  const double steps = c.T / c.dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
    throw ConfigError("config: time.T must be a multiple of time.dt");
  if (static_cast<long>(std::round(steps)) % c.store_every)
    throw ConfigError("config: the step count must be a multiple of time.store_every");
  if (c.threads < 1) throw ConfigError("config: experiment.threads must be >= 1");
  if (c.field != "taylor_green" && c.field != "shear" && c.field != "random")
    throw ConfigError("config: initial.field must be taylor_green, shear or random");
  if (c.kmax < 1 || 2 * c.kmax >= c.n) throw ConfigError("config: initial.kmax must be in [1, N/2)");
  if (c.l2_norm < 0.0) throw ConfigError("config: initial.l2_norm must be >= 0");
  for (double v : c.nu)
    if (!(v > 0.0)) throw ConfigError("config: scheme.nu entries must be > 0");
  for (double v : c.kappa)
    if (!(v > 0.0)) throw ConfigError("config: scheme.kappa entries must be > 0");
  for (double v : c.epsilon)
    if (!(v > 0.0)) throw ConfigError("config: scheme.epsilon entries must be > 0");
  for (double v : c.C)
    if (!(v > 0.0)) throw ConfigError("config: scheme.C entries must be > 0");
  for (int v : c.k)
    if (v < 1) throw ConfigError("config: scheme.k entries must be >= 1");
  for (int v : c.galerkin_n)
    if (v < 1) throw ConfigError("config: scheme.galerkin_n entries must be >= 1");
  if (c.pairs < 1 || c.training_runs < 1 || c.heldout_runs < 1)
    throw ConfigError("config: run counts must be >= 1");
}

}  // namespace

double ExperimentConfig::tol(const std::string& key, double fallback) const {
  const auto it = tolerance.find(key);
  return it == tolerance.end() ? fallback : it->second;
}

ExperimentConfig parse_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      const std::string value = node.get_value<std::string>();
      if (section == "tolerance") {
        c.tolerance[key] = parse_number<double>(full, value);
      } else {
        const auto it = setters().find(full);
        if (it == setters().end()) throw ConfigError("config: unknown key '" + full + "'");
        it->second(c, full, value);
      }
      c.echo.emplace_back(full, trim(value));
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  return parse_config(is);
}

std::string to_ini(const ExperimentConfig& config) {
  std::vector<std::string> sections;
  for (const auto& entry : config.echo) {
    const std::string section = entry.first.substr(0, entry.first.find('.'));
    if (std::find(sections.begin(), sections.end(), section) == sections.end()) sections.push_back(section);
  }
  std::ostringstream os;
  for (const std::string& section : sections) {
    os << '[' << section << "]\n";
    for (const auto& [full, value] : config.echo) {
      const auto dot = full.find('.');
      if (full.substr(0, dot) == section) os << full.substr(dot + 1) << " = " << value << '\n';
    }
  }
  return os.str();
}

void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("config: unknown key '" + key + "'");
  ExperimentConfig next = config;
  it->second(next, key, value);
  const auto e = std::find_if(next.echo.begin(), next.echo.end(), [&](const auto& kv) { return kv.first == key; });
  if (e == next.echo.end())
    next.echo.emplace_back(key, trim(value));
  else
    e->second = trim(value);
  validate(next);
  config = std::move(next);
}

}  // namespace egwp::harness
