#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "levspin/params.hpp"
#include "levspin/scenario_types.hpp"

// Strict key-value configuration: sections [magnet], [nv], [drive],
// [simulation], [output], plus a top-level `preset`. Unknown keys are
// rejected loudly; every physical input is SI.

namespace levspin::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string preset = "sec5";
  maglev::PhysicalParams phys = maglev::preset_sec5();
  scenarios::SimulationSettings sim;
  std::string out_dir = "results";
};

namespace detail {

struct KeySpec {
  std::string section, key, unit;
  double maglev::PhysicalParams::*phys_field = nullptr;
  double scenarios::SimulationSettings::*sim_field = nullptr;
  int scenarios::SimulationSettings::*sim_int_field = nullptr;
};

inline const std::vector<KeySpec>& schema() {
  using P = maglev::PhysicalParams;
  using S = scenarios::SimulationSettings;
  static const std::vector<KeySpec> keys{
      {"magnet", "a", "m", &P::a, nullptr, nullptr},
      {"magnet", "rho", "kg/m^3", &P::rho, nullptr, nullptr},
      {"magnet", "Br", "T", &P::B_r, nullptr, nullptr},
      {"magnet", "h_cool", "m", &P::h_cool, nullptr, nullptr},
      {"magnet", "h_eq", "m", &P::h_eq, nullptr, nullptr},
      {"magnet", "theta_cool", "rad", &P::theta_cool, nullptr, nullptr},
      {"magnet", "phi_cool", "rad", &P::phi_cool, nullptr, nullptr},
      {"nv", "d", "m", &P::d, nullptr, nullptr},
      {"nv", "B0", "T", &P::B_0, nullptr, nullptr},
      {"drive", "I0", "A", &P::I_0, nullptr, nullptr},
      {"drive", "h_cu", "m", &P::h_cu, nullptr, nullptr},
      {"simulation", "rtol", "1", nullptr, &S::rtol, nullptr},
      {"simulation", "atol", "1", nullptr, &S::atol, nullptr},
      {"simulation", "rtol_fast", "1", nullptr, &S::rtol_fast, nullptr},
      {"simulation", "convergence_tol", "1", nullptr, &S::convergence_tol, nullptr},
      {"simulation", "fock_cap", "levels", nullptr, nullptr, &S::fock_cap},
      {"output", "parallelism", "threads", nullptr, nullptr, &S::parallelism},
  };
  return keys;
}

inline const std::vector<std::string>& required_physical_keys() {
  static const std::vector<std::string> req{"magnet.a",  "magnet.rho", "magnet.Br",
                                            "magnet.h_cool", "magnet.h_eq", "nv.d",
                                            "nv.B0",     "drive.I0",   "drive.h_cu"};
  return req;
}

inline std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

inline double parse_number(const std::string& section, const std::string& key,
                           const std::string& unit, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("config: key '" + section + "." + key + "' expects a number in " + unit +
                      ", got '" + value + "'");
  return v;
}

}  // namespace detail

inline void validate(const RunConfig& cfg) {
  if (!(cfg.sim.rtol > 0) || !(cfg.sim.atol > 0) || !(cfg.sim.rtol_fast > 0))
    throw ConfigError("config: tolerances must be positive");
  if (!(cfg.sim.convergence_tol > 0))
    throw ConfigError("config: convergence_tol must be positive");
  if (cfg.sim.fock_cap < 12 || cfg.sim.fock_cap > 2000)
    throw ConfigError("config: fock_cap must lie in [12, 2000] levels");
  if (cfg.sim.parallelism < 1) throw ConfigError("config: parallelism must be >= 1 threads");
  try {
    cfg.phys.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

/// Parse and validate a configuration file. A `preset` provides the physical
/// baseline; explicit keys override it. Without a preset every physical key
/// is required.
inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");

  std::map<std::string, std::string> values;  // "section.key" -> raw value
  std::string preset;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section header at line " + std::to_string(lineno));
      section = detail::strip(line.substr(1, line.size() - 2));
      const bool known = section == "magnet" || section == "nv" || section == "drive" ||
                         section == "simulation" || section == "output";
      if (!known) throw ConfigError("config: unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = detail::strip(line.substr(0, eq));
    const std::string value = detail::unquote(detail::strip(line.substr(eq + 1)));
    if (section.empty() && key == "preset") {
      preset = value;
      continue;
    }
    if (section.empty())
      throw ConfigError("config: unknown key '" + key + "' outside any section (only 'preset' is allowed there)");
    if (section == "output" && key == "dir") {
      values["output.dir"] = value;
      continue;
    }
    bool known = false;
    for (const auto& ks : detail::schema())
      if (ks.section == section && ks.key == key) known = true;
    if (!known)
      throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
    values[section + "." + key] = value;
  }

  RunConfig cfg;
  if (!preset.empty()) {
    cfg.preset = preset;
    cfg.phys = maglev::preset_by_name(preset);  // throws on unknown preset
  } else {
    // explicit mode: every physical key must be present
    std::string missing;
    for (const auto& req : detail::required_physical_keys())
      if (!values.count(req)) missing += (missing.empty() ? "" : ", ") + req;
    if (!missing.empty())
      throw ConfigError(
          "config: no preset given and required keys are missing: " + missing +
          " (units: a,h_cool,h_eq,d,h_cu in m; rho in kg/m^3; Br,B0 in T; I0 in A)");
    cfg.preset = "custom";
    cfg.phys = maglev::PhysicalParams{};
    cfg.phys.phi_cool = constants::pi / 2.0;
    cfg.phys.phi = constants::pi / 2.0;
  }

  for (const auto& ks : detail::schema()) {
    const auto it = values.find(ks.section + "." + ks.key);
    if (it == values.end()) continue;
    const double v = detail::parse_number(ks.section, ks.key, ks.unit, it->second);
    if (ks.phys_field) cfg.phys.*(ks.phys_field) = v;
    if (ks.sim_field) cfg.sim.*(ks.sim_field) = v;
    if (ks.sim_int_field) cfg.sim.*(ks.sim_int_field) = static_cast<int>(v);
  }
  if (values.count("output.dir")) cfg.out_dir = values.at("output.dir");

  // keep the equilibrium orientation locked to the cooldown one
  cfg.phys.theta = cfg.phys.theta_cool;
  cfg.phys.phi = cfg.phys.phi_cool;

  validate(cfg);
  return cfg;
}

/// LEVSPIN_OUT and LEVSPIN_PARALLEL override the file/flag settings.
inline void apply_env_overrides(RunConfig& cfg) {
  if (const char* out = std::getenv("LEVSPIN_OUT")) cfg.out_dir = out;
  if (const char* par = std::getenv("LEVSPIN_PARALLEL")) {
    char* end = nullptr;
    const long v = std::strtol(par, &end, 10);
    if (end == par || *end != '\0' || v < 1)
      throw ConfigError("LEVSPIN_PARALLEL must be a positive integer");
    cfg.sim.parallelism = static_cast<int>(v);
  }
}

}  // namespace levspin::cli
