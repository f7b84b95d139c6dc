#pragma once

#include <filesystem>
#include <fstream>

#include "levspin/scenario_types.hpp"

namespace levspin::scenarios {

inline json summary_to_json(const ScenarioResult& r) {
  json j;
  j["scenario"] = r.id;
  json jm = json::object();
  for (const auto& m : r.metrics) jm[m.name] = m.value;
  j["metrics"] = jm;
  json jf = json::array();
  for (const auto& f : r.flags) {
    json e;
    e["name"] = f.name;
    e["pass"] = f.pass;
    if (!f.detail.empty()) e["detail"] = f.detail;
    jf.push_back(e);
  }
  j["pass_flags"] = jf;
  json jc = json::array();
  for (const auto& c : r.convergence) {
    json e;
    e["observable"] = c.observable;
    e["fock_levels"] = c.N_used;
    e["shift"] = c.shift;
    e["tolerance"] = c.tolerance;
    e["satisfied"] = c.satisfied;
    e["capped"] = c.capped;
    jc.push_back(e);
  }
  j["convergence"] = jc;
  j["all_passed"] = r.all_passed();
  return j;
}

/// Write one directory per scenario: data/*.csv, summary.json, params.json.
inline void write_scenario(const std::filesystem::path& out_dir, const ScenarioResult& r) {
  namespace fs = std::filesystem;
  const fs::path dir = out_dir / r.id;
  fs::create_directories(dir / "data");
  for (const auto& [name, table] : r.tables) csv::write_file((dir / "data" / (name + ".csv")).string(), table);
  {
    std::ofstream f(dir / "params.json", std::ios::binary);
    f << r.params.dump(2) << "\n";
  }
  {
    std::ofstream f(dir / "summary.json", std::ios::binary);
    f << summary_to_json(r).dump(2) << "\n";
  }
}

}  // namespace levspin::scenarios
