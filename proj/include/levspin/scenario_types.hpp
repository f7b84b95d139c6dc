#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "levspin/params.hpp"
#include "levspin/table.hpp"

namespace levspin::scenarios {

using json = nlohmann::ordered_json;

struct ConvergenceReport {
  std::string observable;
  int N_used = 0;
  double shift = 0.0;  // |f(N) - f(N-step)|
  double tolerance = 0.0;
  bool satisfied = false;
  bool capped = false;  // escalation stopped at the Fock ceiling
};

struct Metric {
  std::string name;
  double value = 0.0;
};

struct PassFlag {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// One completed experiment: labeled tables, summary metrics, pass flags
/// against the declared tolerances, and the truncation convergence record.
struct ScenarioResult {
  std::string id;
  json params;
  std::vector<std::pair<std::string, Table>> tables;
  std::vector<Metric> metrics;
  std::vector<PassFlag> flags;
  std::vector<ConvergenceReport> convergence;

  bool all_passed() const {
    return std::all_of(flags.begin(), flags.end(), [](const PassFlag& f) { return f.pass; });
  }
  double metric(const std::string& name) const {
    for (const auto& m : metrics)
      if (m.name == name) return m.value;
    throw std::out_of_range("ScenarioResult: no metric '" + name + "'");
  }
  void add_metric(const std::string& name, double v) { metrics.push_back({name, v}); }
  void add_flag(const std::string& name, bool pass, const std::string& detail = "") {
    flags.push_back({name, pass, detail});
  }
};

/// Simulation-wide knobs shared by every scenario.
struct SimulationSettings {
  double rtol = 1e-8;
  double atol = 1e-10;
  double rtol_fast = 1e-7;    // used by the deep-strong-coupling runs
  int fock_cap = 120;
  double convergence_tol = 1e-4;
  int parallelism = 2;
};

/// Fock truncation policy: start from the displacement scale, escalate in
/// steps of 10 until the monitored observable stabilizes or the cap is hit.
struct TruncationPolicy {
  int cap = 120;
  double tol = 1e-4;
  int step = 10;

  int start_for_displacement(double max_alpha) const {
    const int n = static_cast<int>(std::ceil(4.0 * max_alpha * max_alpha + 20.0));
    return std::clamp(n, 12, cap);
  }

  /// f maps a truncation N to the monitored observable.
  ConvergenceReport converge(const std::function<double(int)>& f, int N0,
                             const std::string& observable) const {
    ConvergenceReport rep;
    rep.observable = observable;
    rep.tolerance = tol;
    int N = std::min(std::max(N0, 12), cap);
    if (N == cap) {
      // no room to escalate: compare against one step below the ceiling
      const double lo = f(N - step), hi = f(N);
      rep.N_used = N;
      rep.shift = std::abs(hi - lo);
      rep.satisfied = rep.shift < tol;
      rep.capped = true;
      return rep;
    }
    double prev = f(N);
    while (true) {
      const int Nn = std::min(N + step, cap);
      const double cur = f(Nn);
      rep.shift = std::abs(cur - prev);
      rep.N_used = Nn;
      if (rep.shift < tol) {
        rep.satisfied = true;
        return rep;
      }
      if (Nn == cap) {
        rep.capped = true;
        return rep;
      }
      N = Nn;
      prev = cur;
    }
  }
};

inline json params_to_json(const maglev::PhysicalParams& p) {
  json j;
  j["a_m"] = p.a;
  j["rho_kg_m3"] = p.rho;
  j["Br_T"] = p.B_r;
  j["h_cool_m"] = p.h_cool;
  j["h_eq_m"] = p.h_eq;
  j["theta_cool_rad"] = p.theta_cool;
  j["phi_cool_rad"] = p.phi_cool;
  j["theta_rad"] = p.theta;
  j["phi_rad"] = p.phi;
  j["d_m"] = p.d;
  j["B0_T"] = p.B_0;
  j["I0_A"] = p.I_0;
  j["h_cu_m"] = p.h_cu;
  return j;
}

}  // namespace levspin::scenarios
