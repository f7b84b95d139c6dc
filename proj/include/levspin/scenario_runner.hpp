#pragma once

#include <atomic>
#include <chrono>
#include <iostream>
#include <mutex>
#include <thread>

#include "levspin/scenario_io.hpp"
#include "levspin/scenarios_classical.hpp"
#include "levspin/scenarios_quantum.hpp"

namespace levspin::scenarios {

/// Everything a full run needs. The classical reproductions are tied to their
/// canonical presets; the active preset's parameters are used when they match.
struct RunPlan {
  maglev::PhysicalParams phys = maglev::preset_sec5();
  std::string preset = "sec5";
  SimulationSettings sim;
  std::vector<std::string> selection;  // empty means every scenario
  std::string out_dir = "results";
  bool write_outputs = true;
};

inline const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids{"fig2_potential", "fig3_coupling_map", "fig4_rabi",
                                            "fig5_phase_geometry", "fig6_cat", "fig7_gate",
                                            "fig8_feasibility"};
  return ids;
}

inline ScenarioResult run_scenario(const std::string& id, const RunPlan& plan) {
  const maglev::PhysicalParams phys_fig2 =
      plan.preset == "fig2" ? plan.phys : maglev::preset_fig2();
  const maglev::PhysicalParams phys_sec5 =
      plan.preset == "sec5" ? plan.phys : maglev::preset_sec5();
  if (id == "fig2_potential") return fig2_potential(phys_fig2);
  if (id == "fig3_coupling_map") return fig3_coupling_map(phys_sec5);
  if (id == "fig4_rabi") return fig4_rabi(plan.sim);
  if (id == "fig5_phase_geometry") return fig5_phase_geometry(plan.sim);
  if (id == "fig6_cat") return fig6_cat(plan.sim);
  if (id == "fig7_gate") return fig7_gate(plan.sim);
  if (id == "fig8_feasibility") return fig8_feasibility(phys_sec5);
  throw std::invalid_argument("unknown scenario '" + id + "'");
}

/// Execute the selected scenarios on a small work queue and (optionally)
/// write their output directories. Results come back ordered by scenario id.
inline std::vector<ScenarioResult> run_all(const RunPlan& plan) {
  std::vector<std::string> ids = plan.selection.empty() ? scenario_ids() : plan.selection;
  for (const auto& id : ids)
    if (std::find(scenario_ids().begin(), scenario_ids().end(), id) == scenario_ids().end())
      throw std::invalid_argument("unknown scenario '" + id + "'");
  std::sort(ids.begin(), ids.end());

  std::vector<ScenarioResult> results(ids.size());
  std::vector<std::string> errors(ids.size());
  std::atomic<size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&]() {
    while (true) {
      const size_t k = next.fetch_add(1);
      if (k >= ids.size()) return;
      const auto start = std::chrono::steady_clock::now();
      {
        std::lock_guard<std::mutex> lk(log_mutex);
        std::cerr << "[run] " << ids[k] << " started\n";
      }
      try {
        results[k] = run_scenario(ids[k], plan);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::lock_guard<std::mutex> lk(log_mutex);
      if (!errors[k].empty()) {
        std::cerr << "[run] " << ids[k] << " FAILED: " << errors[k] << "\n";
      } else {
        std::cerr << "[run] " << ids[k] << " finished in " << secs << " s, flags "
                  << (results[k].all_passed() ? "pass" : "FAIL");
        for (const auto& c : results[k].convergence)
          std::cerr << "; N=" << c.N_used << (c.capped ? " (capped)" : "")
                    << (c.satisfied ? "" : " UNCONVERGED");
        std::cerr << "\n";
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(plan.sim.parallelism, ids.size()));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (size_t k = 0; k < ids.size(); ++k)
    if (!errors[k].empty())
      throw std::runtime_error("scenario " + ids[k] + " failed: " + errors[k]);

  if (plan.write_outputs)
    for (const auto& r : results) write_scenario(plan.out_dir, r);
  return results;
}

}  // namespace levspin::scenarios
