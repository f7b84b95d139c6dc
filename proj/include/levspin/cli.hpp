#pragma once

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "levspin/config.hpp"
#include "levspin/magnetostatics.hpp"
#include "levspin/scenario_runner.hpp"

// Command-line front end. Subcommands:
//   run <scenario|all>   execute scenario(s) and write CSV/JSON outputs
//   trap-summary         print the trap constants
//   coupling             print the coupling constants and frame parameters
//   sweep                1-D parameter sweep of the derived couplings
//   validate-config      parse a config file and report
// Exit codes: 0 success (all pass flags true), 1 acceptance-flag failure,
// 2 usage or configuration error.

namespace levspin::cli {

namespace detail {

inline RunConfig resolve_config(const std::string& preset, const std::string& config_path) {
  RunConfig cfg;
  if (!config_path.empty()) {
    cfg = parse_config_file(config_path);
    if (!preset.empty() && preset != cfg.preset)
      throw ConfigError("config: --preset conflicts with the config file preset");
  } else if (!preset.empty()) {
    cfg.preset = preset;
    cfg.phys = maglev::preset_by_name(preset);
  }
  return cfg;
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args) {
  CLI::App app{"levitated micromagnet spin-mechanics simulator"};
  app.require_subcommand(1);

  std::string preset, config_path, out_dir, scenario_arg;
  double rtol = -1, atol = -1;
  int fock_cap = -1, parallel = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--preset", preset, "parameter preset: sec5 or fig2");
    cmd->add_option("--config", config_path, "configuration file (key = value sections)");
  };

  auto* run = app.add_subcommand("run", "run one scenario or all of them");
  run->add_option("scenario", scenario_arg, "scenario id or 'all'")->required();
  add_common(run);
  run->add_option("--out", out_dir, "output directory (default: results)");
  run->add_option("--rtol", rtol, "integrator relative tolerance");
  run->add_option("--atol", atol, "integrator absolute tolerance");
  run->add_option("--fock-cap", fock_cap, "Fock truncation ceiling (levels)");
  run->add_option("--parallel", parallel, "scenario work-queue width (threads)");

  auto* trap = app.add_subcommand("trap-summary", "print trap stiffness, frequency and spread");
  add_common(trap);

  auto* coup = app.add_subcommand("coupling", "print coupling constants");
  add_common(coup);
  double coup_d = -1, coup_r = -1;
  coup->add_option("--d", coup_d, "override the NV-magnet distance (m)");
  coup->add_option("--r", coup_r, "squeezing parameter for the enhanced coupling");

  auto* sweep = app.add_subcommand("sweep", "sweep one parameter and tabulate couplings");
  add_common(sweep);
  std::string sweep_param;
  double sweep_from = 0, sweep_to = 0;
  int sweep_steps = 0;
  sweep->add_option("--param", sweep_param, "one of: d, I0, B0, a, r")->required();
  sweep->add_option("--from", sweep_from, "start value (SI; r dimensionless)")->required();
  sweep->add_option("--to", sweep_to, "end value")->required();
  sweep->add_option("--steps", sweep_steps, "number of points")->required();
  sweep->add_option("--out", out_dir, "output directory (default: results)");

  auto* val = app.add_subcommand("validate-config", "parse a config file and report");
  val->add_option("--config", config_path, "configuration file")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (val->parsed()) {
      const RunConfig cfg = parse_config_file(config_path);
      std::cerr << "config ok: preset " << cfg.preset << ", output dir " << cfg.out_dir << "\n";
      return 0;
    }

    RunConfig cfg = detail::resolve_config(preset, config_path);
    apply_env_overrides(cfg);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (rtol > 0) cfg.sim.rtol = rtol;
    if (atol > 0) cfg.sim.atol = atol;
    if (fock_cap > 0) cfg.sim.fock_cap = fock_cap;
    if (parallel > 0) cfg.sim.parallelism = parallel;
    validate(cfg);

    if (trap->parsed()) {
      const auto t = maglev::trap_summary(cfg.phys);
      std::cout << "k_ma[N/m]  omega_ma/2pi[Hz]  z0[m]\n";
      std::cout << csv::format_number(t.k_ma) << "  " << csv::format_number(t.omega_ma_hz())
                << "  " << csv::format_number(t.z0) << "\n";
      return 0;
    }

    if (coup->parsed()) {
      auto p = cfg.phys;
      if (coup_d > 0) p.d = coup_d;
      const double lam = maglev::spin_magnet_coupling(p);
      const auto dc = maglev::current_drive_coupling(p);
      const auto field = maglev::current_field_at_nv(p);
      std::cout << "lambda/2pi[Hz] = " << csv::format_number(to_hz(lam)) << "\n";
      std::cout << "g_cu/2pi[Hz] = " << csv::format_number(to_hz(dc.g_cu)) << "\n";
      std::cout << "B_current_at_nv[T] = " << csv::format_number(field.total)
                << (field.static_field_dominates ? " (static field dominates)"
                                                 : " (static field too weak)")
                << "\n";
      if (coup_r >= 0)
        std::cout << "Lambda_eff/2pi[Hz] at r=" << coup_r << " = "
                  << csv::format_number(to_hz(lam * std::exp(coup_r) / 2.0)) << "\n";
      return 0;
    }

    if (sweep->parsed()) {
      if (sweep_steps < 2) throw ConfigError("sweep: --steps must be >= 2");
      Table t({sweep_param + "[SI]", "lambda[rad/s]", "g_cu[rad/s]", "Lambda_eff[rad/s]"});
      for (int i = 0; i < sweep_steps; ++i) {
        const double v = sweep_from + (sweep_to - sweep_from) * i / (sweep_steps - 1);
        auto p = cfg.phys;
        double r = 0.0;
        if (sweep_param == "d") p.d = v;
        else if (sweep_param == "I0") p.I_0 = v;
        else if (sweep_param == "B0") p.B_0 = v;
        else if (sweep_param == "a") {
          const double scale = v / p.a;
          p.a = v;
          p.h_cool *= scale;
          p.h_eq *= scale;
          p.d *= scale;
          p.h_cu *= scale;
        } else if (sweep_param == "r") r = v;
        else throw ConfigError("sweep: unknown parameter '" + sweep_param + "'");
        const double lam = maglev::spin_magnet_coupling(p);
        t.append_row({v, lam, maglev::current_drive_coupling(p).g_cu,
                      lam * std::exp(r) / 2.0});
      }
      std::filesystem::create_directories(cfg.out_dir);
      const auto path = std::filesystem::path(cfg.out_dir) / ("sweep_" + sweep_param + ".csv");
      csv::write_file(path.string(), t);
      std::cerr << "wrote " << path.string() << "\n";
      return 0;
    }

    // run
    scenarios::RunPlan plan;
    plan.phys = cfg.phys;
    plan.preset = cfg.preset;
    plan.sim = cfg.sim;
    plan.out_dir = cfg.out_dir;
    if (scenario_arg != "all") plan.selection = {scenario_arg};
    const auto results = scenarios::run_all(plan);
    bool all_pass = true;
    for (const auto& r : results) {
      for (const auto& f : r.flags)
        if (!f.pass) {
          std::cerr << "[flag] " << r.id << ": " << f.name << " FAILED "
                    << (f.detail.empty() ? "" : "(" + f.detail + ")") << "\n";
          all_pass = false;
        }
    }
    return all_pass ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace levspin::cli
