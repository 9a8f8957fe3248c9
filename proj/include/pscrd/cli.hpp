#pragma once

// pscrd_cli subcommands:
//   run     --config <path> [--seed <u64>] [--out <dir>]
//   sweep   --config <path> --lambdas a,b,c --windows x,y,z [--seeds n] [--out <dir>]
//   attack  --config <path> --attackers a,b [--seeds n] [--out <dir>]
//   verify  --config <path>
// Exit codes: 0 success, 1 acceptance criterion failed, 2 usage or config error.

#include <filesystem>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pscrd/acceptance.hpp"
#include "pscrd/config.hpp"
#include "pscrd/report.hpp"
#include "pscrd/simulator.hpp"
#include "pscrd/svg_chart.hpp"

namespace pscrd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCriterionFailed = 1;
inline constexpr int kExitUsage = 2;

namespace fs = std::filesystem;

// Writes manifest, snapshots, event log and both charts into
// out/<config-hash>/<seed>/ and returns that directory.
inline fs::path write_run(const fs::path& out_root, const sim::RunResult& run,
                          const std::string& started_at) {
  const auto dir = report::run_directory(out_root, run.config);
  fs::create_directories(dir);
  report::write_file(dir / "manifest.json",
                     report::make_manifest(run.config, started_at).to_json().dump(2) + "\n");
  report::emit_csv(run.snapshots, dir / "snapshots.csv");
  report::write_file(dir / "events.log", run.events.serialize());
  chart::emit_chart(run.snapshots, chart::ChartKind::gini, run.join_hours, dir / "gini.svg");
  chart::emit_chart(run.snapshots, chart::ChartKind::nakamoto, run.join_hours, dir / "nakamoto.svg");
  return dir;
}

inline int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
                   const fs::path& out_root, std::ostream& out) {
  auto cfg = config::parse_config(config_path);
  if (seed) cfg.seed = *seed;
  const auto started = report::utc_timestamp();
  const auto run = sim::run_scenario(cfg);
  const auto dir = write_run(out_root, run, started);
  const auto& last = run.final_snapshot();
  out << "wrote " << dir.string() << "\n";
  out << "final hour " << last.hour << ": gini_decayed=" << report::fixed6(last.gini_decayed)
      << " nakamoto_decayed=" << last.nakamoto_decayed << "\n";
  return kExitOk;
}

inline int cmd_sweep(const std::string& config_path, const std::vector<double>& lambdas,
                     const std::vector<double>& windows, std::size_t seed_count,
                     const fs::path& out_root, std::ostream& out) {
  const auto base = config::parse_config(config_path);
  for (double l : lambdas)
    if (!(l > 0.0 && l < 1.0)) throw ValidationError("--lambdas values must lie in (0,1)");
  for (double w : windows)
    if (!(w >= 0.0)) throw ValidationError("--windows values must be >= 0");
  const auto seeds = sim::replicate_seeds(base.seed, seed_count);
  const auto started = report::utc_timestamp();
  const auto cells = sim::run_sensitivity(base, lambdas, windows, seeds);

  const auto base_dir = out_root / sim::config_hash(base);
  std::string index =
      "cell,lambda,time_window_hours,replicate_seed,run_seed,config_hash,path,final_gini_decayed,"
      "final_nakamoto_decayed\n";
  std::map<std::size_t, std::vector<sim::RunResult>> by_cell;
  for (const auto& c : cells) {
    const auto dir = write_run(out_root, c.result, started);
    const auto& last = c.result.final_snapshot();
    index += std::to_string(c.cell_index) + ',' + sim::format_real(c.lambda) + ',' +
             sim::format_real(c.time_window_hours) + ',' + std::to_string(c.replicate_seed) + ',' +
             std::to_string(c.run_seed) + ',' + sim::config_hash(c.result.config) + ',' +
             fs::relative(dir, out_root).generic_string() + ',' + report::fixed6(last.gini_decayed) +
             ',' + std::to_string(last.nakamoto_decayed) + '\n';
    by_cell[c.cell_index].push_back(c.result);
  }
  report::write_file(base_dir / "sweep_index.csv", index);

  std::vector<chart::Series> gini, nakamoto;
  for (const auto& [cell, runs] : by_cell) {
    const auto avg = sim::average_series(runs);
    const auto& cfg = runs.front().config;
    const std::string label =
        "lambda=" + sim::format_real(cfg.lambda) + " Tw=" + sim::format_real(cfg.time_window_hours);
    gini.push_back({label, avg.hour, avg.gini_decayed});
    nakamoto.push_back({label, avg.hour, avg.nakamoto_decayed});
    out << label << ": final gini_decayed=" << report::fixed6(avg.gini_decayed.back())
        << " nakamoto_decayed=" << report::fixed6(avg.nakamoto_decayed.back()) << "\n";
  }
  const auto& join_hours = cells.front().result.join_hours;
  chart::emit_overlay(gini, chart::ChartKind::gini, join_hours, base_dir / "sweep_gini.svg");
  chart::emit_overlay(nakamoto, chart::ChartKind::nakamoto, join_hours, base_dir / "sweep_nakamoto.svg");
  out << "wrote " << cells.size() << " runs; index " << (base_dir / "sweep_index.csv").string() << "\n";
  return kExitOk;
}

inline std::string format_attack_table(const std::vector<sim::AttackSummary>& rows) {
  std::string s =
      "attackers,seeds,attacker_sp_raw,attacker_sp_decayed,decayed_to_raw_ratio,reward_share,"
      "capture_frequency,exact_capture_probability\n";
  for (const auto& r : rows)
    s += std::to_string(r.attackers) + ',' + std::to_string(r.seeds) + ',' +
         report::fixed6(r.attacker_points_raw) + ',' + report::fixed6(r.attacker_points_decayed) + ',' +
         report::fixed6(r.decayed_to_raw_ratio) + ',' + report::fixed6(r.reward_share) + ',' +
         report::fixed6(r.capture_frequency) + ',' + report::fixed6(r.exact_capture_probability) + '\n';
  return s;
}

inline int cmd_attack(const std::string& config_path, const std::vector<int>& counts,
                      std::size_t seed_count, const fs::path& out_root, std::ostream& out) {
  const auto base = config::parse_config(config_path);
  for (int c : counts)
    if (c < 0 || c > base.population())
      throw ValidationError("--attackers value " + std::to_string(c) + " outside [0, population]");
  const auto rows = sim::run_attack(base, counts, seed_count);
  const auto table = format_attack_table(rows);
  const auto path = out_root / sim::config_hash(base) / "attack_summary.csv";
  report::write_file(path, table);
  out << table << "wrote " << path.string() << "\n";
  return kExitOk;
}

inline int cmd_verify(const std::string& config_path, std::ostream& out) {
  const auto base = config::parse_config(config_path);
  const bool ok = acceptance::run_all(base, out);
  out << (ok ? "all criteria passed" : "one or more criteria FAILED") << "\n";
  return ok ? kExitOk : kExitCriterionFailed;
}

inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-bridge coordination and reward-distribution simulator", "pscrd_cli"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::vector<double> lambdas, windows;
  std::vector<int> attackers;
  std::size_t seeds = 1;

  auto* run = app.add_subcommand("run", "Run one seeded scenario");
  run->add_option("--config", config_path, "Scenario config (TOML)")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output root directory");

  auto* sweep = app.add_subcommand("sweep", "Sensitivity sweep over lambda x time window");
  sweep->add_option("--config", config_path, "Scenario config (TOML)")->required();
  sweep->add_option("--lambdas", lambdas, "Decay factors, comma separated")->required()->delimiter(',');
  sweep->add_option("--windows", windows, "Time windows in hours, comma separated")->required()->delimiter(',');
  sweep->add_option("--seeds", seeds, "Replicates per cell")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_dir, "Output root directory");

  auto* attack = app.add_subcommand("attack", "Coalition attack analysis");
  attack->add_option("--config", config_path, "Scenario config (TOML)")->required();
  attack->add_option("--attackers", attackers, "Coalition sizes, comma separated")->required()->delimiter(',');
  attack->add_option("--seeds", seeds, "Replicates per coalition size")->check(CLI::PositiveNumber);
  attack->add_option("--out", out_dir, "Output root directory");

  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  verify->add_option("--config", config_path, "Scenario config (TOML)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(config_path, seed, out_dir, out);
    if (*sweep) return cmd_sweep(config_path, lambdas, windows, seeds, out_dir, out);
    if (*attack) return cmd_attack(config_path, attackers, seeds, out_dir, out);
    if (*verify) return cmd_verify(config_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

inline int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace pscrd::cli
