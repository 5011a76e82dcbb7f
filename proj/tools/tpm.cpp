// Command-line front end: economy analysis, single runs, heatmap sweeps,
// the fixture registry and the invariant suite.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "tpm/analysis.hpp"
#include "tpm/error.hpp"
#include "tpm/fixtures.hpp"
#include "tpm/heatmap.hpp"
#include "tpm/io.hpp"
#include "tpm/report.hpp"
#include "tpm/verify.hpp"

namespace fs = std::filesystem;
using namespace tpm;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitOverflow = 3;

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidConfig, "cannot write " + path.string());
  return out;
}

void run_market(const RunConfig& cfg, const fs::path& out_dir, bool as_json) {
  const ResolvedRun run = resolve(cfg);
  const Trajectory traj = simulate(run.economy, run.start, run.rounds, run.sim);
  fs::create_directories(out_dir);
  {
    auto out = open_out(out_dir / "trajectory.csv");
    write_trajectory_csv(out, traj);
  }
  if (run.sim.bids_every > 0) {
    auto out = open_out(out_dir / "bids.csv");
    write_bids_csv(out, traj);
  }
  const nlohmann::json report = analyze_run(run.economy, traj);
  {
    auto out = open_out(out_dir / "report.json");
    out << report.dump(2) << '\n';
  }
  {
    auto out = open_out(out_dir / "run.json");
    out << run_config_to_json(cfg).dump(2) << '\n';
  }
  std::cout << (as_json ? report.dump(2) + "\n" : to_text(report));
  std::cout << "wrote " << (out_dir / "trajectory.csv").string() << '\n';
}

void run_sweep(const SweepConfig& cfg, const fs::path& out_file) {
  const GiniGrid grid = run_heatmap(cfg);
  auto out = open_out(out_file);
  write_grid_csv(out, grid);
  if (grid.failures > 0)
    std::cerr << "warning: " << grid.failures << " cells failed and are recorded as nan\n";
  std::cout << "wrote " << grid.y_values.size() << "x" << grid.x_values.size() << " grid to "
            << out_file.string() << '\n';
}

void run_rules(const std::string& name, double gamma, double eps, std::size_t rounds) {
  const RuleRun run = rule_fixture(name, gamma, eps);
  const std::size_t t_max = rounds ? rounds : run.rounds;
  for (const auto& [label, sched] : run.schedules) {
    std::cout << "schedule " << label << '\n';
    const auto xs = run_schedule(run.economy, run.x0, sched, t_max);
    for (std::size_t t = 0; t < xs.size(); ++t) {
      std::cout << "  t=" << t;
      for (double v : xs[t]) std::cout << ' ' << format_number(v);
      std::cout << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trading-post market simulator and analysis toolkit"};
  app.require_subcommand(1);

  bool as_json = false;
  std::string input, out_path;
  std::size_t workers = 0, steps = 0, rounds = 0;
  std::uint64_t seed = 1;
  double gamma = 0.5, eps = 0.5;

  auto* analyze = app.add_subcommand("analyze", "Validate an economy and report its cycles and growth class");
  analyze->add_option("economy", input, "Economy JSON file")->required();
  analyze->add_flag("--json", as_json, "Print JSON instead of text");

  auto* simulate_cmd = app.add_subcommand("simulate", "Run one trajectory from a run config");
  simulate_cmd->add_option("config", input, "Run config JSON file")->required();
  simulate_cmd->add_option("--out", out_path, "Output directory (default: the config's output_dir)");
  simulate_cmd->add_flag("--json", as_json, "Print the report as JSON");

  auto* heatmap = app.add_subcommand("heatmap", "Run a two-parameter Gini sweep");
  heatmap->add_option("config", input, "Sweep config JSON file")->required();
  heatmap->add_option("--out", out_path, "Output CSV (default: <output_dir>/heatmap.csv)");
  heatmap->add_option("--workers", workers, "Worker threads (0: hardware concurrency)");
  heatmap->add_option("--steps", steps, "Override the grid resolution on both axes");

  auto* fixtures_cmd = app.add_subcommand("fixtures", "List or run registered fixtures");
  fixtures_cmd->require_subcommand(1);
  fixtures_cmd->add_subcommand("list", "List fixture names");
  auto* fixture_run = fixtures_cmd->add_subcommand("run", "Run a fixture");
  fixture_run->add_option("name", input, "Fixture name")->required();
  fixture_run->add_option("--out", out_path, "Output directory or CSV file");
  fixture_run->add_option("--rounds", rounds, "Override the number of rounds");
  fixture_run->add_option("--steps", steps, "Override the grid resolution of a sweep");
  fixture_run->add_option("--workers", workers, "Worker threads for a sweep");
  fixture_run->add_option("--gamma", gamma, "Split fraction for appE1");
  fixture_run->add_option("--eps", eps, "Detour loss for appE1");
  fixture_run->add_flag("--json", as_json, "Print the report as JSON");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--seed", seed, "Random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      const Economy econ = load_economy(input);
      const nlohmann::json report = analyze_economy(econ);
      if (as_json) {
        std::cout << report.dump(2) << '\n';
      } else {
        std::cout << report["summary"].get<std::string>() << '\n' << to_text(report);
      }
    } else if (simulate_cmd->parsed()) {
      const fs::path path(input);
      const RunConfig cfg = parse_run_config(read_json_file(path), path.parent_path());
      run_market(cfg, out_path.empty() ? fs::path(cfg.output_dir) : fs::path(out_path), as_json);
    } else if (heatmap->parsed()) {
      const fs::path path(input);
      SweepConfig cfg = parse_sweep_config(read_json_file(path), path.parent_path());
      if (workers) cfg.workers = workers;
      if (steps) cfg.x.steps = cfg.y.steps = steps;
      run_sweep(cfg, out_path.empty() ? fs::path(cfg.base.output_dir) / "heatmap.csv" : fs::path(out_path));
    } else if (fixtures_cmd->parsed()) {
      if (fixture_run->parsed()) {
        const Fixture& f = find_fixture(input);
        switch (f.kind) {
          case FixtureKind::Rules:
            run_rules(f.name, gamma, eps, rounds);
            break;
          case FixtureKind::Market: {
            RunConfig cfg = f.run;
            if (rounds) cfg.rounds = rounds;
            run_market(cfg, out_path.empty() ? fs::path("out") / f.name : fs::path(out_path), as_json);
            break;
          }
          case FixtureKind::Sweep: {
            SweepConfig cfg = *f.sweep;
            if (rounds) cfg.base.rounds = rounds;
            if (steps) cfg.x.steps = cfg.y.steps = steps;
            if (workers) cfg.workers = workers;
            run_sweep(cfg, out_path.empty() ? fs::path("out") / (f.name + ".csv") : fs::path(out_path));
            break;
          }
        }
      } else {
        for (const Fixture& f : fixtures()) std::printf("%-7s %s\n", f.name.c_str(), f.description.c_str());
      }
    } else if (verify->parsed()) {
      bool ok = true;
      for (const CheckResult& r : run_invariant_suite(seed)) {
        std::printf("%s  %-36s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        ok = ok && r.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::Overflow ? kExitOverflow : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
