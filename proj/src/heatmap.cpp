#include "tpm/heatmap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "tpm/analysis.hpp"
#include "tpm/error.hpp"
#include "tpm/report.hpp"

namespace tpm {
namespace {

void set_coefficient(Matrix& a, const SweepAxis& ax, double v) {
  if (ax.kind != SweepKind::Bid) a(ax.i, ax.j) = v;
}

void set_bid(Matrix& bids, const SweepAxis& ax, double v) {
  if (ax.kind != SweepKind::Bid) return;
  const std::size_t n = bids.size();
  const double budget = bids.row_sum(ax.i);
  const double others = budget - bids(ax.i, ax.j);
  if (!(v > 0.0) || !(v < budget))
    throw Error(Errc::ParameterOutOfRange, ax.label() + " must lie strictly inside (0, budget)");
  if (!(others > 0.0))
    throw Error(Errc::ParameterOutOfRange, ax.label() + " is the only bid on its row");
  const double scale = (budget - v) / others;
  for (std::size_t k = 0; k < n; ++k)
    if (k != ax.j) bids(ax.i, k) *= scale;
  bids(ax.i, ax.j) = v;
}

}  // namespace

double heatmap_cell(const SweepConfig& cfg, double x_value, double y_value) {
  RunConfig run = cfg.base;
  set_coefficient(run.a, cfg.x, x_value);
  set_coefficient(run.a, cfg.y, y_value);
  Economy econ = Economy::validate(run.a, run.labels);
  Matrix bids = initial_bids(run, econ);
  set_bid(bids, cfg.x, x_value);
  set_bid(bids, cfg.y, y_value);
  const Vector x0 = run.x0.empty() ? Vector(econ.size(), 1.0) : run.x0;
  const MarketState start = init_state(econ, x0, bids, run.normalize_money);

  SimulationOptions sim = run.sim;
  sim.bids_every = 0;
  const Trajectory traj = simulate(econ, start, run.rounds, sim);
  const Snapshot& last = traj.rounds.back();
  return gini(cfg.metric == Metric::GiniAmounts ? last.x : last.budgets);
}

GiniGrid run_heatmap(const SweepConfig& cfg) {
  GiniGrid grid;
  grid.x = cfg.x;
  grid.y = cfg.y;
  grid.metric = cfg.metric;
  grid.x_values = cfg.x.values();
  grid.y_values = cfg.y.values();
  const std::size_t cols = grid.x_values.size();
  const std::size_t rows = grid.y_values.size();
  grid.values.assign(rows, Vector(cols, std::numeric_limits<double>::quiet_NaN()));

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failures{0};
  auto work = [&] {
    for (std::size_t cell = next++; cell < rows * cols; cell = next++) {
      const std::size_t r = cell / cols, c = cell % cols;
      try {
        grid.values[r][c] = heatmap_cell(cfg, grid.x_values[c], grid.y_values[r]);
      } catch (const Error&) {
        ++failures;
      }
    }
  };

  std::size_t workers = cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, rows * cols);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  grid.failures = failures;
  return grid;
}

void write_grid_csv(std::ostream& out, const GiniGrid& grid) {
  out << grid.y.label() << "\\" << grid.x.label();
  for (double v : grid.x_values) out << ',' << format_number(v);
  out << '\n';
  for (std::size_t r = 0; r < grid.y_values.size(); ++r) {
    out << format_number(grid.y_values[r]);
    for (double v : grid.values[r]) out << ',' << format_number(v);
    out << '\n';
  }
}

}  // namespace tpm
