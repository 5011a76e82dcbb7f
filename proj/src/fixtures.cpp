#include "tpm/fixtures.hpp"

#include <cmath>
#include <cstdio>

#include "tpm/error.hpp"

namespace tpm {
namespace {

RunConfig market(std::vector<std::vector<double>> a, Vector x0, std::size_t rounds) {
  RunConfig cfg;
  cfg.a = Matrix::from_rows(a);
  cfg.x0 = std::move(x0);
  cfg.rounds = rounds;
  return cfg;
}

RunConfig with_bids(RunConfig cfg, std::vector<std::vector<double>> bids) {
  cfg.bid_source = BidSource::Explicit;
  cfg.bids = Matrix::from_rows(bids);
  return cfg;
}

Fixture market_fixture(std::string name, std::string description, RunConfig run) {
  return Fixture{std::move(name), std::move(description), FixtureKind::Market, std::move(run), {}};
}

Fixture sweep_fixture(std::string name, std::string description, RunConfig base, SweepAxis x,
                      SweepAxis y) {
  SweepConfig sweep;
  sweep.base = base;
  sweep.x = x;
  sweep.y = y;
  sweep.metric = Metric::GiniAmounts;
  sweep.base.sim.bids_every = 0;
  return Fixture{std::move(name), std::move(description), FixtureKind::Sweep, std::move(base),
                 std::move(sweep)};
}

SweepAxis axis(SweepKind kind, std::size_t i, std::size_t j, double lo, double hi) {
  return SweepAxis{kind, i, j, lo, hi, 64};
}

// Two players, each starting with one unit of good and money, bidding half
// of it on each good.
RunConfig two_player_half_bids(std::vector<std::vector<double>> a, std::size_t rounds) {
  return with_bids(market(std::move(a), {1.0, 1.0}, rounds), {{0.5, 0.5}, {0.5, 0.5}});
}

Fixture bid_sweep(std::string name, double self_loop, std::size_t rounds) {
  char s[32];
  std::snprintf(s, sizeof s, "%.6g", self_loop);
  return sweep_fixture(std::move(name),
                       "initial bids b[1][2] = x, b[2][1] = y with self-loops " + std::string(s) +
                           ", cross edges 0.1 and 15, Gini of amounts after " +
                           std::to_string(rounds) + " rounds",
                       two_player_half_bids({{self_loop, 0.1}, {15.0, self_loop}}, rounds),
                       axis(SweepKind::Bid, 0, 1, 0.0, 1.0), axis(SweepKind::Bid, 1, 0, 0.0, 1.0));
}

std::vector<Fixture> build() {
  const double r15 = std::sqrt(1.5);
  std::vector<Fixture> out;

  out.push_back(market_fixture(
      "fig1", "two producers with a good 2-cycle (product 1.02) and bad self-loops",
      with_bids(market({{0.99, 0.1}, {10.2, 0.99}}, {1.0, 2.0}, 2000), {{0.5, 0.5}, {0.5, 0.5}})));

  RunConfig fig2 = market({{1.0, 5.0}, {0.2, 1.0}}, {1.0, 1.0}, 300);
  fig2.budgets = {kFig2Budgets[0], kFig2Budgets[1]};
  fig2.normalize_money = true;
  out.push_back(market_fixture("fig2", "all cycle products 1, equal-split bids; period 3", fig2));

  out.push_back(sweep_fixture(
      "fig3", "initial bids b[1][2] = x, b[2][1] = y on a = [[sqrt 1.5, 0.1], [15, sqrt 1.5]]",
      two_player_half_bids({{r15, 0.1}, {15.0, r15}}, 800), axis(SweepKind::Bid, 0, 1, 0.0, 1.0),
      axis(SweepKind::Bid, 1, 0, 0.0, 1.0)));

  RunConfig appa = market({{1.1, 0.0}, {0.2, 0.0}}, {1.0, 1.0}, 3);
  out.push_back(Fixture{"appA", "splitting rules on a = [[1.1, 0], [0.2, 0]]: keep-own and equal split",
                        FixtureKind::Rules, appa, {}});

  out.push_back(market_fixture(
      "appC", "one worked trading-post step",
      with_bids(market({{0.8, 5.0}, {1.0, 0.1}}, {1.0, 2.0}, 1), {{0.3, 0.7}, {0.1, 0.9}})));

  out.push_back(market_fixture("appD",
                               "four players; the best cycle (1,2) absorbs all money while player 3 "
                               "ends up bidding only on player 4",
                               market({{0.1, 1.0, 0.1, 0.1},
                                       {1.0, 0.1, 0.1, 0.1},
                                       {0.1, 0.1, 0.1, 0.3},
                                       {0.1, 0.1, 0.1, 0.1}},
                                      {1.0, 1.0, 1.0, 1.0}, 10000)));

  RunConfig e1;
  e1.a = example_e1_schedule(0.5, 0.5).economy.coefficients();
  e1.rounds = 60;
  out.push_back(Fixture{"appE1", "five agents with a periodic bad split of player 1's good",
                        FixtureKind::Rules, e1, {}});

  out.push_back(market_fixture(
      "star3", "star with center 3; spoke 1 sits exactly on the growth threshold",
      with_bids(market({{0.0, 0.0, 0.8}, {0.0, 0.0, 1.5625}, {1.0, 1.0, 0.0}}, {1.0, 1.0, 1.0}, 300),
                {{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}, {0.5, 0.5, 0.0}})));

  out.push_back(market_fixture("fig13",
                               "only good cycle is player 1's self-loop, yet player 2 grows",
                               two_player_half_bids({{1.2, 0.5}, {1.0, 0.85}}, 1000)));
  out.push_back(market_fixture("fig14", "as fig13 with player 2's self-loop lowered; player 2 decays",
                               two_player_half_bids({{1.2, 0.5}, {1.0, 0.83}}, 1000)));

  out.push_back(sweep_fixture("fig15", "self-loops x = a[1][1], y = a[2][2] with cross edges 0.1, 15",
                              two_player_half_bids({{1.0, 0.1}, {15.0, 1.0}}, 120),
                              axis(SweepKind::SelfLoop, 0, 0, 0.0, 2.0),
                              axis(SweepKind::SelfLoop, 1, 1, 0.0, 2.0)));
  out.push_back(sweep_fixture("fig16", "cross edges x = a[1][2], y = a[2][1] with unit self-loops",
                              two_player_half_bids({{1.0, 1.0}, {1.0, 1.0}}, 120),
                              axis(SweepKind::Edge, 0, 1, 0.0, 2.0),
                              axis(SweepKind::Edge, 1, 0, 0.0, 2.0)));
  RunConfig fig17 = market({{0.0, 1.0}, {1.0, 0.5}}, {1.0, 1.0}, 120);
  out.push_back(sweep_fixture("fig17",
                              "cross edges x = a[1][2], y = a[2][1] with self-loops 0 and 0.5",
                              fig17, axis(SweepKind::Edge, 0, 1, 0.0, 2.0),
                              axis(SweepKind::Edge, 1, 0, 0.0, 2.0)));
  out.push_back(bid_sweep("fig18", 0.25, 350));
  out.push_back(bid_sweep("fig19", 0.25, 350));
  out.push_back(bid_sweep("fig20", 1.0, 350));
  out.push_back(bid_sweep("fig21", 1.21, 350));
  out.push_back(bid_sweep("fig22", r15, 350));
  out.push_back(bid_sweep("fig23", 1.24, 350));
  out.push_back(bid_sweep("fig24", 1.4, 350));
  out.push_back(bid_sweep("fig25", 2.0, 350));
  return out;
}

}  // namespace

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> registry = build();
  return registry;
}

const Fixture& find_fixture(std::string_view name) {
  for (const Fixture& f : fixtures())
    if (f.name == name) return f;
  throw Error(Errc::UnknownFixture, "no fixture named \"" + std::string(name) + "\"");
}

RuleRun rule_fixture(std::string_view name, double gamma, double eps) {
  if (name == "appA") {
    const Fixture& f = find_fixture(name);
    RuleRun run{Economy::from_coefficients(f.run.a), {}, f.run.x0, f.run.rounds};
    run.schedules.emplace_back("keep-own", constant_schedule(self_rule(2)));
    run.schedules.emplace_back("equal-split", constant_schedule(equal_split_rule(2)));
    return run;
  }
  if (name == "appE1") {
    ScheduledExample ex = example_e1_schedule(gamma, eps);
    RuleRun run{std::move(ex.economy), {}, std::move(ex.x0), find_fixture(name).run.rounds};
    run.schedules.emplace_back("periodic-split", std::move(ex.schedule));
    return run;
  }
  find_fixture(name);
  throw Error(Errc::UnknownFixture, "fixture \"" + std::string(name) + "\" has no splitting rules");
}

}  // namespace tpm
