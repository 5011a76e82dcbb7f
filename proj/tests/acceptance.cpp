// Acceptance criteria runner. `acceptance N` checks criterion N and prints
// one PASS/FAIL line; with no argument every criterion runs in order.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <string>

#include "oracles.hpp"
#include "tpm/analysis.hpp"
#include "tpm/error.hpp"
#include "tpm/fixtures.hpp"
#include "tpm/heatmap.hpp"
#include "tpm/mechanism.hpp"

using namespace tpm;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    passed &= ok;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

double total(const Vector& x) { return std::accumulate(x.begin(), x.end(), 0.0); }

// 1. One step on appC.
Outcome single_step() {
  Outcome o;
  const ResolvedRun run = resolve(find_fixture("appC").run);
  const auto [s, rec] = step(run.economy, run.start);
  const Vector B = s.budgets();
  double worst = 0.0;
  worst = std::max({worst, rel(s.x[0], 4.975), rel(s.x[1], 0.3625), rel(B[0], 0.4), rel(B[1], 1.6)});
  const double y[2][2] = {{0.75, 0.875}, {0.25, 1.125}};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) worst = std::max(worst, rel(rec.received(i, j), y[i][j]));
  o.require(worst < 1e-12, "x, B, y rel err " + fmt("%.2e", worst));
  const double b[2][2] = {{0.048, 0.351}, {1.103, 0.496}};
  double bid_err = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) bid_err = std::max(bid_err, std::abs(s.bids(i, j) - b[i][j]));
  o.require(bid_err <= 1e-3, "bid err " + fmt("%.2e", bid_err));
  return o;
}

// Largest deviation of state(t) from state(0), amounts relative to the
// largest amount and bids relative to the total money.
double state_gap(const Trajectory& tr, std::size_t t) {
  double xmax = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < tr.players(); ++i) xmax = std::max(xmax, tr[0].true_amount(i));
  const double money = tr[0].bids->total();
  for (std::size_t i = 0; i < tr.players(); ++i) {
    gap = std::max(gap, std::abs(tr[t].true_amount(i) - tr[0].true_amount(i)) / xmax);
    for (std::size_t j = 0; j < tr.players(); ++j)
      gap = std::max(gap, std::abs((*tr[t].bids)(i, j) - (*tr[0].bids)(i, j)) / money);
  }
  return gap;
}

// 2. Period three for two-player economies whose cycles all have product 1.
Outcome period_three() {
  Outcome o;
  const ResolvedRun run = resolve(find_fixture("fig2").run);
  const Trajectory tr = simulate(run.economy, run.start, run.rounds, run.sim);
  const double gap = state_gap(tr, 3);
  o.require(gap <= 1e-12, "fig2 |state(3)-state(0)| " + fmt("%.2e", gap));
  const auto p = detect_period(tr, run.economy);
  o.require(p && p->period == 3, "fig2 period " + std::to_string(p ? p->period : 0));

  oracle::Rng rng(2);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::size_t good = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double a01 = u(rng);
    const Economy e = Economy::validate(Matrix::from_rows({{1.0, a01}, {1.0 / a01, 1.0}}));
    const MarketState s0 =
        init_state(e, {u(rng), u(rng)}, default_bids(e, {u(rng), u(rng)}, BidPreset::EqualSplit));
    const Trajectory t = simulate(e, s0, 200);
    worst = std::max(worst, state_gap(t, 3));
    const auto q = detect_period(t, e);
    if (q && q->period == 3 && state_gap(t, 3) <= 1e-12) ++good;
  }
  o.require(good == 50, std::to_string(good) + "/50 random pairs periodic, worst gap " + fmt("%.2e", worst));
  return o;
}

MarketState random_start(oracle::Rng& rng, const Economy& e) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  Vector x0(e.size()), budgets(e.size());
  for (auto& v : x0) v = u(rng);
  for (auto& v : budgets) v = u(rng);
  Matrix b = default_bids(e, budgets, BidPreset::EqualSplit);
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j)
      if (b(i, j) > 0) b(i, j) *= u(rng);
  return init_state(e, x0, b);
}

// 3. Cycle potential on random economies.
Outcome cycle_potential() {
  Outcome o;
  oracle::Rng rng(3);
  double worst = 0.0;
  std::size_t cycles = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Economy e = Economy::validate(oracle::random_connected(rng, 1 + trial % 6, 0.4));
    const Trajectory tr = simulate(e, random_start(rng, e), 1000);
    for (const Cycle& c : enumerate_simple_cycles(e)) {
      worst = std::max(worst, cycle_potential_check(tr, c));
      ++cycles;
    }
  }
  o.require(worst < 1e-6, std::to_string(cycles) + " cycles, max drift " + fmt("%.2e", worst));
  return o;
}

// 4. Growth rate on fig1.
Outcome growth() {
  Outcome o;
  const ResolvedRun run = resolve(find_fixture("fig1").run);
  const Trajectory tr = simulate(run.economy, run.start, 2000, run.sim);
  const double want = std::log(1.02) / 2;
  for (std::size_t i = 0; i < 2; ++i) {
    const double slope = growth_rate(tr, i, 500, 2000);
    o.require(rel(slope, want) < 0.05, "player " + std::to_string(i + 1) + " slope " + fmt("%.6g", slope));
  }
  return o;
}

// 5. Normalized economies give the same bids and rescaled amounts.
Outcome normalization() {
  Outcome o;
  oracle::Rng rng(5);
  double bid_err = 0.0, amount_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Economy e = Economy::validate(oracle::random_connected(rng, 2 + trial % 5, 0.4));
    const NormalizedEconomy n = normalize(e);
    const MarketState s0 = random_start(rng, e);
    const Trajectory a = simulate(e, s0, 500);
    const Trajectory b = simulate(n.economy, s0, 500);
    const double logw = std::log(n.w);
    for (std::size_t t = 0; t <= 500; ++t)
      for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t j = 0; j < e.size(); ++j)
          bid_err = std::max(bid_err, std::abs((*a[t].bids)(i, j) - (*b[t].bids)(i, j)));
        const double la = a[t].log_amount(i), lb = b[t].log_amount(i);
        if (std::isinf(la) && std::isinf(lb)) continue;
        amount_err = std::max(amount_err, std::abs(std::expm1(lb - (la - t * logw))));
      }
  }
  o.require(bid_err <= 1e-9, "bid err " + fmt("%.2e", bid_err));
  o.require(amount_err <= 1e-6, "amount rel err " + fmt("%.2e", amount_err));
  return o;
}

// 6. Inequality suite on the four-player appD run.
Outcome inequality() {
  Outcome o;
  const ResolvedRun run = resolve(find_fixture("appD").run);
  const Trajectory tr = simulate(run.economy, run.start, 10000, run.sim);
  const LimitReport r = limit_report(tr, run.economy);
  o.require(r.cycle.vertices == std::vector<std::size_t>{0, 1}, "best cycle " + r.cycle.to_string());
  const double pred = *std::min_element(r.predecessor_tail_min.begin(), r.predecessor_tail_min.end());
  o.require(pred > 0.99, "predecessor fraction " + fmt("%.6g", pred));
  o.require(r.cut_money_tail_max < 1e-3, "cut money " + fmt("%.2e", r.cut_money_tail_max));
  const Vector B = tr.rounds.back().budgets;
  o.require(B[2] < 1e-3 && B[3] < 1e-3, "B3 " + fmt("%.2e", B[2]) + " B4 " + fmt("%.2e", B[3]));
  const InequalityReport q = inequality_ratio(tr, run.economy, 0, 3, 100.0);
  o.require(q.diverges && q.log_ratio.back() - q.log_ratio.front() >= std::log(100.0),
            "x1/x4 log growth " + fmt("%.3g", q.log_ratio.back() - q.log_ratio.front()));
  const double f34 = tr.final_state.bid_fractions(2, 3);
  o.require(f34 > 0.99, "f34 " + fmt("%.6g", f34));
  return o;
}

// 7. Star phase transitions on star3.
Outcome star() {
  Outcome o;
  const Fixture& f = find_fixture("star3");
  const ResolvedRun run = resolve(f.run);
  const Trajectory tr = simulate(run.economy, run.start, 300, run.sim);
  double lo = INFINITY, hi = 0.0;
  for (const Snapshot& s : tr.rounds) {
    lo = std::min(lo, s.true_amount(0));
    hi = std::max(hi, s.true_amount(0));
  }
  o.require(lo > 0.0 && hi / lo < 10.0, "player 1 range ratio " + fmt("%.4g", hi / lo));

  for (const auto& [alpha, want] : {std::pair{0.82, PhaseTag::Grows}, std::pair{0.78, PhaseTag::Vanishes}}) {
    Matrix a = run.economy.coefficients();
    a(0, 2) = alpha;
    const Economy e = Economy::validate(a);
    const StarShape shape = *detect_star(e);
    const PhaseTag predicted = star_phase(shape).tags[0];
    const Trajectory t = simulate(e, run.start, 300, run.sim);
    const PhaseTag simulated = slope_tag(growth_rate(t, 0, 75, 300));
    o.require(predicted == want && simulated == want,
              "alpha " + fmt("%.2f", alpha) + ": predicted " + std::string(to_string(predicted)) +
                  ", simulated " + std::string(to_string(simulated)));
  }

  const StarShape shape = *detect_star(run.economy);
  auto shares = [&](std::size_t t) {
    Vector v;
    for (std::size_t k : shape.spokes) v.push_back((*tr[t].bid_fractions)(shape.center, k));
    return v;
  };
  const std::array<Vector, 3> initial{shares(0), shares(1), shares(2)};
  double err = 0.0;
  for (std::size_t t = 0; t <= 300; ++t) {
    const Vector want = shares(t), got = star_fraction_closed_form(shape, initial, t);
    for (std::size_t k = 0; k < want.size(); ++k) err = std::max(err, std::abs(got[k] - want[k]));
  }
  o.require(err <= 1e-9, "closed form err " + fmt("%.2e", err));
  return o;
}

GrowthTag oracle_class(const Matrix& a) {
  bool any_good = false, all_good = true, all_bad = true;
  for (const auto& [c, p] : oracle::cycles(a)) {
    const bool good = p > 1.0 + 1e-12, bad = p < 1.0 - 1e-12;
    any_good |= good;
    all_good &= good;
    all_bad &= bad;
  }
  if (all_bad) return GrowthTag::VanishesAlways;
  if (all_good) return GrowthTag::GrowsUnderAnyNonWasteful;
  if (any_good) return GrowthTag::GrowsUnderSome;
  return GrowthTag::NoGrowthPossible;
}

// 8. Classification against the brute-force oracle, then behavior.
Outcome classification() {
  Outcome o;
  oracle::Rng rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t agree = 0, planted_ok = 0, tried = 0;
  std::vector<Matrix> samples;
  while (tried < 200) {
    Matrix a = oracle::random_connected(rng, 2 + tried % 6, 0.4, 0.2, 3.0);
    const double best = oracle::best_geo_mean(a), worst = oracle::worst_geo_mean(a);
    const int plant = static_cast<int>(tried % 3);
    GrowthTag planted;
    if (plant == 0) {
      a = a.scaled((0.5 + 0.45 * u(rng)) / best);
      planted = GrowthTag::VanishesAlways;
    } else if (plant == 1) {
      a = a.scaled((1.05 + 0.45 * u(rng)) / worst);
      planted = GrowthTag::GrowsUnderAnyNonWasteful;
    } else {
      if (best / worst < 1.02) continue;
      a = a.scaled(1.0 / std::sqrt(best * worst));
      planted = GrowthTag::GrowsUnderSome;
    }
    ++tried;
    const Economy e = Economy::validate(a);
    const GrowthTag got = classify(e).tag;
    if (got == oracle_class(a)) ++agree;
    if (got == planted) ++planted_ok;
    if (samples.size() < 20 && tried % 10 == 0) samples.push_back(a);
  }
  o.require(agree == 200 && planted_ok == 200,
            std::to_string(agree) + "/200 agree with oracle, " + std::to_string(planted_ok) + "/200 planted");

  std::size_t behaved = 0;
  for (const Matrix& a : samples) {
    const Economy e = Economy::validate(a);
    const GrowthClass c = classify(e);
    const Vector x0(e.size(), 1.0);
    const std::uint64_t seed = rng();
    const bool non_wasteful = c.tag == GrowthTag::GrowsUnderAnyNonWasteful;
    RuleSchedule sched = [&e, seed, non_wasteful](std::size_t t) {
      std::mt19937_64 r(seed + t);
      return random_rule(e, r, non_wasteful);
    };
    if (c.tag == GrowthTag::GrowsUnderSome) sched = cycle_routing_rule(e, *c.witness);
    const auto xs = run_schedule(e, x0, sched, 600);
    const double ratio = total(xs.back()) / total(xs.front());
    const bool ok = c.tag == GrowthTag::VanishesAlways ? ratio < 1e-6 : ratio > 1e6;
    if (ok) ++behaved;
  }
  o.require(behaved == samples.size() && samples.size() == 20,
            std::to_string(behaved) + "/" + std::to_string(samples.size()) + " schedules behave as classified");
  return o;
}

// 9. Qualitative heatmap features for fig15 and fig3.
Outcome heatmaps() {
  Outcome o;
  const GiniGrid g15 = run_heatmap(*find_fixture("fig15").sweep);
  double off_min = INFINITY, diag_max = 0.0;
  std::size_t off_cells = 0;
  for (std::size_t r = 0; r < g15.y_values.size(); ++r)
    for (std::size_t c = 0; c < g15.x_values.size(); ++c) {
      const double x = g15.x_values[c], y = g15.y_values[r], v = g15.values[r][c];
      if (r == c) diag_max = std::max(diag_max, v);
      // One self-loop at 1.4 or more while the other stays at or below the
      // neutral rate sqrt(1.5): clearly off the diagonal.
      if (std::max(x, y) >= 1.4 && std::min(x, y) <= std::sqrt(1.5)) {
        off_min = std::min(off_min, v);
        ++off_cells;
      }
    }
  o.require(off_min > 0.6, "fig15 off-diagonal min " + fmt("%.4g", off_min) + " over " +
                               std::to_string(off_cells) + " cells (want > 0.6)");
  o.require(diag_max < 0.2, "fig15 diagonal max " + fmt("%.4g", diag_max) + " (want < 0.2)");

  const GiniGrid g3 = run_heatmap(*find_fixture("fig3").sweep);
  std::size_t low = 0, high = 0;
  double lo = INFINITY, hi = -INFINITY;
  for (const Vector& row : g3.values)
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      low += v < 0.1;
      high += v > 0.5;
    }
  o.require(hi > lo && low > 0 && high > 0, "fig3 range [" + fmt("%.3g", lo) + ", " + fmt("%.4g", hi) +
                                                "], " + std::to_string(low) + " cells < 0.1, " +
                                                std::to_string(high) + " cells > 0.5");
  return o;
}

// 10. Periodic bad split: closed form across a parameter grid.
Outcome periodic_split() {
  Outcome o;
  double err = 0.0, min_total = INFINITY;
  for (double gamma : {0.1, 0.5, 0.9})
    for (double eps : {0.1, 0.5, 0.9}) {
      const ScheduledExample ex = example_e1_schedule(gamma, eps);
      const auto xs = run_schedule(ex.economy, ex.x0, ex.schedule, 60);
      const double q = gamma + (1 - gamma) * (1 - eps);
      for (std::size_t k = 0; k <= 20; ++k)
        err = std::max(err, std::abs(xs[3 * k][0] - std::pow(q, static_cast<double>(k))));
      for (const Vector& x : xs) min_total = std::min(min_total, total(x));
    }
  o.require(err <= 1e-12, "closed form err " + fmt("%.2e", err));
  o.require(min_total > 0.0, "min total " + fmt("%.4g", min_total));
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
  double budget_ms;  // 0 for no runtime bound
};

const Criterion kCriteria[] = {
    {"single step", single_step, 1.0},
    {"period three", period_three, 1000.0},
    {"cycle potential", cycle_potential, 30000.0},
    {"growth rate", growth, 1000.0},
    {"normalization", normalization, 0.0},
    {"inequality suite", inequality, 5000.0},
    {"star phases", star, 0.0},
    {"classification", classification, 0.0},
    {"heatmaps", heatmaps, 120000.0},
    {"periodic bad split", periodic_split, 0.0},
};

bool run_one(std::size_t k) {
  const Criterion& c = kCriteria[k - 1];
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.passed = false;
    o.detail = std::string("error: ") + e.what();
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (c.budget_ms > 0 && ms >= c.budget_ms) {
    o.passed = false;
    o.detail += "; over the " + fmt("%.0f", c.budget_ms) + " ms budget";
  }
  std::printf("criterion %zu (%s): %s %s (%.1f ms)\n", k, c.name, o.passed ? "PASS" : "FAIL",
              o.detail.c_str(), ms);
  return o.passed;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t count = std::size(kCriteria);
  if (argc > 1) {
    const long k = std::strtol(argv[1], nullptr, 10);
    if (k < 1 || static_cast<std::size_t>(k) > count) {
      std::fprintf(stderr, "criterion must be 1..%zu\n", count);
      return 2;
    }
    return run_one(static_cast<std::size_t>(k)) ? 0 : 1;
  }
  bool all = true;
  for (std::size_t k = 1; k <= count; ++k) all &= run_one(k);
  return all ? 0 : 1;
}
