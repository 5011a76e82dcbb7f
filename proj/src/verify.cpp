#include "tpm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>

#include "tpm/analysis.hpp"
#include "tpm/error.hpp"
#include "tpm/fixtures.hpp"
#include "tpm/mechanism.hpp"
#include "tpm/tradingpost.hpp"

namespace tpm {
namespace {

using Rng = std::mt19937_64;

// Random strongly connected economy: a Hamiltonian ring through a random
// permutation guarantees connectivity, other edges appear with `density`.
Economy random_economy(Rng& rng, std::size_t n, double density) {
  std::uniform_real_distribution<double> coef(0.2, 2.0), coin(0.0, 1.0);
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < n; ++k) perm[k] = k;
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix a(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) a(perm[(k + 1) % n], perm[k]) = coef(rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) == 0.0 && coin(rng) < density) a(i, j) = coef(rng);
  return Economy::validate(std::move(a));
}

MarketState random_start(const Economy& econ, Rng& rng) {
  std::uniform_real_distribution<double> amount(0.5, 2.0);
  Vector x0(econ.size()), budgets(econ.size());
  for (auto& v : x0) v = amount(rng);
  for (auto& v : budgets) v = amount(rng);
  return init_state(econ, x0, default_bids(econ, budgets, BidPreset::EqualSplit), true);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CheckResult check(std::string name, const std::function<std::string()>& body) {
  CheckResult r{std::move(name), false, {}};
  try {
    r.detail = body();
    r.passed = r.detail.rfind("FAIL", 0) != 0;
  } catch (const std::exception& e) {
    r.detail = std::string("FAIL exception: ") + e.what();
  }
  return r;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> size(2, 6);

  out.push_back(check("money and goods conservation", [&] {
    double money = 0.0, goods = 0.0, rows = 0.0;
    for (int e = 0; e < 5; ++e) {
      const Economy econ = random_economy(rng, size(rng), 0.4);
      MarketState s = random_start(econ, rng);
      const double total = s.total_money();
      for (int t = 0; t < 10000; ++t) {
        auto [next, rec] = step(econ, s);
        for (std::size_t j = 0; j < econ.size(); ++j)
          if (s.bids.col_sum(j) > 0.0)
            goods = std::max(goods, std::abs(rec.received.col_sum(j) - s.x[j]) / s.x[j]);
        for (std::size_t i = 0; i < econ.size(); ++i)
          if (next.x[i] > 0.0)
            rows = std::max(rows, std::abs(next.bids.row_sum(i) - rec.budgets_next[i]));
        money = std::max(money, std::abs(next.total_money() - total));
        // Keep amounts in range without touching the dynamics.
        double sum = 0.0;
        for (double v : next.x) sum += v;
        for (double& v : next.x) v /= sum;
        s = std::move(next);
      }
    }
    const bool ok = money < 1e-9 && goods < 1e-12 && rows < 1e-9;
    return std::string(ok ? "" : "FAIL ") + "money drift " + sci(money) + ", goods " + sci(goods) +
           ", bid rows " + sci(rows);
  }));

  out.push_back(check("cycle potential", [&] {
    double worst = 0.0;
    for (int e = 0; e < 10; ++e) {
      const Economy econ = random_economy(rng, size(rng), 0.4);
      const Trajectory traj = simulate(econ, random_start(econ, rng), 1000);
      for (const Cycle& c : enumerate_simple_cycles(econ))
        worst = std::max(worst, cycle_potential_check(traj, c));
    }
    return std::string(worst < 1e-6 ? "" : "FAIL ") + "max drift " + sci(worst);
  }));

  out.push_back(check("normalization equivalence", [&] {
    double bids = 0.0, amounts = 0.0;
    for (int e = 0; e < 5; ++e) {
      const Economy econ = random_economy(rng, size(rng), 0.4);
      const NormalizedEconomy norm = normalize(econ);
      const MarketState s0 = random_start(econ, rng);
      const Trajectory a = simulate(econ, s0, 500);
      const Trajectory b = simulate(norm.economy, s0, 500);
      for (std::size_t k = 0; k < a.size(); ++k) {
        bids = std::max(bids, Matrix::max_abs_diff(*a[k].bids, *b[k].bids));
        for (std::size_t i = 0; i < econ.size(); ++i) {
          const double expect = a[k].log_amount(i) - static_cast<double>(a[k].t) * std::log(norm.w);
          amounts = std::max(amounts, std::abs(std::expm1(b[k].log_amount(i) - expect)));
        }
      }
    }
    const bool ok = bids <= 1e-9 && amounts <= 1e-6;
    return std::string(ok ? "" : "FAIL ") + "bid gap " + sci(bids) + ", amount gap " + sci(amounts);
  }));

  out.push_back(check("scale invariance of bids", [&] {
    double bids = 0.0, amounts = 0.0;
    for (int e = 0; e < 5; ++e) {
      const Economy econ = random_economy(rng, size(rng), 0.4);
      const MarketState s0 = random_start(econ, rng);
      MarketState scaled = s0;
      for (double& v : scaled.x) v *= 3.5;
      SimulationOptions raw;
      raw.renorm_every = 0;
      const Trajectory a = simulate(econ, s0, 200, raw);
      const Trajectory b = simulate(econ, scaled, 200, raw);
      for (std::size_t k = 0; k < a.size(); ++k) {
        bids = std::max(bids, Matrix::max_abs_diff(*a[k].bids, *b[k].bids));
        for (std::size_t i = 0; i < econ.size(); ++i)
          if (a[k].x[i] > 0.0) amounts = std::max(amounts, std::abs(b[k].x[i] / (3.5 * a[k].x[i]) - 1.0));
      }
    }
    const bool ok = bids <= 1e-12 && amounts <= 1e-9;
    return std::string(ok ? "" : "FAIL ") + "bid gap " + sci(bids) + ", amount ratio gap " + sci(amounts);
  }));

  out.push_back(check("gini range and scale invariance", [&] {
    std::uniform_real_distribution<double> u(0.0, 5.0);
    double gap = 0.0;
    bool in_range = true;
    for (int e = 0; e < 200; ++e) {
      Vector v(size(rng));
      for (auto& x : v) x = u(rng);
      Vector w = v;
      for (auto& x : w) x *= 7.25;
      const double g = gini(v);
      const double n = static_cast<double>(v.size());
      in_range = in_range && g >= 0.0 && g <= (n - 1.0) / n + 1e-15;
      gap = std::max(gap, std::abs(gini(w) - g));
    }
    return std::string(in_range && gap <= 1e-12 ? "" : "FAIL ") + "scale gap " + sci(gap);
  }));

  out.push_back(check("cycle enumeration and best cycle", [&] {
    std::size_t mismatches = 0, duplicates = 0;
    for (int e = 0; e < 50; ++e) {
      const Economy econ = random_economy(rng, size(rng) + 1, 0.35);
      const auto cycles = enumerate_simple_cycles(econ);
      std::set<std::vector<std::size_t>> seen;
      for (const Cycle& c : cycles) duplicates += seen.insert(c.vertices).second ? 0 : 1;
      const double by_enum = best_cycle(econ).cycle.geo_mean;
      const double by_karp = max_mean_cycle(econ).geo_mean;
      if (std::abs(by_enum - by_karp) > 1e-9 * by_enum) ++mismatches;
    }
    const bool ok = mismatches == 0 && duplicates == 0;
    return std::string(ok ? "" : "FAIL ") + std::to_string(mismatches) + " Karp mismatches, " +
           std::to_string(duplicates) + " duplicate cycles";
  }));

  out.push_back(check("period 3 for product-one pairs", [&] {
    std::uniform_real_distribution<double> u(0.2, 5.0);
    double worst = 0.0;
    for (int e = 0; e < 20; ++e) {
      const double c = u(rng);
      const Economy econ = Economy::validate(Matrix::from_rows({{1.0, c}, {1.0 / c, 1.0}}));
      const MarketState s0 =
          init_state(econ, {u(rng), u(rng)}, default_bids(econ, {u(rng), u(rng)}, BidPreset::EqualSplit));
      MarketState s = s0;
      for (int k = 0; k < 3; ++k) s = step(econ, s).first;
      worst = std::max({worst, Matrix::max_abs_diff(s.bids, s0.bids),
                        std::abs(s.x[0] - s0.x[0]), std::abs(s.x[1] - s0.x[1])});
    }
    return std::string(worst <= 1e-12 ? "" : "FAIL ") + "max return gap " + sci(worst);
  }));

  out.push_back(check("periodic bad split subsequence", [&] {
    double worst = 0.0;
    for (double gamma : {0.0, 0.5, 0.9}) {
      const ScheduledExample ex = example_e1_schedule(gamma, 0.3);
      const auto xs = run_schedule(ex.economy, ex.x0, ex.schedule, 60);
      const double c = gamma + (1.0 - gamma) * 0.7;
      for (std::size_t k = 0; 3 * k <= 60; ++k)
        worst = std::max(worst, std::abs(xs[3 * k][0] - std::pow(c, static_cast<double>(k))));
    }
    return std::string(worst <= 1e-12 ? "" : "FAIL ") + "max error " + sci(worst);
  }));

  out.push_back(check("star round trip", [&] {
    std::uniform_real_distribution<double> u(0.2, 3.0);
    std::size_t bad = 0;
    for (int e = 0; e < 50; ++e) {
      Vector lambda(size(rng)), mu(lambda.size());
      for (auto& v : lambda) v = u(rng);
      for (auto& v : mu) v = u(rng);
      const auto shape = detect_star(make_star(lambda, mu));
      if (!shape || shape->center != lambda.size() || shape->lambda != lambda || shape->mu != mu) ++bad;
    }
    return std::string(bad == 0 ? "" : "FAIL ") + std::to_string(bad) + " mismatches";
  }));

  out.push_back(check("fixtures start cleanly", [&] {
    std::size_t count = 0;
    for (const Fixture& f : fixtures()) {
      if (f.kind == FixtureKind::Rules) {
        rule_fixture(f.name);
      } else {
        resolve(f.run);
      }
      ++count;
    }
    return std::to_string(count) + " fixtures";
  }));

  return out;
}

}  // namespace tpm
