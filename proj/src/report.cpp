#include "tpm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tpm/analysis.hpp"
#include "tpm/error.hpp"

namespace tpm {
namespace {

using nlohmann::json;

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json cycle_json(const Cycle& c) {
  std::vector<std::size_t> one_based;
  for (std::size_t v : c.vertices) one_based.push_back(v + 1);
  return {{"cycle", c.to_string()}, {"vertices", one_based}, {"product", c.product},
          {"geo_mean", c.geo_mean}};
}

// Non-finite doubles would become null in JSON; keep them readable.
json num(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json vec(const Vector& v) {
  json out = json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

void flatten(const json& node, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it)
      flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
  } else if (node.is_array() && !node.empty() && (node.front().is_object() || node.front().is_array())) {
    for (std::size_t k = 0; k < node.size(); ++k) flatten(node[k], prefix + "[" + std::to_string(k + 1) + "]", rows);
  } else if (node.is_string()) {
    rows.emplace_back(prefix, node.get<std::string>());
  } else {
    rows.emplace_back(prefix, node.dump());
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const GiniSeries g = gini_series(traj);
  out << "round,player,x_mantissa,log_scale,budget,gini_x,gini_B\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Snapshot& s = traj[k];
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << s.t << ',' << i + 1 << ',' << format_number(s.x[i]) << ','
          << format_number(s.log_scale) << ',' << format_number(s.budgets[i]) << ','
          << format_number(g.amounts[k]) << ',' << format_number(g.budgets[k]) << '\n';
  }
}

void write_bids_csv(std::ostream& out, const Trajectory& traj) {
  out << "round,i,j,bid\n";
  for (const Snapshot& s : traj.rounds) {
    if (!s.bids) continue;
    const Matrix& b = *s.bids;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        out << s.t << ',' << i + 1 << ',' << j + 1 << ',' << format_number(b(i, j)) << '\n';
  }
}

std::string economy_headline(const Economy& econ) {
  const GrowthClass gc = classify(econ);
  if (cycle_sign(gc.max_geo_mean) == CycleSign::Neutral &&
      cycle_sign(gc.min_geo_mean) == CycleSign::Neutral)
    return "all cycle products 1; neutral";
  const BestCycle best = best_cycle(econ);
  std::string line = std::string(to_string(gc.tag)) + "; best cycle " + best.cycle.to_string() +
                     ", product " + short_number(best.cycle.product);
  for (const Cycle& c : best.ties) line += "; tied with " + c.to_string();
  return line;
}

json analyze_economy(const Economy& econ) {
  json out;
  out["players"] = econ.size();
  out["positive_edges"] = econ.positive_edge_count();
  out["strongly_connected"] = econ.strongly_connected();
  out["summary"] = economy_headline(econ);

  if (econ.size() <= kDefaultEnumerationLimit) {
    json inventory = json::array();
    for (const Cycle& c : enumerate_simple_cycles(econ)) {
      json entry = cycle_json(c);
      const CycleSign s = cycle_sign(c.product);
      entry["sign"] = s == CycleSign::Good ? "good" : s == CycleSign::Bad ? "bad" : "neutral";
      inventory.push_back(std::move(entry));
    }
    out["cycles"] = std::move(inventory);
  }

  const BestCycle best = best_cycle(econ);
  out["best_cycle"] = cycle_json(best.cycle);
  json ties = json::array();
  for (const Cycle& c : best.ties) ties.push_back(c.to_string());
  out["best_cycle"]["ties"] = ties;
  out["best_cycle"]["exhaustive"] = best.exhaustive;

  const GrowthClass gc = classify(econ);
  out["growth_class"] = to_string(gc.tag);
  if (gc.witness) out["witness"] = gc.witness->to_string();
  out["normalization_w"] = normalize(econ).w;

  if (const auto star = detect_star(econ)) {
    json s = {{"center", star->center + 1}, {"alpha", vec(star->alpha)}, {"alpha_star", star->alpha_star}};
    try {
      const PhaseClass pc = star_phase(*star);
      json tags = json::array();
      for (PhaseTag t : pc.tags) tags.push_back(to_string(t));
      s["threshold"] = pc.threshold;
      s["phase"] = tags;
    } catch (const Error& e) {
      s["phase"] = e.what();
    }
    out["star"] = std::move(s);
  } else {
    out["star"] = nullptr;
  }
  return out;
}

json analyze_run(const Economy& econ, const Trajectory& traj) {
  json out;
  const std::size_t first = traj[0].t;
  const std::size_t last = traj.rounds.back().t;
  out["rounds"] = last - first;
  out["players"] = econ.size();
  out["summary"] = economy_headline(econ);

  const GiniSeries g = gini_series(traj);
  out["final"] = {{"x_mantissa", vec(traj.rounds.back().x)},
                  {"log_scale", traj.rounds.back().log_scale},
                  {"budgets", vec(traj.rounds.back().budgets)},
                  {"gini_x", num(g.amounts.back())},
                  {"gini_B", num(g.budgets.back())}};

  // Growth over the last three quarters of the run.
  const std::size_t from = first + (last - first) / 4;
  json growth = {{"window", {from, last}}};
  json slopes = json::array();
  for (std::size_t i = 0; i < econ.size(); ++i) {
    try {
      slopes.push_back(num(growth_rate(traj, i, from, last)));
    } catch (const Error& e) {
      slopes.push_back(e.what());
    }
  }
  growth["slopes"] = std::move(slopes);
  const BestCycle best = best_cycle(econ);
  growth["best_cycle_rate"] = std::log(best.cycle.product) / static_cast<double>(best.cycle.length());
  out["growth"] = std::move(growth);

  try {
    out["potential_drift"] = num(cycle_potential_check(traj, best.cycle));
  } catch (const Error& e) {
    out["potential_drift"] = e.what();
  }

  auto period_json = [&](PeriodMode mode) -> json {
    const auto p = detect_period(traj, econ, 1e-9, mode);
    if (!p) return nullptr;
    json cycles = json::array();
    for (const Cycle& c : p->non_unit_cycles) cycles.push_back(c.to_string());
    return {{"period", p->period}, {"onset", p->onset}, {"non_unit_cycles", cycles}};
  };
  out["period"] = period_json(PeriodMode::Absolute);
  out["normalized_period"] = period_json(PeriodMode::Normalized);

  try {
    const LimitReport lr = limit_report(traj, econ);
    json limit;
    limit["cycle"] = lr.cycle.to_string();
    limit["w"] = lr.w;
    limit["predecessor_tail_min"] = vec(lr.predecessor_tail_min);
    limit["cut_money_tail_max"] = num(lr.cut_money_tail_max);
    limit["money_on_cycle"] = num(lr.money_on_cycle);
    limit["budget_limits"] = vec(lr.budget_limits);
    limit["budget_residual"] = num(lr.budget_residual);
    limit["amount_limits"] = vec(lr.amount_limits);
    limit["amount_residual"] = num(lr.amount_residual);
    limit["off_cycle_max"] = num(lr.off_cycle_max);
    limit["gini_period"] = lr.gini_period ? json(*lr.gini_period) : json(nullptr);
    out["limit"] = std::move(limit);
  } catch (const Error& e) {
    out["limit"] = {{"skipped", e.what()}};
  }

  if (const auto star = detect_star(econ)) {
    try {
      const PhaseClass pc = star_phase(*star);
      json spokes = json::array();
      for (std::size_t k = 0; k < star->spokes.size(); ++k) {
        json s = {{"player", star->spokes[k] + 1}, {"alpha", star->alpha[k]},
                  {"predicted", to_string(pc.tags[k])}};
        try {
          s["simulated"] = to_string(slope_tag(growth_rate(traj, star->spokes[k], from, last)));
        } catch (const Error& e) {
          s["simulated"] = e.what();
        }
        spokes.push_back(std::move(s));
      }
      out["star"] = {{"threshold", pc.threshold}, {"spokes", spokes}};
    } catch (const Error& e) {
      out["star"] = {{"skipped", e.what()}};
    }
  }
  return out;
}

std::string to_text(const json& report) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::ostringstream out;
  for (const auto& [key, value] : rows)
    out << key << std::string(width - key.size() + 2, ' ') << value << '\n';
  return out.str();
}

}  // namespace tpm
