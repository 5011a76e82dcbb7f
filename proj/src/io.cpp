#include "tpm/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tpm/error.hpp"
#include "tpm/fixtures.hpp"

namespace tpm {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidConfig, what); }

double number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) bad(where + " must be a non-negative integer");
  return v.get<std::size_t>();
}

Vector vector_of(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array of numbers");
  Vector out;
  for (std::size_t k = 0; k < v.size(); ++k)
    out.push_back(number(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

Matrix matrix_of(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < v.size(); ++k)
    rows.push_back(vector_of(v[k], where + "[" + std::to_string(k) + "]"));
  return Matrix::from_rows(rows);
}

json matrix_json(const Matrix& m) { return m.to_rows(); }

std::string_view kind_name(SweepKind k) {
  switch (k) {
    case SweepKind::Bid: return "bid";
    case SweepKind::Edge: return "edge";
    case SweepKind::SelfLoop: return "self_loop";
  }
  return "bid";
}

SweepAxis parse_axis(const json& v, const std::string& where) {
  if (!v.is_object()) bad(where + " must be an object");
  SweepAxis ax;
  const std::string kind = v.value("kind", "bid");
  if (kind == "bid") ax.kind = SweepKind::Bid;
  else if (kind == "edge") ax.kind = SweepKind::Edge;
  else if (kind == "self_loop") ax.kind = SweepKind::SelfLoop;
  else bad(where + ".kind must be bid, edge or self_loop");
  const std::size_t i = count(v.at("i"), where + ".i");
  const std::size_t j = ax.kind == SweepKind::SelfLoop ? i : count(v.at("j"), where + ".j");
  if (i == 0 || j == 0) bad(where + " indices are 1-based");
  ax.i = i - 1;
  ax.j = j - 1;
  ax.lo = number(v.at("min"), where + ".min");
  ax.hi = number(v.at("max"), where + ".max");
  ax.steps = count(v.at("steps"), where + ".steps");
  if (ax.steps < 2) bad(where + ".steps must be at least 2");
  if (!(ax.hi > ax.lo)) bad(where + " needs min < max");
  if (ax.kind == SweepKind::Bid && (ax.lo < 0.0 || ax.hi > 1.0))
    bad(where + " bid range must lie within [0, 1]");
  if (ax.kind != SweepKind::Bid && ax.lo < 0.0) bad(where + " coefficients must be non-negative");
  return ax;
}

json axis_json(const SweepAxis& ax) {
  json v = {{"kind", kind_name(ax.kind)}, {"i", ax.i + 1}, {"min", ax.lo}, {"max", ax.hi},
            {"steps", ax.steps}};
  if (ax.kind != SweepKind::SelfLoop) v["j"] = ax.j + 1;
  return v;
}

}  // namespace

Economy parse_economy(const json& doc) {
  if (!doc.is_object() || !doc.contains("a")) bad("economy needs an \"a\" matrix");
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) bad("labels must be an array of strings");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) bad("labels must be an array of strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return Economy::validate(matrix_of(doc["a"], "a"), std::move(labels));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
}

Economy load_economy(const std::filesystem::path& path) { return parse_economy(read_json_file(path)); }

json economy_to_json(const Economy& econ) {
  json doc = {{"a", matrix_json(econ.coefficients())}};
  if (!econ.labels().empty()) doc["labels"] = econ.labels();
  return doc;
}

Matrix initial_bids(const RunConfig& cfg, const Economy& econ) {
  if (cfg.bid_source == BidSource::Explicit) return cfg.bids;
  const Vector budgets = cfg.budgets.empty() ? Vector(econ.size(), 1.0) : cfg.budgets;
  return default_bids(econ, budgets,
                      cfg.bid_source == BidSource::EqualSplit ? BidPreset::EqualSplit
                                                              : BidPreset::ProportionalToA);
}

ResolvedRun resolve(const RunConfig& cfg) {
  if (cfg.rounds < 1) bad("rounds must be at least 1");
  Economy econ = Economy::validate(cfg.a, cfg.labels);
  const Vector x0 = cfg.x0.empty() ? Vector(econ.size(), 1.0) : cfg.x0;
  MarketState start = init_state(econ, x0, initial_bids(cfg, econ), cfg.normalize_money);
  return ResolvedRun{std::move(econ), std::move(start), cfg.rounds, cfg.sim};
}

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) bad("run config must be a JSON object");
  RunConfig cfg;
  try {
    if (doc.contains("fixture")) {
      const Fixture& f = find_fixture(doc["fixture"].get<std::string>());
      if (f.kind == FixtureKind::Rules) bad("fixture " + f.name + " is not a trading-post run");
      cfg = f.run;
    }
    if (doc.contains("economy")) {
      const json& e = doc["economy"];
      Economy econ = e.is_string() ? load_economy(base_dir / e.get<std::string>()) : parse_economy(e);
      cfg.a = econ.coefficients();
      cfg.labels = econ.labels();
    } else if (!doc.contains("fixture")) {
      bad("run config needs \"economy\" or \"fixture\"");
    }
    if (doc.contains("x0")) cfg.x0 = vector_of(doc["x0"], "x0");
    if (doc.contains("bids")) {
      const json& b = doc["bids"];
      if (b.is_string()) {
        const std::string s = b.get<std::string>();
        if (s == "equal-split") cfg.bid_source = BidSource::EqualSplit;
        else if (s == "proportional-to-a") cfg.bid_source = BidSource::ProportionalToA;
        else bad("bids must be \"equal-split\", \"proportional-to-a\" or a matrix");
      } else {
        cfg.bid_source = BidSource::Explicit;
        cfg.bids = matrix_of(b, "bids");
      }
    }
    if (doc.contains("budgets")) cfg.budgets = vector_of(doc["budgets"], "budgets");
    if (doc.contains("normalize_money")) {
      if (!doc["normalize_money"].is_boolean()) bad("normalize_money must be true or false");
      cfg.normalize_money = doc["normalize_money"].get<bool>();
    }
    if (doc.contains("rounds")) cfg.rounds = count(doc["rounds"], "rounds");
    if (doc.contains("renorm_every")) cfg.sim.renorm_every = count(doc["renorm_every"], "renorm_every");
    if (doc.contains("bids_every")) cfg.sim.bids_every = count(doc["bids_every"], "bids_every");
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
  } catch (const json::exception& e) {
    bad(std::string("run config: ") + e.what());
  }
  if (cfg.rounds < 1) bad("rounds must be at least 1");
  return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
  json doc = {{"economy", {{"a", matrix_json(cfg.a)}}},
              {"normalize_money", cfg.normalize_money},
              {"rounds", cfg.rounds},
              {"renorm_every", cfg.sim.renorm_every},
              {"bids_every", cfg.sim.bids_every},
              {"seed", cfg.seed},
              {"output_dir", cfg.output_dir}};
  if (!cfg.labels.empty()) doc["economy"]["labels"] = cfg.labels;
  if (!cfg.x0.empty()) doc["x0"] = cfg.x0;
  switch (cfg.bid_source) {
    case BidSource::Explicit: doc["bids"] = matrix_json(cfg.bids); break;
    case BidSource::EqualSplit: doc["bids"] = "equal-split"; break;
    case BidSource::ProportionalToA: doc["bids"] = "proportional-to-a"; break;
  }
  if (!cfg.budgets.empty()) doc["budgets"] = cfg.budgets;
  return doc;
}

Vector SweepAxis::values() const {
  Vector out(steps);
  const double width = (hi - lo) / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) out[k] = lo + (static_cast<double>(k) + 0.5) * width;
  return out;
}

std::string SweepAxis::label() const {
  const char* sym = kind == SweepKind::Bid ? "b" : "a";
  return std::string(sym) + "[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
}

std::string_view to_string(Metric metric) noexcept {
  return metric == Metric::GiniAmounts ? "gini_amounts" : "gini_budgets";
}

SweepConfig parse_sweep_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) bad("sweep config must be a JSON object");
  SweepConfig cfg;
  try {
    if (doc.contains("fixture")) {
      const Fixture& f = find_fixture(doc["fixture"].get<std::string>());
      if (!f.sweep) bad("fixture " + f.name + " is not a sweep");
      cfg = *f.sweep;
    }
    if (doc.contains("base")) cfg.base = parse_run_config(doc["base"], base_dir);
    else if (!doc.contains("fixture")) bad("sweep config needs \"base\" or \"fixture\"");
    if (doc.contains("x")) cfg.x = parse_axis(doc["x"], "x");
    else if (!doc.contains("fixture")) bad("sweep config needs an \"x\" axis");
    if (doc.contains("y")) cfg.y = parse_axis(doc["y"], "y");
    else if (!doc.contains("fixture")) bad("sweep config needs a \"y\" axis");
    if (doc.contains("metric")) {
      const std::string m = doc["metric"].get<std::string>();
      if (m == "gini_amounts") cfg.metric = Metric::GiniAmounts;
      else if (m == "gini_budgets") cfg.metric = Metric::GiniBudgets;
      else bad("metric must be gini_amounts or gini_budgets");
    }
    if (doc.contains("rounds")) cfg.base.rounds = count(doc["rounds"], "rounds");
    if (doc.contains("workers")) cfg.workers = count(doc["workers"], "workers");
    if (doc.contains("steps")) cfg.x.steps = cfg.y.steps = count(doc["steps"], "steps");
  } catch (const json::exception& e) {
    bad(std::string("sweep config: ") + e.what());
  }
  const std::size_t n = cfg.base.a.size();
  for (const SweepAxis* ax : {&cfg.x, &cfg.y}) {
    if (ax->i >= n || ax->j >= n) bad("sweep axis " + ax->label() + " is outside the economy");
    if (ax->steps < 2) bad("grid resolution must be at least 2");
  }
  if (cfg.base.rounds < 1) bad("rounds must be at least 1");
  return cfg;
}

json sweep_config_to_json(const SweepConfig& cfg) {
  return {{"base", run_config_to_json(cfg.base)},
          {"x", axis_json(cfg.x)},
          {"y", axis_json(cfg.y)},
          {"metric", to_string(cfg.metric)},
          {"workers", cfg.workers}};
}

}  // namespace tpm
