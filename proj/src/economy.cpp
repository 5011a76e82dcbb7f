#include "tpm/economy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "tpm/error.hpp"

namespace tpm {
namespace {

void check_entries(const Matrix& a) {
  if (a.size() == 0) throw Error(Errc::NonSquare, "economy has no players");
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double v = a(i, j);
      if (!std::isfinite(v))
        throw Error(Errc::NegativeCoefficient, "a[" + std::to_string(i + 1) + "][" +
                                                   std::to_string(j + 1) + "] is not finite");
      if (v < 0.0)
        throw Error(Errc::NegativeCoefficient, "a[" + std::to_string(i + 1) + "][" +
                                                   std::to_string(j + 1) + "] < 0");
    }
  }
}

// Players reachable from `start` following goods (good j -> player i when
// a(i, j) > 0), or against them when `reverse`.
std::vector<bool> reachable(const Matrix& a, std::size_t start, bool reverse) {
  const std::size_t n = a.size();
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  seen[start] = true;
  q.push(start);
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (std::size_t w = 0; w < n; ++w) {
      const double edge = reverse ? a(v, w) : a(w, v);
      if (edge > 0.0 && !seen[w]) {
        seen[w] = true;
        q.push(w);
      }
    }
  }
  return seen;
}

std::vector<std::vector<std::size_t>> successor_lists(const Economy& econ) {
  const std::size_t n = econ.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t good = 0; good < n; ++good)
    for (std::size_t player = 0; player < n; ++player)
      if (econ.uses(player, good)) succ[good].push_back(player);
  return succ;
}

// Johnson's circuit search restricted to vertices >= s.
class JohnsonSearch {
 public:
  JohnsonSearch(const Economy& econ, std::vector<Cycle>& out)
      : econ_(econ), succ_(successor_lists(econ)), out_(out) {}

  void run() {
    const std::size_t n = econ_.size();
    for (std::size_t s = 0; s < n; ++s) {
      start_ = s;
      blocked_.assign(n, false);
      block_map_.assign(n, {});
      circuit(s);
    }
  }

 private:
  bool circuit(std::size_t v) {
    bool found = false;
    stack_.push_back(v);
    blocked_[v] = true;
    for (std::size_t w : succ_[v]) {
      if (w < start_) continue;
      if (w == start_) {
        out_.push_back(Cycle::make(econ_, stack_));
        found = true;
      } else if (!blocked_[w] && circuit(w)) {
        found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (std::size_t w : succ_[v]) {
        if (w < start_) continue;
        auto& list = block_map_[w];
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
      }
    }
    stack_.pop_back();
    return found;
  }

  void unblock(std::size_t u) {
    blocked_[u] = false;
    auto pending = std::move(block_map_[u]);
    block_map_[u].clear();
    for (std::size_t w : pending)
      if (blocked_[w]) unblock(w);
  }

  const Economy& econ_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<Cycle>& out_;
  std::size_t start_ = 0;
  std::vector<bool> blocked_;
  std::vector<std::vector<std::size_t>> block_map_;
  std::vector<std::size_t> stack_;
};

// Karp's maximum mean cycle on weights sign * log a. Every vertex is a
// source (D_0 = 0), so any cycle anywhere in the graph is found.
Cycle karp(const Economy& econ, double sign) {
  const std::size_t n = econ.size();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Edge {
    std::size_t from, to;
    double weight;
  };
  std::vector<Edge> edges;
  for (std::size_t player = 0; player < n; ++player)
    for (std::size_t good = 0; good < n; ++good)
      if (econ.uses(player, good)) edges.push_back({good, player, sign * std::log(econ(player, good))});

  std::vector<Vector> best(n + 1, Vector(n, kNegInf));
  std::vector<std::vector<std::size_t>> pred(n + 1, std::vector<std::size_t>(n, kNone));
  std::fill(best[0].begin(), best[0].end(), 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (const Edge& e : edges) {
      if (best[k - 1][e.from] == kNegInf) continue;
      const double cand = best[k - 1][e.from] + e.weight;
      if (cand > best[k][e.to]) {
        best[k][e.to] = cand;
        pred[k][e.to] = e.from;
      }
    }
  }

  // Each maximal n-edge walk contains a cycle; the walk ending at Karp's
  // critical vertex contains an optimal one. Scanning every end vertex
  // covers it without computing the critical vertex separately. Walks are
  // split into simple cycles with a stack: a revisit pops the loop closed
  // since the previous visit.
  std::optional<Cycle> winner;
  double winner_mean = kNegInf;
  std::vector<std::size_t> walk(n + 1);
  for (std::size_t end = 0; end < n; ++end) {
    if (best[n][end] == kNegInf) continue;
    walk[n] = end;
    for (std::size_t k = n; k >= 1; --k) walk[k - 1] = pred[k][walk[k]];
    std::vector<std::size_t> stack;
    std::vector<bool> on_stack(n, false);
    for (std::size_t v : walk) {
      if (on_stack[v]) {
        auto first = std::find(stack.begin(), stack.end(), v);
        std::vector<std::size_t> verts(first, stack.end());
        for (std::size_t u : verts) on_stack[u] = false;
        stack.erase(first, stack.end());
        Cycle c = Cycle::make(econ, std::move(verts));
        const double mean = sign * std::log(c.geo_mean);
        if (!winner || mean > winner_mean) {
          winner = std::move(c);
          winner_mean = mean;
        }
      }
      stack.push_back(v);
      on_stack[v] = true;
    }
  }
  if (!winner) throw Error(Errc::NoCycle, "positive-edge subgraph is acyclic");
  return *winner;
}

}  // namespace

Economy::Economy(Matrix a, std::vector<std::string> labels)
    : a_(std::move(a)), labels_(std::move(labels)) {
  for (std::size_t i = 0; i < a_.size(); ++i)
    for (std::size_t j = 0; j < a_.size(); ++j)
      if (a_(i, j) > 0.0) ++positive_edges_;
  const auto fwd = reachable(a_, 0, false);
  const auto bwd = reachable(a_, 0, true);
  strongly_connected_ = std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
                        std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

Economy Economy::from_coefficients(Matrix a, std::vector<std::string> labels) {
  check_entries(a);
  if (!labels.empty() && labels.size() != a.size())
    throw Error(Errc::DimensionMismatch, "labels size does not match player count");
  return Economy(std::move(a), std::move(labels));
}

Economy Economy::validate(Matrix a, std::vector<std::string> labels) {
  Economy econ = from_coefficients(std::move(a), std::move(labels));
  if (!econ.strongly_connected_) {
    const auto fwd = reachable(econ.a_, 0, false);
    const auto bwd = reachable(econ.a_, 0, true);
    for (std::size_t v = 0; v < econ.size(); ++v) {
      if (!fwd[v])
        throw Error(Errc::NotStronglyConnected,
                    "player " + std::to_string(v + 1) + " is unreachable from player 1");
      if (!bwd[v])
        throw Error(Errc::NotStronglyConnected,
                    "player 1 is unreachable from player " + std::to_string(v + 1));
    }
  }
  return econ;
}

bool Economy::is_complete() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (!(a_(i, j) > 0.0)) return false;
  return true;
}

Economy Economy::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw Error(Errc::ParameterOutOfRange, "scale factor must be positive and finite");
  return Economy(a_.scaled(factor), labels_);
}

bool Cycle::contains(std::size_t player) const {
  return std::find(vertices.begin(), vertices.end(), player) != vertices.end();
}

std::size_t Cycle::predecessor(std::size_t player) const {
  auto it = std::find(vertices.begin(), vertices.end(), player);
  if (it == vertices.end()) throw Error(Errc::InvalidCycle, "player not on cycle");
  const auto pos = static_cast<std::size_t>(it - vertices.begin());
  return vertices[(pos + vertices.size() - 1) % vertices.size()];
}

Cycle Cycle::make(const Economy& econ, std::vector<std::size_t> vertices) {
  if (vertices.empty() || vertices.size() > econ.size())
    throw Error(Errc::InvalidCycle, "cycle length out of range");
  std::vector<bool> seen(econ.size(), false);
  for (std::size_t v : vertices) {
    if (v >= econ.size()) throw Error(Errc::InvalidCycle, "vertex out of range");
    if (seen[v]) throw Error(Errc::InvalidCycle, "repeated vertex " + std::to_string(v + 1));
    seen[v] = true;
  }
  auto smallest = std::min_element(vertices.begin(), vertices.end());
  std::rotate(vertices.begin(), smallest, vertices.end());

  Cycle c;
  c.vertices = std::move(vertices);
  double product = 1.0;
  double log_sum = 0.0;
  for (std::size_t pos = 0; pos < c.length(); ++pos) {
    const std::size_t from = c.vertices[pos];
    const std::size_t to = c.successor_of_position(pos);
    const double a = econ(to, from);
    if (!(a > 0.0))
      throw Error(Errc::InvalidCycle, "no positive edge from " + std::to_string(from + 1) +
                                          " to " + std::to_string(to + 1));
    product *= a;
    log_sum += std::log(a);
  }
  c.product = product;
  c.geo_mean = std::exp(log_sum / static_cast<double>(c.length()));
  return c;
}

std::string Cycle::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(vertices[k] + 1);
  }
  return s + ")";
}

CycleSign cycle_sign(double product) noexcept {
  if (std::abs(product - 1.0) <= kProductTolerance) return CycleSign::Neutral;
  return product > 1.0 ? CycleSign::Good : CycleSign::Bad;
}

std::vector<Cycle> enumerate_simple_cycles(const Economy& econ, std::size_t limit) {
  if (econ.size() > limit)
    throw Error(Errc::TooManyPlayers, std::to_string(econ.size()) +
                                          " players exceeds the enumeration limit of " +
                                          std::to_string(limit));
  std::vector<Cycle> out;
  JohnsonSearch(econ, out).run();
  return out;
}

Cycle max_mean_cycle(const Economy& econ) { return karp(econ, 1.0); }

Cycle min_mean_cycle(const Economy& econ) { return karp(econ, -1.0); }

BestCycle best_cycle(const Economy& econ, std::size_t limit) {
  if (econ.size() > limit) return BestCycle{max_mean_cycle(econ), {}, false};

  auto cycles = enumerate_simple_cycles(econ, limit);
  if (cycles.empty()) throw Error(Errc::NoCycle, "positive-edge subgraph is acyclic");
  auto top = std::max_element(cycles.begin(), cycles.end(),
                              [](const Cycle& a, const Cycle& b) { return a.geo_mean < b.geo_mean; });
  BestCycle result{*top, {}, true};
  for (auto it = cycles.begin(); it != cycles.end(); ++it) {
    if (it == top) continue;
    if (std::abs(it->geo_mean - top->geo_mean) <= kTieTolerance * top->geo_mean)
      result.ties.push_back(*it);
  }
  return result;
}

std::string_view to_string(GrowthTag tag) noexcept {
  switch (tag) {
    case GrowthTag::VanishesAlways: return "VanishesAlways";
    case GrowthTag::GrowsUnderAnyNonWasteful: return "GrowsUnderAnyNonWasteful";
    case GrowthTag::GrowsUnderSome: return "GrowsUnderSome";
    case GrowthTag::NoGrowthPossible: return "NoGrowthPossible";
  }
  return "Unknown";
}

GrowthClass classify(const Economy& econ, std::size_t limit) {
  GrowthClass result;
  Cycle top, bottom;
  bool any_good = false, all_good = false, all_bad = false;

  if (econ.size() <= limit) {
    const auto cycles = enumerate_simple_cycles(econ, limit);
    if (cycles.empty()) throw Error(Errc::NoCycle, "positive-edge subgraph is acyclic");
    auto by_mean = [](const Cycle& a, const Cycle& b) { return a.geo_mean < b.geo_mean; };
    top = *std::max_element(cycles.begin(), cycles.end(), by_mean);
    bottom = *std::min_element(cycles.begin(), cycles.end(), by_mean);
    auto count = [&](CycleSign s) {
      return std::count_if(cycles.begin(), cycles.end(),
                           [&](const Cycle& c) { return cycle_sign(c.product) == s; });
    };
    const auto n_good = count(CycleSign::Good);
    const auto n_bad = count(CycleSign::Bad);
    const auto total = static_cast<std::ptrdiff_t>(cycles.size());
    any_good = n_good > 0;
    all_good = n_good == total;
    all_bad = n_bad == total;
  } else {
    // Extremal means decide the quantifiers: some cycle is good iff the
    // max-mean cycle is, every cycle is good iff the min-mean cycle is.
    top = max_mean_cycle(econ);
    bottom = min_mean_cycle(econ);
    any_good = cycle_sign(top.product) == CycleSign::Good;
    all_good = cycle_sign(bottom.product) == CycleSign::Good;
    all_bad = cycle_sign(top.product) == CycleSign::Bad;
  }

  result.max_geo_mean = top.geo_mean;
  result.min_geo_mean = bottom.geo_mean;
  if (all_bad) {
    result.tag = GrowthTag::VanishesAlways;
  } else if (any_good) {
    result.tag = all_good ? GrowthTag::GrowsUnderAnyNonWasteful : GrowthTag::GrowsUnderSome;
    result.witness = top;
  } else {
    result.tag = GrowthTag::NoGrowthPossible;
  }
  return result;
}

NormalizedEconomy normalize(const Economy& econ) {
  const double w = best_cycle(econ).cycle.geo_mean;
  return NormalizedEconomy{econ.scaled(1.0 / w), w};
}

std::optional<StarShape> detect_star(const Economy& econ) {
  const std::size_t n = econ.size();
  if (n < 2) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i)
    if (econ.uses(i, i)) return std::nullopt;

  std::optional<std::size_t> center;
  for (std::size_t c = 0; c < n; ++c) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (i == c) continue;
      ok = econ.uses(i, c) && econ.uses(c, i);
      for (std::size_t j = 0; j < n && ok; ++j)
        if (j != c && econ.uses(i, j)) ok = false;
    }
    if (ok) {
      if (center) return std::nullopt;  // two candidate centers: not a star
      center = c;
    }
  }
  if (!center) return std::nullopt;

  StarShape s;
  s.center = *center;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == s.center) continue;
    s.spokes.push_back(i);
    s.lambda.push_back(econ(i, s.center));
    s.mu.push_back(econ(s.center, i));
    s.alpha.push_back(s.lambda.back() * s.mu.back());
  }
  s.alpha_star = *std::max_element(s.alpha.begin(), s.alpha.end());
  return s;
}

Economy make_star(std::span<const double> lambda, std::span<const double> mu) {
  if (lambda.size() != mu.size() || lambda.empty())
    throw Error(Errc::DimensionMismatch, "lambda and mu must be non-empty and equal length");
  const std::size_t n = lambda.size() + 1;
  Matrix a(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a(i, n - 1) = lambda[i];
    a(n - 1, i) = mu[i];
  }
  return Economy::validate(std::move(a));
}

}  // namespace tpm
