#include "tpm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tpm/error.hpp"

namespace tpm {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t tail_length(std::size_t size, const TailOptions& opts) {
  const auto by_fraction =
      static_cast<std::size_t>(std::ceil(opts.fraction * static_cast<double>(size)));
  return std::min(size, std::max(by_fraction, opts.min_samples));
}

// Minimum over each of `windows` consecutive slices of series[begin, end),
// ignoring NaN entries.
Vector window_minima(const Vector& series, std::size_t begin, std::size_t end,
                     std::size_t windows) {
  Vector out;
  if (end <= begin || windows == 0) return out;
  const std::size_t len = end - begin;
  windows = std::min(windows, len);
  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t lo = begin + len * w / windows;
    const std::size_t hi = begin + len * (w + 1) / windows;
    double m = kNaN;
    for (std::size_t k = lo; k < hi; ++k)
      if (!std::isnan(series[k]) && !(series[k] >= m)) m = series[k];
    out.push_back(m);
  }
  return out;
}

bool non_decreasing(const Vector& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] >= v[k - 1])) return false;
  return true;
}

double log_cycle_product(const Cycle& c) { return std::log(c.product); }

BestCycle unique_best(const Economy& econ) {
  BestCycle best = best_cycle(econ);
  if (!best.ties.empty()) {
    std::string names = best.cycle.to_string();
    for (const Cycle& c : best.ties) names += " " + c.to_string();
    throw Error(Errc::BestCycleNotUnique, "tied best cycles: " + names);
  }
  return best;
}

// Largest amount ratio the two snapshots differ by, measured against the
// largest entry; in Normalized mode each vector is first divided by its sum.
double amount_distance(const Snapshot& a, const Snapshot& b, PeriodMode mode) {
  const std::size_t n = a.x.size();
  double sa = 1.0, sb = 1.0;
  if (mode == PeriodMode::Absolute) {
    const double m = std::max(a.log_scale, b.log_scale);
    sa = std::exp(a.log_scale - m);
    sb = std::exp(b.log_scale - m);
  } else {
    const double ta = std::accumulate(a.x.begin(), a.x.end(), 0.0);
    const double tb = std::accumulate(b.x.begin(), b.x.end(), 0.0);
    if (!(ta > 0.0) || !(tb > 0.0)) return kInf;
    sa = 1.0 / ta;
    sb = 1.0 / tb;
  }
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = a.x[i] * sa, v = b.x[i] * sb;
    scale = std::max({scale, std::abs(u), std::abs(v)});
    diff = std::max(diff, std::abs(u - v));
  }
  return scale > 0.0 ? diff / scale : 0.0;
}

double bid_distance(const Matrix& a, const Matrix& b) {
  const double total = std::max(a.total(), b.total());
  const double diff = Matrix::max_abs_diff(a, b);
  return total > 0.0 ? diff / total : diff;
}

bool same_state(const Snapshot& a, const Snapshot& b, double tol, PeriodMode mode) {
  if (!a.bids || !b.bids) return false;
  return amount_distance(a, b, mode) <= tol && bid_distance(*a.bids, *b.bids) <= tol;
}

}  // namespace

double gini(std::span<const double> u) {
  const std::size_t n = u.size();
  double sum = 0.0;
  for (double v : u) sum += v;
  if (n == 0 || !(sum > 0.0) || !std::isfinite(sum))
    throw Error(Errc::ZeroVector, "Gini index needs a positive total");
  double pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pairs += std::abs(u[i] - u[j]);
  return pairs / (2.0 * static_cast<double>(n) * sum);
}

GiniSeries gini_series(const Trajectory& traj) {
  GiniSeries out;
  out.amounts.reserve(traj.size());
  out.budgets.reserve(traj.size());
  auto safe = [](const Vector& v) {
    try {
      return gini(v);
    } catch (const Error&) {
      return kNaN;
    }
  };
  for (const Snapshot& s : traj.rounds) {
    out.amounts.push_back(safe(s.x));
    out.budgets.push_back(safe(s.budgets));
  }
  return out;
}

double cycle_potential_check(const Trajectory& traj, const Cycle& cycle) {
  if (traj.size() == 0 || !traj[0].bids)
    throw Error(Errc::ZeroBidOnCycle, "no bids recorded at the first round");

  // nullopt once a bid or amount on the cycle has decayed below
  // kPotentialFloor of its total: from there on the step's intermediate
  // products leave the normal floating-point range.
  auto log_potential = [&](const Snapshot& s) -> std::optional<double> {
    const double money = s.bids->total();
    double amounts = 0.0;
    for (double v : s.x) amounts += v;
    double acc = 0.0;
    for (std::size_t pos = 0; pos < cycle.length(); ++pos) {
      const std::size_t cur = cycle.vertices[pos];
      const double bid = (*s.bids)(cycle.successor_of_position(pos), cur);
      const double amount = s.x[cur];
      if (!(bid > kPotentialFloor * money) || !(amount > kPotentialFloor * amounts))
        return std::nullopt;
      acc += std::log(bid) + std::log(amount) + s.log_scale;
    }
    return acc;
  };

  const auto base = log_potential(traj[0]);
  if (!base) throw Error(Errc::ZeroBidOnCycle, "cycle " + cycle.to_string() + " has a zero bid");
  const double log_alpha = log_cycle_product(cycle);
  double worst = 0.0;
  for (const Snapshot& s : traj.rounds) {
    if (!s.bids) continue;
    const auto lf = log_potential(s);
    if (!lf) break;
    const double elapsed = static_cast<double>(s.t - traj[0].t);
    worst = std::max(worst, std::abs(std::expm1(*lf - *base - elapsed * log_alpha)));
  }
  return worst;
}

double growth_rate(const Trajectory& traj, std::size_t player, std::size_t first,
                   std::size_t last) {
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t count = 0;
  for (const Snapshot& s : traj.rounds) {
    if (s.t < first || s.t > last) continue;
    const double y = s.log_amount(player);
    if (!std::isfinite(y)) continue;
    const double t = static_cast<double>(s.t);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++count;
  }
  if (count < 10)
    throw Error(Errc::WindowTooShort, "only " + std::to_string(count) + " usable samples");
  const double m = static_cast<double>(count);
  const double mt = st / m, my = sy / m;
  return (sty / m - mt * my) / (stt / m - mt * mt);
}

GrowthBounds growth_bounds_check(const Trajectory& traj, const Cycle& best) {
  const std::size_t n = traj.players();
  const double rate = log_cycle_product(best) / static_cast<double>(best.length());
  Vector hi(n, -kInf), lo(n, kInf);
  for (const Snapshot& s : traj.rounds) {
    const double elapsed = static_cast<double>(s.t - traj[0].t);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = s.log_amount(i) - elapsed * rate;
      hi[i] = std::max(hi[i], r);
      lo[i] = std::min(lo[i], r);
    }
  }
  GrowthBounds out;
  out.upper.resize(n);
  out.lower.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.upper[i] = std::exp(hi[i]);
    out.lower[i] = std::exp(lo[i]);
    if (!std::isfinite(out.upper[i]))
      out.violations.push_back("player " + std::to_string(i + 1) + " is not bounded above");
    if (best.contains(i) && !(out.lower[i] > 0.0))
      out.violations.push_back("player " + std::to_string(i + 1) + " reaches zero");
  }
  return out;
}

LimitReport limit_report(const Trajectory& traj, const Economy& econ, const TailOptions& opts) {
  const BestCycle best = unique_best(econ);
  const Cycle& c = best.cycle;
  const std::size_t k = c.length();
  const std::size_t n = econ.size();
  if (traj.size() < 100 * k + 1)
    throw Error(Errc::TrajectoryTooShort, "need at least " + std::to_string(100 * k) + " rounds");

  LimitReport rep;
  rep.cycle = c;
  rep.w = c.geo_mean;
  const double log_w = std::log(rep.w);
  const std::size_t size = traj.size();
  rep.tail_begin = size - tail_length(size, opts);
  const std::size_t half = size / 2;

  std::vector<bool> on_cycle(n, false);
  for (std::size_t v : c.vertices) on_cycle[v] = true;

  rep.predecessor_fractions.assign(k, Vector(size, kNaN));
  rep.cut_money.assign(size, kNaN);
  double money_share_sum = 0.0;
  std::size_t money_share_count = 0;
  for (std::size_t idx = 0; idx < size; ++idx) {
    const Snapshot& s = traj[idx];
    if (!s.bids) continue;
    const Matrix& b = *s.bids;
    for (std::size_t p = 0; p < k; ++p) {
      const std::size_t v = c.vertices[p];
      const std::size_t pred = c.vertices[(p + k - 1) % k];
      const double price = b.col_sum(pred);
      if (price > 0.0) rep.predecessor_fractions[p][idx] = b(v, pred) / price;
    }
    double cut = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (on_cycle[i] != on_cycle[j]) cut += b(i, j);
    rep.cut_money[idx] = cut;
    if (idx >= rep.tail_begin) {
      double held = 0.0;
      for (std::size_t v : c.vertices) held += s.budgets[v];
      const double total = b.total();
      if (total > 0.0) {
        money_share_sum += held / total;
        ++money_share_count;
      }
    }
  }
  for (std::size_t p = 0; p < k; ++p) {
    rep.predecessor_window_min.push_back(
        window_minima(rep.predecessor_fractions[p], half, size, opts.windows));
    rep.predecessor_tail_min.push_back(
        window_minima(rep.predecessor_fractions[p], rep.tail_begin, size, 1).front());
  }
  rep.cut_money_tail_max = 0.0;
  for (std::size_t idx = rep.tail_begin; idx < size; ++idx)
    if (!std::isnan(rep.cut_money[idx]))
      rep.cut_money_tail_max = std::max(rep.cut_money_tail_max, rep.cut_money[idx]);
  rep.money_on_cycle = money_share_count ? money_share_sum / static_cast<double>(money_share_count)
                                         : kNaN;

  // Reference round: the last tail round with t divisible by k.
  std::size_t ref = size - 1 - traj[size - 1].t % k;
  if (ref < rep.tail_begin) ref = size - 1;
  const Snapshot& sref = traj[ref];
  auto log_normalized = [&](const Snapshot& s, std::size_t v) {
    return s.log_amount(v) - static_cast<double>(s.t) * log_w;
  };
  Vector log_star(k);
  for (std::size_t p = 0; p < k; ++p) {
    rep.budget_limits.push_back(sref.budgets[c.vertices[p]]);
    log_star[p] = log_normalized(sref, c.vertices[p]);
    rep.amount_limits.push_back(std::exp(log_star[p]));
  }
  // log of the normalized edge from C[p] to C[p+1].
  Vector log_edge(k);
  for (std::size_t p = 0; p < k; ++p)
    log_edge[p] = std::log(econ(c.successor_of_position(p), c.vertices[p])) - log_w;

  for (std::size_t idx = rep.tail_begin; idx < size; ++idx) {
    const Snapshot& s = traj[idx];
    const auto shift = static_cast<long long>(s.t) - static_cast<long long>(sref.t);
    const auto kk = static_cast<long long>(k);
    const auto r = static_cast<std::size_t>(((shift % kk) + kk) % kk);
    for (std::size_t p = 0; p < k; ++p) {
      const std::size_t v = c.vertices[p];
      rep.budget_residual =
          std::max(rep.budget_residual, std::abs(s.budgets[v] - rep.budget_limits[(p + r) % k]));
      const std::size_t from = (p + k - r) % k;
      double predicted = log_star[from];
      for (std::size_t m = 0; m < r; ++m) predicted += log_edge[(from + m) % k];
      const double actual = log_normalized(s, v);
      const double dev = std::abs(std::expm1(predicted - actual));
      rep.amount_residual = std::max(rep.amount_residual, std::isnan(dev) ? kInf : dev);
    }
  }

  const Snapshot& last = traj[size - 1];
  for (std::size_t j = 0; j < n; ++j)
    if (!on_cycle[j]) rep.off_cycle_max = std::max(rep.off_cycle_max, std::exp(log_normalized(last, j)));

  const Vector g = gini_series(traj).amounts;
  const std::size_t tail = size - rep.tail_begin;
  for (std::size_t p = 1; p <= std::min<std::size_t>(64, tail / 2); ++p) {
    double worst = 0.0;
    for (std::size_t idx = rep.tail_begin; idx + p < size; ++idx) {
      const double d = std::abs(g[idx + p] - g[idx]);
      worst = std::max(worst, std::isnan(d) ? kInf : d);
    }
    if (worst <= opts.period_tolerance) {
      rep.gini_period = p;
      break;
    }
  }
  return rep;
}

InequalityReport inequality_ratio(const Trajectory& traj, const Economy& econ, std::size_t i,
                                  std::size_t j, double factor, const TailOptions& opts) {
  InequalityReport rep;
  if (i == j) {
    rep.log_ratio.assign(traj.size(), 0.0);
    rep.window_min = window_minima(rep.log_ratio, traj.size() / 2, traj.size(), opts.windows);
    return rep;
  }
  const BestCycle best = unique_best(econ);
  if (!best.cycle.contains(i) || best.cycle.contains(j))
    throw Error(Errc::ParameterOutOfRange,
                "expected player " + std::to_string(i + 1) + " on and player " +
                    std::to_string(j + 1) + " off the best cycle " + best.cycle.to_string());
  rep.log_ratio.reserve(traj.size());
  for (const Snapshot& s : traj.rounds) {
    const double xi = s.x[i], xj = s.x[j];
    if (!(xj > 0.0))
      rep.log_ratio.push_back(xi > 0.0 ? kInf : kNaN);
    else if (!(xi > 0.0))
      rep.log_ratio.push_back(-kInf);
    else
      rep.log_ratio.push_back(std::log(xi) - std::log(xj));
  }
  rep.window_min = window_minima(rep.log_ratio, traj.size() / 2, traj.size(), opts.windows);
  if (!rep.log_ratio.empty())
    rep.diverges = non_decreasing(rep.window_min) &&
                   rep.log_ratio.back() - rep.log_ratio.front() >= std::log(factor);
  return rep;
}

std::string_view to_string(PhaseTag tag) noexcept {
  switch (tag) {
    case PhaseTag::Grows: return "Grows";
    case PhaseTag::Vanishes: return "Vanishes";
    case PhaseTag::Bounded: return "Bounded";
  }
  return "Unknown";
}

PhaseClass star_phase(const StarShape& shape) {
  if (!(shape.alpha_star > 1.0 + kProductTolerance))
    throw Error(Errc::NoGoodCycle, "star has no good cycle (alpha* <= 1)");
  PhaseClass out;
  out.threshold = 1.0 / std::sqrt(shape.alpha_star);
  for (double a : shape.alpha) {
    if (std::abs(a - out.threshold) <= 1e-9 * out.threshold)
      out.tags.push_back(PhaseTag::Bounded);
    else
      out.tags.push_back(a > out.threshold ? PhaseTag::Grows : PhaseTag::Vanishes);
  }
  return out;
}

PhaseTag slope_tag(double slope, double eps) {
  if (slope > eps) return PhaseTag::Grows;
  if (slope < -eps) return PhaseTag::Vanishes;
  return PhaseTag::Bounded;
}

Vector star_fraction_closed_form(const StarShape& shape, std::span<const Vector, 3> initial,
                                 std::size_t t) {
  const Vector& f = initial[t % 3];
  const std::size_t m = shape.alpha.size();
  if (f.size() != m) throw Error(Errc::DimensionMismatch, "one fraction per spoke expected");
  const double rounds = static_cast<double>(t / 3);
  // Softmax in log space keeps large exponents finite.
  Vector logs(m, -kInf);
  double top = -kInf;
  for (std::size_t i = 0; i < m; ++i) {
    if (f[i] > 0.0) logs[i] = std::log(f[i]) + rounds * std::log(shape.alpha[i]);
    top = std::max(top, logs[i]);
  }
  Vector out(m, 0.0);
  if (top == -kInf) return out;
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = std::exp(logs[i] - top);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

std::optional<PeriodReport> detect_period(const Trajectory& traj, const Economy& econ, double tol,
                                          PeriodMode mode) {
  constexpr std::size_t kMaxPeriod = 64;
  const std::size_t size = traj.size();
  if (size < 4) return std::nullopt;
  const std::size_t max_period = std::min(kMaxPeriod, (size - 1) / 3);
  const std::size_t tail = std::min(size, std::max(size / 10, 2 * kMaxPeriod + 1));
  const std::size_t begin = size - tail;

  for (std::size_t period = 1; period <= max_period; ++period) {
    bool holds = true;
    std::size_t compared = 0;
    for (std::size_t idx = begin; idx + period < size && holds; ++idx) {
      if (!traj[idx].bids || !traj[idx + period].bids) continue;
      holds = same_state(traj[idx], traj[idx + period], tol, mode);
      ++compared;
    }
    if (!holds || compared == 0) continue;

    PeriodReport rep;
    rep.period = period;
    std::size_t onset = begin;
    while (onset > 0 && same_state(traj[onset - 1], traj[onset - 1 + period], tol, mode)) --onset;
    rep.onset = traj[onset].t;

    // Exact recurrence only: a normalized period allows growth.
    if (mode == PeriodMode::Absolute && econ.size() <= kDefaultEnumerationLimit) {
      rep.cross_check_ran = true;
      for (const Cycle& c : enumerate_simple_cycles(econ)) {
        bool bid_throughout = true;
        for (std::size_t idx = begin; idx < size && bid_throughout; ++idx) {
          if (!traj[idx].bids) continue;
          for (std::size_t pos = 0; pos < c.length() && bid_throughout; ++pos)
            bid_throughout = (*traj[idx].bids)(c.successor_of_position(pos), c.vertices[pos]) > 0.0;
        }
        if (bid_throughout && std::abs(c.product - 1.0) > 1e-9) rep.non_unit_cycles.push_back(c);
      }
    }
    return rep;
  }
  return std::nullopt;
}

FixedBidVerdict fixed_bid_check(const Trajectory& traj, const Economy& econ, double tol) {
  if (!econ.is_complete())
    throw Error(Errc::NotCompleteGraph, "fixed-bid identities need every coefficient positive");
  const std::size_t n = econ.size();
  FixedBidVerdict v;

  for (std::size_t idx = 0; idx + 1 < traj.size(); ++idx) {
    const Snapshot& a = traj[idx];
    const Snapshot& b = traj[idx + 1];
    if (a.bids && b.bids) v.max_bid_change = std::max(v.max_bid_change, bid_distance(*a.bids, *b.bids));
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = std::abs(std::expm1(b.log_amount(i) - a.log_amount(i) - std::log(econ(i, i))));
      v.growth_residual = std::max(v.growth_residual, std::isnan(dev) ? kInf : dev);
    }
  }
  if (n <= kDefaultEnumerationLimit) {
    for (const Cycle& c : enumerate_simple_cycles(econ)) {
      double loops = 0.0;
      for (std::size_t u : c.vertices) loops += std::log(econ(u, u));
      v.cycle_residual = std::max(v.cycle_residual, std::abs(std::expm1(std::log(c.product) - loops)));
    }
  }
  v.bids_constant = v.max_bid_change < tol;
  if (!v.bids_constant) {
    v.note = "bids change over the run; identities not applicable";
    return v;
  }
  v.growth_identity = v.growth_residual <= 1e-9;
  v.cycle_identity = v.cycle_residual <= 1e-9;
  if (!v.growth_identity) v.note = "bids constant but growth differs from the self-loops";
  else if (!v.cycle_identity) v.note = "bids constant but a cycle product differs from its self-loops";
  else v.note = "bids constant; both identities hold";
  return v;
}

}  // namespace tpm
