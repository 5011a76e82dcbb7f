#include "tpm/tradingpost.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tpm/error.hpp"

namespace tpm {
namespace {

std::string pair_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

Matrix fractions_of(const Matrix& bids) {
  const std::size_t n = bids.size();
  Matrix f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double budget = bids.row_sum(i);
    if (!(budget > 0.0)) continue;
    for (std::size_t j = 0; j < n; ++j) f(i, j) = bids(i, j) / budget;
  }
  return f;
}

}  // namespace

Vector MarketState::true_amounts() const {
  Vector out(x.size());
  const double scale = std::exp(log_scale);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * scale;
  return out;
}

Matrix default_bids(const Economy& econ, const Vector& budgets, BidPreset preset) {
  const std::size_t n = econ.size();
  if (budgets.size() != n) throw Error(Errc::DimensionMismatch, "budget vector size differs from n");
  Matrix b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double weight_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (econ.uses(i, j)) weight_sum += preset == BidPreset::EqualSplit ? 1.0 : econ(i, j);
    if (!(weight_sum > 0.0)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (!econ.uses(i, j)) continue;
      const double weight = preset == BidPreset::EqualSplit ? 1.0 : econ(i, j);
      b(i, j) = budgets[i] * weight / weight_sum;
    }
  }
  return b;
}

MarketState init_state(const Economy& econ, const Vector& x0, const Matrix& b0,
                       bool normalize_money) {
  const std::size_t n = econ.size();
  if (x0.size() != n || b0.size() != n)
    throw Error(Errc::DimensionMismatch, "initial amounts or bids do not match the economy");
  for (std::size_t i = 0; i < n; ++i)
    if (!(x0[i] > 0.0) || !std::isfinite(x0[i]))
      throw Error(Errc::NonPositiveAmount,
                  "initial amount of player " + std::to_string(i + 1) + " must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double b = b0(i, j);
      if (!std::isfinite(b) || b < 0.0)
        throw Error(Errc::DegenerateStart, "bid " + pair_name(i, j) + " is negative or not finite");
      if (econ.uses(i, j) && !(b > 0.0))
        throw Error(Errc::DegenerateStart, "bid " + pair_name(i, j) + " is zero but a" +
                                               pair_name(i, j) + " > 0");
      if (!econ.uses(i, j) && b > 0.0)
        throw Error(Errc::DegenerateStart, "bid " + pair_name(i, j) + " is positive but a" +
                                               pair_name(i, j) + " = 0");
    }
  }

  MarketState s;
  s.x = x0;
  s.bids = b0;
  if (normalize_money) {
    const double total = b0.total();
    if (!(total > 0.0)) throw Error(Errc::DegenerateStart, "no money in the economy");
    s.bids = b0.scaled(1.0 / total);
  }
  s.bid_fractions = fractions_of(s.bids);
  return s;
}

Matrix allocate(const Economy& econ, const MarketState& s) {
  const std::size_t n = econ.size();
  Matrix y(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double price = s.bids.col_sum(j);
    if (!(price > 0.0)) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (s.bids(i, j) > 0.0) y(i, j) = s.bids(i, j) / price * s.x[j];
  }
  return y;
}

std::pair<MarketState, StepRecord> step(const Economy& econ, const MarketState& s) {
  const std::size_t n = econ.size();
  StepRecord rec;
  rec.received = allocate(econ, s);
  rec.produced.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rec.produced[i] += econ(i, j) * rec.received(i, j);
  rec.budgets_next = s.bids.col_sums();

  MarketState next;
  next.x = rec.produced;
  next.t = s.t + 1;
  next.log_scale = s.log_scale;
  next.bid_fractions = s.bid_fractions;
  next.bids = Matrix(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (rec.produced[i] > 0.0) {
      for (std::size_t j = 0; j < n; ++j)
        next.bid_fractions(i, j) = econ(i, j) * rec.received(i, j) / rec.produced[i];
    }
    for (std::size_t j = 0; j < n; ++j)
      next.bids(i, j) = next.bid_fractions(i, j) * rec.budgets_next[i];
  }
  rec.bids_next = next.bids;
  return {std::move(next), std::move(rec)};
}

double Snapshot::true_amount(std::size_t i) const { return x[i] * std::exp(log_scale); }

double Snapshot::log_amount(std::size_t i) const {
  if (!(x[i] > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(x[i]) + log_scale;
}

namespace {

Snapshot snapshot_of(const MarketState& s, bool with_bids) {
  Snapshot snap;
  snap.t = s.t;
  snap.x = s.x;
  snap.log_scale = s.log_scale;
  snap.budgets = s.budgets();
  if (with_bids) {
    snap.bids = s.bids;
    snap.bid_fractions = s.bid_fractions;
  }
  return snap;
}

}  // namespace

Trajectory simulate(const Economy& econ, const MarketState& s0, std::size_t rounds,
                    const SimulationOptions& opts) {
  if (s0.size() != econ.size())
    throw Error(Errc::DimensionMismatch, "state does not match the economy");
  Trajectory traj;
  traj.rounds.reserve(rounds + 1);
  traj.rounds.push_back(snapshot_of(s0, opts.bids_every > 0));

  MarketState s = s0;
  for (std::size_t k = 1; k <= rounds; ++k) {
    s = step(econ, s).first;
    if (opts.renorm_every > 0 && k % opts.renorm_every == 0) {
      double sum = 0.0;
      for (double v : s.x) sum += v;
      if (sum > 0.0 && std::isfinite(sum)) {
        for (double& v : s.x) v /= sum;
        s.log_scale += std::log(sum);
      }
    }
    for (double v : s.x)
      if (!std::isfinite(v))
        throw Error(Errc::Overflow, "amounts left the floating-point range at round " +
                                        std::to_string(s.t) +
                                        (opts.renorm_every ? "" : "; enable renormalization"));
    const bool with_bids = opts.bids_every > 0 && k % opts.bids_every == 0;
    traj.rounds.push_back(snapshot_of(s, with_bids));
  }
  traj.final_state = std::move(s);
  return traj;
}

}  // namespace tpm
