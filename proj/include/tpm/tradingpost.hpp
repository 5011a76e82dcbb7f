#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "tpm/economy.hpp"
#include "tpm/matrix.hpp"

namespace tpm {

/// Amounts are stored as a mantissa; the true amount of player i is
/// x[i] * exp(log_scale). bid_fractions(i, j) = bids(i, j) / B_i and is
/// kept separately so a player whose budget or production hits zero still
/// has well-defined fractions to carry forward.
struct MarketState {
  Vector x;
  Matrix bids;
  Matrix bid_fractions;
  std::size_t t = 0;
  double log_scale = 0.0;

  std::size_t size() const noexcept { return x.size(); }
  Vector budgets() const { return bids.row_sums(); }
  double total_money() const { return bids.total(); }
  Vector true_amounts() const;
};

enum class BidPreset { EqualSplit, ProportionalToA };

/// Splits each budget over the goods the player uses, evenly or in
/// proportion to the coefficients.
Matrix default_bids(const Economy& econ, const Vector& budgets, BidPreset preset);

/// Checks x0 > 0 and that b0 is positive exactly where a is. Rescales the
/// bids to total one when `normalize_money` is set.
MarketState init_state(const Economy& econ, const Vector& x0, const Matrix& b0,
                       bool normalize_money = false);

/// Goods handed out at the trading posts: good j is split in proportion to
/// the bids on it, and discarded if nobody bids.
Matrix allocate(const Economy& econ, const MarketState& s);

struct StepRecord {
  Matrix received;
  Vector produced;
  Vector budgets_next;
  Matrix bids_next;
};

/// One round: allocation, production, collection of bids as next budgets,
/// and the proportional bid update. A player that produced nothing keeps
/// its previous bid fractions on the new budget.
std::pair<MarketState, StepRecord> step(const Economy& econ, const MarketState& s);

struct SimulationOptions {
  /// Divide x by its sum every this many rounds; 0 disables.
  std::size_t renorm_every = 1;
  /// Store bid matrices every this many rounds, starting at round 0; 0 stores none.
  std::size_t bids_every = 1;
};

struct Snapshot {
  std::size_t t = 0;
  Vector x;
  double log_scale = 0.0;
  Vector budgets;
  std::optional<Matrix> bids;
  std::optional<Matrix> bid_fractions;

  double true_amount(std::size_t i) const;
  /// log of the true amount; -inf for a zero amount.
  double log_amount(std::size_t i) const;
};

struct Trajectory {
  std::vector<Snapshot> rounds;
  MarketState final_state;

  std::size_t size() const noexcept { return rounds.size(); }
  std::size_t players() const noexcept { return final_state.size(); }
  const Snapshot& operator[](std::size_t k) const { return rounds[k]; }
};

/// Runs `rounds` steps from s0 and records rounds s0.t .. s0.t + rounds.
/// Throws Overflow when an amount leaves the floating-point range.
Trajectory simulate(const Economy& econ, const MarketState& s0, std::size_t rounds,
                    const SimulationOptions& opts = {});

}  // namespace tpm
