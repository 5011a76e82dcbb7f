#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tpm/economy.hpp"
#include "tpm/tradingpost.hpp"

namespace tpm {

/// Sum of |u_i - u_j| over all ordered pairs, divided by 2n * sum(u).
/// Throws ZeroVector when the sum is not positive.
double gini(std::span<const double> u);

struct GiniSeries {
  Vector amounts;  ///< per recorded round
  Vector budgets;
};

/// NaN where the vector sums to zero.
GiniSeries gini_series(const Trajectory& traj);

/// A cycle bid or amount below this share of the total money or amount
/// ends the potential check; past it the step's intermediate products
/// underflow and the check would only measure rounding.
inline constexpr double kPotentialFloor = 1e-100;

/// Largest |F(t) / (alpha^t F(0)) - 1| over recorded rounds, where F is the
/// product of the bids along the cycle times the amounts of its players and
/// alpha is the cycle product. Stops at the first round where a factor
/// falls below kPotentialFloor. Throws ZeroBidOnCycle if F(0) = 0.
double cycle_potential_check(const Trajectory& traj, const Cycle& cycle);

/// Least-squares slope of the log true amount of `player` against t over
/// rounds first..last (inclusive). Throws WindowTooShort below 10 samples.
double growth_rate(const Trajectory& traj, std::size_t player, std::size_t first,
                   std::size_t last);

/// Realized extrema of x_i(t) / alpha^(t/k) for the given best cycle.
struct GrowthBounds {
  Vector upper;  ///< per player; finite means bounded above on this run
  Vector lower;  ///< per player; only meaningful for cycle players
  std::vector<std::string> violations;
};

GrowthBounds growth_bounds_check(const Trajectory& traj, const Cycle& best);

struct TailOptions {
  double fraction = 0.1;
  std::size_t min_samples = 50;
  /// Successive windows over the second half of the run, used for the
  /// monotone-minimum checks.
  std::size_t windows = 5;
  /// Largest allowed deviation for a Gini value to count as repeating.
  double period_tolerance = 1e-4;
};

struct LimitReport {
  Cycle cycle;
  double w = 1.0;
  std::size_t tail_begin = 0;  ///< index into the trajectory

  /// Per cycle position p: share of good C[p-1] received by C[p], one value
  /// per recorded round with bids (NaN otherwise).
  std::vector<Vector> predecessor_fractions;
  /// Per cycle position: minimum of that share over each successive window.
  std::vector<Vector> predecessor_window_min;
  Vector predecessor_tail_min;

  /// Money bid across the cut between the cycle and everyone else.
  Vector cut_money;
  double cut_money_tail_max = 0.0;
  /// Share of all money held by cycle players, averaged over the tail.
  double money_on_cycle = 0.0;

  /// Budgets at the last aligned tail round; B_{C[p]}(t_ref + r) should be
  /// budget_limits[p + r].
  Vector budget_limits;
  double budget_residual = 0.0;
  /// Amounts divided by w^t at the same reference round, rotated along the
  /// cycle with the prefix products of the normalized edges.
  Vector amount_limits;
  double amount_residual = 0.0;
  /// Largest x_j(t) / w^t over off-cycle players at the final round.
  double off_cycle_max = 0.0;

  std::optional<std::size_t> gini_period;
};

/// Throws BestCycleNotUnique, or TrajectoryTooShort below 100 * |C| rounds.
LimitReport limit_report(const Trajectory& traj, const Economy& econ,
                         const TailOptions& opts = {});

struct InequalityReport {
  Vector log_ratio;  ///< log(x_i / x_j) per round, +inf once x_j is zero
  Vector window_min;
  bool diverges = false;
};

/// Tracks x_i / x_j for on-cycle i and off-cycle j. Divergence means the
/// window minima never decrease and the ratio has grown at least
/// `factor`-fold since round 0.
InequalityReport inequality_ratio(const Trajectory& traj, const Economy& econ, std::size_t i,
                                  std::size_t j, double factor = 100.0,
                                  const TailOptions& opts = {});

enum class PhaseTag { Grows, Vanishes, Bounded };

std::string_view to_string(PhaseTag tag) noexcept;

struct PhaseClass {
  std::vector<PhaseTag> tags;  ///< per spoke, in StarShape::spokes order
  double threshold = 0.0;
};

/// Spokes with alpha_i above 1/sqrt(alpha*) grow, below vanish, and equal
/// (relative 1e-9) stay bounded. Throws NoGoodCycle if alpha* <= 1.
PhaseClass star_phase(const StarShape& shape);

/// Simulation-side tag from a log-amount slope.
PhaseTag slope_tag(double slope, double eps = 1e-3);

/// Share of the center's budget bid on each spoke at round t, given the
/// shares at rounds 0, 1, 2.
Vector star_fraction_closed_form(const StarShape& shape, std::span<const Vector, 3> initial,
                                 std::size_t t);

enum class PeriodMode { Absolute, Normalized };

struct PeriodReport {
  std::size_t period = 0;
  std::size_t onset = 0;
  /// Cycles with positive bids throughout the tail whose product is not 1.
  /// Only checked in Absolute mode.
  std::vector<Cycle> non_unit_cycles;
  bool cross_check_ran = false;
};

/// Smallest T in [1, 64] with state(t + T) = state(t) over the tail. In
/// Absolute mode amounts are compared as true amounts, in Normalized mode
/// divided by their sum. Amounts are compared relative to the largest
/// amount and bids relative to the total money.
std::optional<PeriodReport> detect_period(const Trajectory& traj, const Economy& econ,
                                          double tol = 1e-9,
                                          PeriodMode mode = PeriodMode::Absolute);

struct FixedBidVerdict {
  bool bids_constant = false;
  double max_bid_change = 0.0;
  bool growth_identity = false;  ///< x_i(t+1) = a_ii x_i(t)
  double growth_residual = 0.0;
  bool cycle_identity = false;   ///< cycle product = product of self-loops
  double cycle_residual = 0.0;
  std::string note;
};

/// Throws NotCompleteGraph unless every coefficient is positive.
FixedBidVerdict fixed_bid_check(const Trajectory& traj, const Economy& econ, double tol = 1e-9);

}  // namespace tpm
