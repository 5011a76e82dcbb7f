#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "tpm/economy.hpp"
#include "tpm/matrix.hpp"

namespace tpm {

/// Column-sum tolerance for splitting rules.
inline constexpr double kRuleTolerance = 1e-12;

/// One round of an abstract mechanism: beta(i, j) is the fraction of good j
/// handed to player i. Columns may sum to less than one; the rest is wasted.
class SplittingRule {
 public:
  /// Throws ParameterOutOfRange on negative or non-finite entries or a
  /// column summing above 1 + kRuleTolerance.
  explicit SplittingRule(Matrix beta);

  const Matrix& beta() const noexcept { return beta_; }
  std::size_t size() const noexcept { return beta_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return beta_(i, j); }

  /// Every column sums to one and nothing goes to a player who cannot use it.
  bool is_non_wasteful(const Economy& econ) const;

 private:
  Matrix beta_;
};

using RuleSchedule = std::function<SplittingRule(std::size_t round)>;

RuleSchedule constant_schedule(SplittingRule rule);

/// x'[i] = sum_j a(i, j) * beta(i, j) * x[j].
Vector apply_rule(const Economy& econ, const Vector& x, const SplittingRule& rule);

/// Amounts for rounds 0..rounds; element 0 is x0.
std::vector<Vector> run_schedule(const Economy& econ, const Vector& x0, const RuleSchedule& sched,
                                 std::size_t rounds);

/// Each good on the cycle goes entirely to its successor; other goods are
/// wasted. Throws InvalidCycle if the cycle is not one of econ's.
RuleSchedule cycle_routing_rule(const Economy& econ, const Cycle& cycle);

/// Every player keeps its own good.
SplittingRule self_rule(std::size_t n);

/// Each good split evenly among all n players, regardless of use.
SplittingRule equal_split_rule(std::size_t n);

struct ScheduledExample {
  Economy economy;
  RuleSchedule schedule;
  Vector x0;
};

/// Five agents: a good triangle 1->2->3->1 and a lossy detour 1->4->5->1
/// with factor 1 - eps. Every third round starting at round 0, player 1's
/// good is split gamma to player 2 and the rest to player 4; otherwise all
/// goods follow their unique outgoing edge. Player 1 then holds
/// (gamma + (1 - gamma)(1 - eps))^k after 3k rounds from x0 = e_1 + e_2 + e_3.
ScheduledExample example_e1_schedule(double gamma, double eps);

/// Random rule for property tests. Each column is drawn from a symmetric
/// Dirichlet over the players that use the good; when not non-wasteful the
/// column is additionally scaled by a uniform factor in [0, 1].
SplittingRule random_rule(const Economy& econ, std::mt19937_64& rng, bool non_wasteful);

}  // namespace tpm
