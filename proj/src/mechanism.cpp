#include "tpm/mechanism.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tpm/error.hpp"

namespace tpm {

SplittingRule::SplittingRule(Matrix beta) : beta_(std::move(beta)) {
  const std::size_t n = beta_.size();
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = beta_(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw Error(Errc::ParameterOutOfRange, "beta[" + std::to_string(i + 1) + "][" +
                                                   std::to_string(j + 1) +
                                                   "] must be finite and non-negative");
      sum += v;
    }
    if (sum > 1.0 + kRuleTolerance)
      throw Error(Errc::ParameterOutOfRange,
                  "good " + std::to_string(j + 1) + " is allocated more than once");
  }
}

bool SplittingRule::is_non_wasteful(const Economy& econ) const {
  if (econ.size() != size()) return false;
  for (std::size_t j = 0; j < size(); ++j) {
    if (std::abs(beta_.col_sum(j) - 1.0) > kRuleTolerance) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (!econ.uses(i, j) && beta_(i, j) > 0.0) return false;
  }
  return true;
}

RuleSchedule constant_schedule(SplittingRule rule) {
  return [rule = std::move(rule)](std::size_t) { return rule; };
}

Vector apply_rule(const Economy& econ, const Vector& x, const SplittingRule& rule) {
  const std::size_t n = econ.size();
  if (x.size() != n || rule.size() != n)
    throw Error(Errc::DimensionMismatch, "economy, amounts and rule sizes differ");
  Vector next(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) next[i] += econ(i, j) * rule(i, j) * x[j];
  return next;
}

std::vector<Vector> run_schedule(const Economy& econ, const Vector& x0, const RuleSchedule& sched,
                                 std::size_t rounds) {
  std::vector<Vector> traj;
  traj.reserve(rounds + 1);
  traj.push_back(x0);
  for (std::size_t t = 0; t < rounds; ++t) traj.push_back(apply_rule(econ, traj.back(), sched(t)));
  return traj;
}

RuleSchedule cycle_routing_rule(const Economy& econ, const Cycle& cycle) {
  // Re-deriving the cycle checks its edges against this economy.
  const Cycle checked = Cycle::make(econ, cycle.vertices);
  Matrix beta(econ.size(), 0.0);
  for (std::size_t pos = 0; pos < checked.length(); ++pos)
    beta(checked.successor_of_position(pos), checked.vertices[pos]) = 1.0;
  return constant_schedule(SplittingRule(std::move(beta)));
}

SplittingRule self_rule(std::size_t n) {
  Matrix beta(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) beta(i, i) = 1.0;
  return SplittingRule(std::move(beta));
}

SplittingRule equal_split_rule(std::size_t n) {
  return SplittingRule(Matrix(n, 1.0 / static_cast<double>(n)));
}

ScheduledExample example_e1_schedule(double gamma, double eps) {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw Error(Errc::ParameterOutOfRange, "gamma must lie in [0, 1)");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::ParameterOutOfRange, "eps must lie in (0, 1)");

  Matrix a(5, 0.0);
  a(1, 0) = 1.0;
  a(2, 1) = 1.0;
  a(0, 2) = 1.0;
  a(3, 0) = 1.0;
  a(0, 4) = 1.0;
  a(4, 3) = 1.0 - eps;
  Economy econ = Economy::validate(std::move(a));

  auto make = [](double to_two) {
    Matrix beta(5, 0.0);
    beta(1, 0) = to_two;
    beta(3, 0) = 1.0 - to_two;
    beta(2, 1) = 1.0;
    beta(0, 2) = 1.0;
    beta(4, 3) = 1.0;
    beta(0, 4) = 1.0;
    return SplittingRule(std::move(beta));
  };
  RuleSchedule sched = [split = make(gamma), plain = make(1.0)](std::size_t t) {
    return t % 3 == 0 ? split : plain;
  };
  return ScheduledExample{std::move(econ), std::move(sched), Vector{1.0, 1.0, 1.0, 0.0, 0.0}};
}

SplittingRule random_rule(const Economy& econ, std::mt19937_64& rng, bool non_wasteful) {
  const std::size_t n = econ.size();
  std::gamma_distribution<double> draw(1.0, 1.0);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  Matrix beta(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!econ.uses(i, j)) continue;
      beta(i, j) = draw(rng);
      sum += beta(i, j);
    }
    if (!(sum > 0.0)) continue;
    const double scale = non_wasteful ? 1.0 : keep(rng);
    for (std::size_t i = 0; i < n; ++i) beta(i, j) *= scale / sum;
  }
  return SplittingRule(std::move(beta));
}

}  // namespace tpm
