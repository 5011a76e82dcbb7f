#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tpm/io.hpp"
#include "tpm/mechanism.hpp"

namespace tpm {

enum class FixtureKind {
  Market,  ///< a trading-post run
  Rules,   ///< a splitting-rule schedule, not a trading-post start
  Sweep,   ///< a heatmap template
};

struct RuleRun {
  Economy economy;
  std::vector<std::pair<std::string, RuleSchedule>> schedules;
  Vector x0;
  std::size_t rounds = 0;
};

struct Fixture {
  std::string name;
  std::string description;
  FixtureKind kind = FixtureKind::Market;
  RunConfig run;                     ///< Market, and the base of a Sweep
  std::optional<SweepConfig> sweep;  ///< Sweep only
};

/// All registered fixtures, in a fixed order.
const std::vector<Fixture>& fixtures();

/// Throws UnknownFixture.
const Fixture& find_fixture(std::string_view name);

/// Schedules behind the Rules fixtures: "appA" (keep-your-own and equal
/// split) and "appE1" (gamma = 0.5, eps = 0.5 unless given).
RuleRun rule_fixture(std::string_view name, double gamma = 0.5, double eps = 0.5);

/// Budgets (25, 100) as printed for the period-3 example; fig2 itself
/// normalizes them to a total of one.
inline constexpr double kFig2Budgets[2] = {25.0, 100.0};

}  // namespace tpm
