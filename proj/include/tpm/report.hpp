#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "tpm/economy.hpp"
#include "tpm/tradingpost.hpp"

namespace tpm {

/// 17 significant digits; "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double v);

/// round, player, x_mantissa, log_scale, budget, gini_x, gini_B; one row per
/// player per recorded round, players 1-based.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// round, i, j, bid for every recorded bid matrix.
void write_bids_csv(std::ostream& out, const Trajectory& traj);

/// One line: growth class and best cycle, or the all-neutral case.
std::string economy_headline(const Economy& econ);

/// Validation summary, cycle inventory (up to the enumeration limit), best
/// cycle with ties, growth class and star shape.
nlohmann::json analyze_economy(const Economy& econ);

/// Growth rates, potential drift, periodicity, limit statistics and star
/// phases for a finished run. Parts whose preconditions fail are reported
/// with the reason instead.
nlohmann::json analyze_run(const Economy& econ, const Trajectory& traj);

/// Flattens a report into "key: value" lines with aligned values.
std::string to_text(const nlohmann::json& report);

}  // namespace tpm
