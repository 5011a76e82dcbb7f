#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "tpm/io.hpp"

namespace tpm {

struct GiniGrid {
  SweepAxis x;
  SweepAxis y;
  Metric metric = Metric::GiniAmounts;
  Vector x_values;
  Vector y_values;
  std::vector<Vector> values;  ///< values[row for y][column for x]
  std::size_t failures = 0;    ///< cells that could not be simulated (NaN)
};

/// Metric at the final round for one grid cell. Coefficient axes are
/// applied first; bids are then rebuilt for the edited economy and bid axes
/// set b(i, j) to the swept value, spreading the rest of player i's budget
/// over its other bids in proportion to their current sizes.
double heatmap_cell(const SweepConfig& cfg, double x_value, double y_value);

/// Runs every cell on `cfg.workers` threads (hardware concurrency when 0).
/// The grid does not depend on the number of workers.
GiniGrid run_heatmap(const SweepConfig& cfg);

/// First row holds the x values, first column the y values.
void write_grid_csv(std::ostream& out, const GiniGrid& grid);

}  // namespace tpm
