#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpm/economy.hpp"
#include "tpm/tradingpost.hpp"

namespace tpm {

/// Reads {"a": [[...], ...], "labels": [...]} and validates the economy.
/// Throws InvalidConfig on malformed JSON and the economy errors otherwise.
Economy parse_economy(const nlohmann::json& doc);
Economy load_economy(const std::filesystem::path& path);
nlohmann::json economy_to_json(const Economy& econ);

enum class BidSource { Explicit, EqualSplit, ProportionalToA };

/// Everything needed to start and run one trajectory. Empty x0 or budgets
/// mean one unit per player.
struct RunConfig {
  Matrix a;
  std::vector<std::string> labels;
  Vector x0;
  BidSource bid_source = BidSource::EqualSplit;
  Matrix bids;
  Vector budgets;
  bool normalize_money = false;
  std::size_t rounds = 1000;
  SimulationOptions sim;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
};

struct ResolvedRun {
  Economy economy;
  MarketState start;
  std::size_t rounds = 0;
  SimulationOptions sim;
};

/// Validates the economy and the starting state.
ResolvedRun resolve(const RunConfig& cfg);

/// Starting bids for cfg.a, before validation against the economy.
Matrix initial_bids(const RunConfig& cfg, const Economy& econ);

/// Keys: "fixture" (a registered run to start from), "economy" (inline
/// object or a path relative to `base_dir`), "x0", "bids" ("equal-split",
/// "proportional-to-a" or a matrix), "budgets", "normalize_money",
/// "rounds", "renorm_every", "bids_every", "seed", "output_dir".
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");
nlohmann::json run_config_to_json(const RunConfig& cfg);

enum class SweepKind { Bid, Edge, SelfLoop };
enum class Metric { GiniAmounts, GiniBudgets };

/// One heatmap axis. Values are cell centres: lo + (k + 0.5)(hi - lo)/steps.
struct SweepAxis {
  SweepKind kind = SweepKind::Bid;
  std::size_t i = 0;
  std::size_t j = 0;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t steps = 64;

  Vector values() const;
  /// e.g. "b[1][2]" or "a[2][2]".
  std::string label() const;
};

struct SweepConfig {
  RunConfig base;
  SweepAxis x;
  SweepAxis y;
  Metric metric = Metric::GiniAmounts;
  std::size_t workers = 0;  ///< 0 picks the hardware concurrency
};

/// Keys: "base" (a run config object), "x" and "y" axes with "kind"
/// ("bid", "edge", "self_loop"), 1-based "i" and "j", "min", "max",
/// "steps"; "metric" ("gini_amounts" or "gini_budgets"); "rounds" and
/// "workers" override the base.
SweepConfig parse_sweep_config(const nlohmann::json& doc,
                               const std::filesystem::path& base_dir = ".");
nlohmann::json sweep_config_to_json(const SweepConfig& cfg);

std::string_view to_string(Metric metric) noexcept;

/// Reads a whole JSON file; InvalidConfig if it cannot be read or parsed.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace tpm
