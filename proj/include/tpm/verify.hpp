#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tpm {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the library's invariants on seeded random economies and the
/// registered fixtures. Deterministic for a given seed.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed = 1);

}  // namespace tpm
