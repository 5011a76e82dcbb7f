#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tpm {

enum class Errc {
  NonSquare,
  NegativeCoefficient,
  NotStronglyConnected,
  TooManyPlayers,
  NoCycle,
  InvalidCycle,
  DimensionMismatch,
  ParameterOutOfRange,
  DegenerateStart,
  NonPositiveAmount,
  Overflow,
  ZeroVector,
  ZeroBidOnCycle,
  WindowTooShort,
  BestCycleNotUnique,
  TrajectoryTooShort,
  NoGoodCycle,
  NotCompleteGraph,
  UnknownFixture,
  InvalidConfig,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (tests, the CLI's exit-code mapping) can branch on the kind.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tpm
