#include "tpm/error.hpp"

namespace tpm {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::NegativeCoefficient: return "NegativeCoefficient";
    case Errc::NotStronglyConnected: return "NotStronglyConnected";
    case Errc::TooManyPlayers: return "TooManyPlayers";
    case Errc::NoCycle: return "NoCycle";
    case Errc::InvalidCycle: return "InvalidCycle";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ParameterOutOfRange: return "ParameterOutOfRange";
    case Errc::DegenerateStart: return "DegenerateStart";
    case Errc::NonPositiveAmount: return "NonPositiveAmount";
    case Errc::Overflow: return "Overflow";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::ZeroBidOnCycle: return "ZeroBidOnCycle";
    case Errc::WindowTooShort: return "WindowTooShort";
    case Errc::BestCycleNotUnique: return "BestCycleNotUnique";
    case Errc::TrajectoryTooShort: return "TrajectoryTooShort";
    case Errc::NoGoodCycle: return "NoGoodCycle";
    case Errc::NotCompleteGraph: return "NotCompleteGraph";
    case Errc::UnknownFixture: return "UnknownFixture";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace tpm
