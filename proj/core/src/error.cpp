#include "awlab/error.hpp"

namespace awlab {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::RootIsolated: return "RootIsolated";
    case Errc::Unreachable: return "Unreachable";
    case Errc::NoExit: return "NoExit";
    case Errc::NotConnected: return "NotConnected";
    case Errc::RootNotInRegion: return "RootNotInRegion";
    case Errc::RegionNotContained: return "RegionNotContained";
    case Errc::SolverFailed: return "SolverFailed";
    case Errc::TransientUnsupported: return "TransientUnsupported";
    case Errc::UnsupportedCombination: return "UnsupportedCombination";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ExcessiveTruncation: return "ExcessiveTruncation";
    case Errc::DegenerateRegression: return "DegenerateRegression";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace awlab
