#include "srip/error.hpp"

namespace srip {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::DegenerateSpectrum: return "DegenerateSpectrum";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ZeroScaling: return "ZeroScaling";
    case Errc::NotUnimodular: return "NotUnimodular";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::CoherenceViolation: return "CoherenceViolation";
    case Errc::NTooLarge: return "NTooLarge";
    case Errc::Overflow: return "Overflow";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::NotATree: return "NotATree";
    case Errc::VertexNotSingleVisit: return "VertexNotSingleVisit";
    case Errc::FormatError: return "FormatError";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::IntegrityFailure: return "IntegrityFailure";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

bool Error::is_contract_violation() const noexcept {
  switch (code_) {
    case Errc::DegenerateSpectrum:
    case Errc::CountMismatch:
    case Errc::CoherenceViolation:
    case Errc::IntegrityFailure:
      return true;
    default:
      return false;
  }
}

}  // namespace srip
