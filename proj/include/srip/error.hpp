#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srip {

enum class Errc {
  InvalidArgument,
  NotHermitian,
  DegenerateSpectrum,
  DimensionMismatch,
  ZeroScaling,
  NotUnimodular,
  CountMismatch,
  CoherenceViolation,
  NTooLarge,
  Overflow,
  BudgetExceeded,
  NotATree,
  VertexNotSingleVisit,
  FormatError,
  VersionMismatch,
  IntegrityFailure,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

  /// True for failures of a mathematical contract, as opposed to bad input.
  bool is_contract_violation() const noexcept;

 private:
  Errc code_;
};

}  // namespace srip
