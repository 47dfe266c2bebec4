#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fraclab {

enum class ErrorCode {
  // dimer_counting
  WallTooClose,
  PositionOutOfRange,
  RegionOutOfRange,
  LengthMismatch,
  UnsupportedFilling,
  // ssh_lattice
  ConvergenceFailure,
  SymmetryViolation,
  IndexMismatch,
  WindowTouchesWall,
  // dirac_continuum
  AmbiguousAsymptotics,
  NonNormalizable,
  GridTooCoarse,
  NotNormalized,
  ScaleMismatch,
  // fock_charge
  UnknownLabel,
  DimensionTooLarge,
  // runner and shared validation
  ConfigInvalid,
};

/// Process exit status a failure maps to: 2 config, 3 numerical, 4 invariant.
enum class ErrorCategory { Config = 2, Numerical = 3, Invariant = 4 };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace fraclab
