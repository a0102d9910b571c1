#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ksubdiv {

enum class Errc {
  NotPrime,
  WrongResidueClass,
  TooSmall,
  DivisionByZero,
  ModulusMismatch,
  IndexSetTooLarge,
  TableMismatch,
  UnknownVariable,
  ZeroPolynomial,
  DegreeZeroBoth,
  NotDivisible,
  MissingAssignment,
  ParseError,
  Overflow,
  ScaleRefused,
  UnknownCase,
  UnknownCheck,
  DerivationMismatch,
  ClaimFailed,
  ReconstructionMismatch,
  Io,
};

std::string_view to_string(Errc code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ksubdiv
