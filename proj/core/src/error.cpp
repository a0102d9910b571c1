#include "ksubdiv/error.hpp"

namespace ksubdiv {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::WrongResidueClass: return "WrongResidueClass";
    case Errc::TooSmall: return "TooSmall";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::ModulusMismatch: return "ModulusMismatch";
    case Errc::IndexSetTooLarge: return "IndexSetTooLarge";
    case Errc::TableMismatch: return "TableMismatch";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::DegreeZeroBoth: return "DegreeZeroBoth";
    case Errc::NotDivisible: return "NotDivisible";
    case Errc::MissingAssignment: return "MissingAssignment";
    case Errc::ParseError: return "ParseError";
    case Errc::Overflow: return "Overflow";
    case Errc::ScaleRefused: return "ScaleRefused";
    case Errc::UnknownCase: return "UnknownCase";
    case Errc::UnknownCheck: return "UnknownCheck";
    case Errc::DerivationMismatch: return "DerivationMismatch";
    case Errc::ClaimFailed: return "ClaimFailed";
    case Errc::ReconstructionMismatch: return "ReconstructionMismatch";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ksubdiv
