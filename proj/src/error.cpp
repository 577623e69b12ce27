#include "sheafsym/error.hpp"

namespace sheafsym {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NegativeInput: return "NegativeInput";
    case ErrorKind::NotExact: return "NotExact";
    case ErrorKind::NotClosedUnderUnion: return "NotClosedUnderUnion";
    case ErrorKind::NotClosedUnderIntersection: return "NotClosedUnderIntersection";
    case ErrorKind::MissingEmptyOrWhole: return "MissingEmptyOrWhole";
    case ErrorKind::DuplicatePoint: return "DuplicatePoint";
    case ErrorKind::UnknownPoint: return "UnknownPoint";
    case ErrorKind::NotAnOpenSet: return "NotAnOpenSet";
    case ErrorKind::NotASubset: return "NotASubset";
    case ErrorKind::NotACover: return "NotACover";
    case ErrorKind::NonEnumerableSections: return "NonEnumerableSections";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NonUnitDeterminant: return "NonUnitDeterminant";
    case ErrorKind::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotABasis: return "NotABasis";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::NotSkew: return "NotSkew";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NoUnitPivot: return "NoUnitPivot";
    case ErrorKind::NonConstantRank: return "NonConstantRank";
    case ErrorKind::NotSymplectic: return "NotSymplectic";
    case ErrorKind::DegenerateForm: return "DegenerateForm";
    case ErrorKind::CayleyHamiltonViolation: return "CayleyHamiltonViolation";
    case ErrorKind::NoRationalEigenvalue: return "NoRationalEigenvalue";
    case ErrorKind::NotAnEigenpair: return "NotAnEigenpair";
    case ErrorKind::IncompatibleFamily: return "IncompatibleFamily";
    case ErrorKind::NotComplete: return "NotComplete";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::vector<std::string> witness)
    : std::runtime_error(std::string(error_name(kind)) + ": " + message),
      kind_(kind),
      detail_(message),
      witness_(std::move(witness)) {}

}  // namespace sheafsym
