#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sheafsym {

enum class ErrorKind {
  DivisionByZero,
  NegativeInput,
  NotExact,
  NotClosedUnderUnion,
  NotClosedUnderIntersection,
  MissingEmptyOrWhole,
  DuplicatePoint,
  UnknownPoint,
  NotAnOpenSet,
  NotASubset,
  NotACover,
  NonEnumerableSections,
  DimensionMismatch,
  DomainMismatch,
  DimensionTooLarge,
  NotSquare,
  NonUnitDeterminant,
  DegreeTooLarge,
  DegreeOverflow,
  ArityMismatch,
  NotSymmetric,
  NotABasis,
  DegenerateMetric,
  NotSkew,
  Degenerate,
  NoUnitPivot,
  NonConstantRank,
  NotSymplectic,
  DegenerateForm,
  CayleyHamiltonViolation,
  NoRationalEigenvalue,
  NotAnEigenpair,
  IncompatibleFamily,
  // A presheaf failed S1 or S2 on the checked cover.
  NotComplete,
  MalformedInput,
  // A certificate that must hold by construction failed to verify.
  InvariantViolation,
};

std::string_view error_name(ErrorKind kind) noexcept;

// All library failures are reported through this type. The witness carries
// the data that demonstrates the failure (point labels, offending open sets,
// and so on) in a printable form.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::vector<std::string> witness = {});

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }
  const std::vector<std::string>& witness() const noexcept { return witness_; }
  // The message without the error-name prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  std::vector<std::string> witness_;
};

}  // namespace sheafsym
