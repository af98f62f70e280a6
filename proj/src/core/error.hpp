#pragma once

#include <stdexcept>
#include <string>

namespace mbspec {

enum class ErrorKind {
  MeetClosureViolation,
  NoLeastElement,
  NotAMember,
  DimensionMismatch,
  NotASubspace,
  NotAStrictSubspace,
  LengthMismatch,
  HermitianClosureViolation,
  SupportViolation,
  InvarianceViolation,
  SectorMismatch,
  MissingDecomposition,
  NonFactorizableTerm,
  EmptySubset,
  DimensionCap,
  NoConvergence,
  OverlapViolation,
  ParseError,
  ValidationError,
  InvalidArgument,
  IoError,
  StaleArtifact,
};

// Validation errors map to exit status 2, solver errors to 3.
enum class ErrorCategory { validation, solver, io };

const char* to_string(ErrorKind kind) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace mbspec
