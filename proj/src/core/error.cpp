#include "core/error.hpp"

namespace mbspec {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MeetClosureViolation: return "MeetClosureViolation";
    case ErrorKind::NoLeastElement: return "NoLeastElement";
    case ErrorKind::NotAMember: return "NotAMember";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotASubspace: return "NotASubspace";
    case ErrorKind::NotAStrictSubspace: return "NotAStrictSubspace";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::HermitianClosureViolation: return "HermitianClosureViolation";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::InvarianceViolation: return "InvarianceViolation";
    case ErrorKind::SectorMismatch: return "SectorMismatch";
    case ErrorKind::MissingDecomposition: return "MissingDecomposition";
    case ErrorKind::NonFactorizableTerm: return "NonFactorizableTerm";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::DimensionCap: return "DimensionCap";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::OverlapViolation: return "OverlapViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::StaleArtifact: return "StaleArtifact";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionCap:
    case ErrorKind::NoConvergence:
      return ErrorCategory::solver;
    case ErrorKind::IoError:
      return ErrorCategory::io;
    default:
      return ErrorCategory::validation;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace mbspec
