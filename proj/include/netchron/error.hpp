#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netchron {

enum class ErrorKind {
  DuplicateEdge,
  SelfLoop,
  EmptyInput,
  InvalidPermutation,
  NumericalBlowup,
  StageMismatch,
  BadDims,
  DimensionMismatch,
  RowMismatch,
  InsufficientLabels,
  InconsistentMatrix,
  OutOfDomain,
  EmptyPairs,
  DegenerateTruth,
  ParseError,
  BadSpec,
  FeatureSchemaMismatch,
  CoverageError,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvalidPermutation: return "InvalidPermutation";
    case ErrorKind::NumericalBlowup: return "NumericalBlowup";
    case ErrorKind::StageMismatch: return "StageMismatch";
    case ErrorKind::BadDims: return "BadDims";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RowMismatch: return "RowMismatch";
    case ErrorKind::InsufficientLabels: return "InsufficientLabels";
    case ErrorKind::InconsistentMatrix: return "InconsistentMatrix";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::EmptyPairs: return "EmptyPairs";
    case ErrorKind::DegenerateTruth: return "DegenerateTruth";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::FeatureSchemaMismatch: return "FeatureSchemaMismatch";
    case ErrorKind::CoverageError: return "CoverageError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Process exit code: 3 for data errors, 4 for numerical errors.
  int exit_code() const noexcept {
    return (kind_ == ErrorKind::NumericalBlowup || kind_ == ErrorKind::OutOfDomain) ? 4 : 3;
  }

 private:
  ErrorKind kind_;
};

}  // namespace netchron
