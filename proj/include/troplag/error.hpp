#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace troplag {

enum class ErrorCode {
  DimensionMismatch,
  ShapeMismatch,
  InvalidArgument,
  ZeroSpan,
  NotTrivalent,
  NotATree,
  TreeOnly,
  InvalidCurve,
  EmptyDomain,
  DeltaTooLarge,
  NotBoundaryConfig,
  NoBasis,
  InconsistentMomenta,
  SplitDegenerate,
  NonGenericConfig,
  KappaCap,
  NotEvenPrimitive,
  NotBissectrice,
  NonFiniteSigma,
  DegenerateVertex,
  InternalInconsistency,
  ParseError,
  SchemaError,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::ZeroSpan: return "ZERO_SPAN";
    case ErrorCode::NotTrivalent: return "NOT_TRIVALENT";
    case ErrorCode::NotATree: return "NOT_A_TREE";
    case ErrorCode::TreeOnly: return "TREE_ONLY";
    case ErrorCode::InvalidCurve: return "INVALID_CURVE";
    case ErrorCode::EmptyDomain: return "EMPTY_DOMAIN";
    case ErrorCode::DeltaTooLarge: return "DELTA_TOO_LARGE";
    case ErrorCode::NotBoundaryConfig: return "NOT_BOUNDARY_CONFIG";
    case ErrorCode::NoBasis: return "NO_BASIS";
    case ErrorCode::InconsistentMomenta: return "INCONSISTENT_MOMENTA";
    case ErrorCode::SplitDegenerate: return "SPLIT_DEGENERATE";
    case ErrorCode::NonGenericConfig: return "NON_GENERIC_CONFIG";
    case ErrorCode::KappaCap: return "KAPPA_CAP";
    case ErrorCode::NotEvenPrimitive: return "NOT_EVEN_PRIMITIVE";
    case ErrorCode::NotBissectrice: return "NOT_BISSECTRICE";
    case ErrorCode::NonFiniteSigma: return "NON_FINITE_SIGMA";
    case ErrorCode::DegenerateVertex: return "DEGENERATE_VERTEX";
    case ErrorCode::InternalInconsistency: return "INTERNAL_INCONSISTENCY";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::SchemaError: return "SCHEMA_ERROR";
  }
  return "UNKNOWN";
}

/// Exception carrying one of the workbench error codes. The message is
/// prefixed with the code name so it can be surfaced verbatim by the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const noexcept { return error_code_name(code_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace troplag
