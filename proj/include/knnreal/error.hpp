#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace knnreal {

enum class ErrorCode {
  // graph construction
  NotKRegular,
  SelfLoop,
  DuplicateEdge,
  IdOutOfRange,
  // point sets and realizations
  DimensionMismatch,
  DuplicatePoint,
  TooFewPoints,
  TieAtBoundary,
  // pair-order graph
  ResourceLimit,
  // line pipeline
  Stuck,
  WindowsInvalid,
  PostVerifyFailed,
  // approximation scheme
  FragmentOverfull,
  FragmentTooSmall,
  UnsolvedComponent,
  ImpossibleComponent,
  // io
  Parse,
  Usage,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotKRegular: return "NotKRegular";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::IdOutOfRange: return "IdOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::TieAtBoundary: return "TieAtBoundary";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::Stuck: return "Stuck";
    case ErrorCode::WindowsInvalid: return "WindowsInvalid";
    case ErrorCode::PostVerifyFailed: return "PostVerifyFailed";
    case ErrorCode::FragmentOverfull: return "FragmentOverfull";
    case ErrorCode::FragmentTooSmall: return "FragmentTooSmall";
    case ErrorCode::UnsolvedComponent: return "UnsolvedComponent";
    case ErrorCode::ImpossibleComponent: return "ImpossibleComponent";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

/// Recoverable failure with a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The description without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

/// A proven invariant failed. Always a bug in this library, never bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace knnreal
