#pragma once

#include <stdexcept>
#include <string>

namespace narlab {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNoConnectedPair,
  kNegativeWeight,
  kDisconnected,
  kSourceEqualsTarget,
  kNotMaximumFlow,
  kRepairFailed,
  kNoPath,
  kOddSet,
  kSetTooLarge,
  kOddDegree,
  kTooLarge,
  kSchemaMismatch,
  kIo,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNoConnectedPair: return "NoConnectedPair";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kSourceEqualsTarget: return "SourceEqualsTarget";
    case ErrorCode::kNotMaximumFlow: return "NotMaximumFlow";
    case ErrorCode::kRepairFailed: return "RepairFailed";
    case ErrorCode::kNoPath: return "NoPath";
    case ErrorCode::kOddSet: return "OddSet";
    case ErrorCode::kSetTooLarge: return "SetTooLarge";
    case ErrorCode::kOddDegree: return "OddDegree";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace narlab
