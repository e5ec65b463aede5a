#pragma once

#include <stdexcept>
#include <string>

namespace strass {

enum class ErrorCode {
  MalformedHeader,
  DimensionMismatch,
  DuplicateToken,
  ZeroVector,
  EmptySet,
  AllZeroSelection,
  NonFiniteLoss,
  MalformedCheckpoint,
  VersionMismatch,
  MalformedRecord,
  DuplicateId,
  NoUsableSentences,
  EmptySplit,
  InvalidArgument,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateToken: return "DuplicateToken";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::AllZeroSelection: return "AllZeroSelection";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::MalformedCheckpoint: return "MalformedCheckpoint";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::NoUsableSentences: return "NoUsableSentences";
    case ErrorCode::EmptySplit: return "EmptySplit";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "UnknownError";
}

}  // namespace strass
