#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace regscope {

enum class ErrorCode {
  EmptyPath,
  UnknownRoot,
  ManifestInvalid,
  Unparseable,
  MalformedReport,
  MalformedDataset,
  EmptyDataset,
  InvalidProfile,
  DimensionMismatch,
  InvalidArgument,
  IoError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::EmptyPath: return "EmptyPath";
    case ErrorCode::UnknownRoot: return "UnknownRoot";
    case ErrorCode::ManifestInvalid: return "ManifestInvalid";
    case ErrorCode::Unparseable: return "Unparseable";
    case ErrorCode::MalformedReport: return "MalformedReport";
    case ErrorCode::MalformedDataset: return "MalformedDataset";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Single exception type for all recoverable data errors. The code is part of
// the contract (tests match on it); the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace regscope
