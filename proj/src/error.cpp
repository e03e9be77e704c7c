// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/error.hpp"

namespace octok {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kInvalidCode: return "InvalidCode";
    case ErrorCode::kLeafCollision: return "LeafCollision";
    case ErrorCode::kAlreadyExpanded: return "AlreadyExpanded";
    case ErrorCode::kMalformedSequence: return "MalformedSequence";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t position,
             std::size_t other)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      position_(position),
      other_(other) {}

}  // namespace octok
