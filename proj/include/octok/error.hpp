// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OCTOK_ERROR_HPP_
#define OCTOK_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace octok {

enum class ErrorCode {
  kInvalidInput,
  kTooLarge,
  kOutOfBounds,
  kInvalidCode,
  kLeafCollision,
  kAlreadyExpanded,
  kMalformedSequence,
  kParseError,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported as octok::Error. `position()` carries a
// token index (MalformedSequence), a line number (ParseError) or the first
// site of a colliding pair (LeafCollision); `other()` carries the second site
// of the pair. Both are npos when not applicable.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorCode code, const std::string& message, std::size_t position = npos,
        std::size_t other = npos);

  ErrorCode code() const noexcept { return code_; }
  std::size_t position() const noexcept { return position_; }
  std::size_t other() const noexcept { return other_; }

 private:
  ErrorCode code_;
  std::size_t position_;
  std::size_t other_;
};

}  // namespace octok

#endif  // OCTOK_ERROR_HPP_
