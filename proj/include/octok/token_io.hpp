// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OCTOK_TOKEN_IO_HPP_
#define OCTOK_TOKEN_IO_HPP_

#include <string>
#include <string_view>

#include "octok/tokenizer.hpp"

namespace octok {

inline constexpr std::string_view kTokenSchema = "octok/1";

// One header object line followed by one line per token, keys in fixed order,
// reals printed with six decimals:
//
//   {"schema":"octok/1","L":6,"c0":7.680000,"c_leaf":0.240000,"c_r":0.010000,
//    "origin":[x,y,z],"mntp":false}
//   {"k":"C","t":255,"e":[12,12,12],"l":0,"f":0,"c":[x,y,z]}
//
// The header is a single line in the file. Output is byte-deterministic.
std::string write_jsonl(const TokenSequence& sequence);

// Throws ParseError (with the 1-based line number) on malformed input.
TokenSequence read_jsonl(std::string_view text);

// Fixed six-decimal rendering used by every text format; never prints "-0".
std::string format_real(double value);

}  // namespace octok

#endif  // OCTOK_TOKEN_IO_HPP_
