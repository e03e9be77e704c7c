// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/token_io.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <optional>

#include "json.hpp"
#include "octok/error.hpp"

namespace octok {
namespace {

using nlohmann::json;

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + what, line);
}

std::string format_vec(Vec3 v) {
  return "[" + format_real(v.x) + "," + format_real(v.y) + "," + format_real(v.z) + "]";
}

TokenKind kind_from_letter(std::string_view letter, std::size_t line) {
  if (letter == "B") return TokenKind::kBos;
  if (letter == "E") return TokenKind::kEos;
  if (letter == "C") return TokenKind::kCode;
  if (letter == "A") return TokenKind::kAtom;
  if (letter == "M") return TokenKind::kMask;
  parse_error(line, "unknown token kind \"" + std::string(letter) + "\"");
}

Vec3 vec_from(const json& value, std::size_t line, const char* key) {
  if (!value.is_array() || value.size() != 3) parse_error(line, std::string(key) + " is not a 3-array");
  Vec3 v;
  for (int a = 0; a < 3; ++a) {
    if (!value[static_cast<std::size_t>(a)].is_number()) {
      parse_error(line, std::string(key) + " has a non-numeric component");
    }
    v[a] = value[static_cast<std::size_t>(a)].get<double>();
  }
  return v;
}

int int_from(const json& object, const char* key, std::size_t line) {
  const auto it = object.find(key);
  if (it == object.end() || !it->is_number_integer()) {
    parse_error(line, std::string("missing integer \"") + key + "\"");
  }
  return it->get<int>();
}

const json& field(const json& object, const char* key, std::size_t line) {
  const auto it = object.find(key);
  if (it == object.end()) parse_error(line, std::string("missing \"") + key + "\"");
  return *it;
}

}  // namespace

std::string format_real(double value) {
  std::string text = fmt::format("{:.6f}", value);
  if (text == "-0.000000") text.erase(0, 1);
  return text;
}

std::string write_jsonl(const TokenSequence& sequence) {
  const GridSpec& spec = sequence.spec;
  std::string out = fmt::format(
      "{{\"schema\":\"{}\",\"L\":{},\"c0\":{},\"c_leaf\":{},\"c_r\":{},\"origin\":{},"
      "\"mntp\":{}}}\n",
      kTokenSchema, spec.depth(), format_real(spec.c0()), format_real(spec.c_leaf()),
      format_real(spec.c_r()), format_vec(spec.origin()), sequence.mntp ? "true" : "false");
  out.reserve(out.size() + sequence.tokens.size() * 80);
  for (const Token& token : sequence.tokens) {
    out += fmt::format("{{\"k\":\"{}\",\"t\":{},\"e\":[{},{},{}],\"l\":{},\"f\":{},\"c\":{}}}\n",
                       kind_letter(token.kind), token.t, token.e.x, token.e.y, token.e.z,
                       token.level, token.frame, format_vec(token.c));
  }
  return out;
}

TokenSequence read_jsonl(std::string_view text) {
  std::size_t line_number = 0;
  std::size_t pos = 0;
  std::optional<TokenSequence> sequence;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_error(line_number, e.what());
    }
    if (!object.is_object()) parse_error(line_number, "expected a JSON object");

    if (!sequence) {
      const json& schema = field(object, "schema", line_number);
      if (!schema.is_string() || schema.get<std::string>() != kTokenSchema) {
        parse_error(line_number, "unsupported schema");
      }
      const json& c0 = field(object, "c0", line_number);
      const json& c_leaf = field(object, "c_leaf", line_number);
      const json& c_r = field(object, "c_r", line_number);
      const json& mntp = field(object, "mntp", line_number);
      if (!c0.is_number() || !c_leaf.is_number() || !c_r.is_number() || !mntp.is_boolean()) {
        parse_error(line_number, "header field has the wrong type");
      }
      const int depth = int_from(object, "L", line_number);
      try {
        GridSpec spec(vec_from(field(object, "origin", line_number), line_number, "origin"), depth,
                      c_leaf.get<double>(), c_r.get<double>());
        if (std::abs(spec.c0() - c0.get<double>()) > 1e-6 * std::max(1.0, spec.c0())) {
          parse_error(line_number, "c0 disagrees with c_leaf * 2^(L-1)");
        }
        sequence = TokenSequence{spec, {}, mntp.get<bool>()};
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kParseError) throw;
        parse_error(line_number, e.what());
      }
      continue;
    }

    Token token;
    const json& kind = field(object, "k", line_number);
    if (!kind.is_string()) parse_error(line_number, "\"k\" is not a string");
    token.kind = kind_from_letter(kind.get<std::string>(), line_number);
    token.t = int_from(object, "t", line_number);
    token.level = int_from(object, "l", line_number);
    token.frame = int_from(object, "f", line_number);
    const json& e = field(object, "e", line_number);
    if (!e.is_array() || e.size() != 3) parse_error(line_number, "\"e\" is not a 3-array");
    std::array<std::uint32_t, 3> offsets{};
    for (std::size_t a = 0; a < 3; ++a) {
      if (!e[a].is_number_unsigned()) parse_error(line_number, "\"e\" must hold integers >= 0");
      offsets[a] = e[a].get<std::uint32_t>();
    }
    token.e = {offsets[0], offsets[1], offsets[2]};
    token.c = vec_from(field(object, "c", line_number), line_number, "c");
    sequence->tokens.push_back(token);
  }
  if (!sequence) parse_error(line_number, "missing header line");
  return std::move(*sequence);
}

}  // namespace octok
