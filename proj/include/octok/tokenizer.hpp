// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OCTOK_TOKENIZER_HPP_
#define OCTOK_TOKENIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "octok/geometry.hpp"
#include "octok/octree.hpp"

namespace octok {

enum class TokenKind : std::uint8_t { kBos, kEos, kCode, kAtom, kMask };

char kind_letter(TokenKind kind);

// One element of the 1D sequence.
//
// Code tokens carry a subtree code in `t` and the level and center of the
// parent cell they describe. Atom tokens carry the site type in `t`, the
// quantized in-cell offset in `e`, the leaf level and the exact site
// coordinate. A Mask token precedes each Code/Atom token in MNTP sequences
// and carries only the position (level, frame and cell center) of its
// partner. Non-atom tokens use the grid's default offset.
struct Token {
  TokenKind kind = TokenKind::kCode;
  int t = 0;
  Offset e;
  int level = 0;
  int frame = 0;
  Vec3 c;

  bool is_content() const { return kind == TokenKind::kCode || kind == TokenKind::kAtom; }
  bool is_special() const { return kind == TokenKind::kBos || kind == TokenKind::kEos; }

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenSequence {
  GridSpec spec;
  std::vector<Token> tokens;
  bool mntp = false;
};

// Code tokens for levels 0..L-2 followed by one Atom token per site, each
// level in ascending Morton order. Tokens are tagged with frame.frame_index.
// Throws LeafCollision (with both site indices) when two sites share a leaf,
// OutOfBounds when a site lies outside the root cell, InvalidInput when the
// frame is empty.
std::vector<Token> serialize_frame(const GridSpec& spec, const Frame& frame);

// Inserts a Mask twin in front of every Code/Atom token. The twin of an Atom
// token is placed at its leaf-cell center, which is why the grid is needed.
// BOS/EOS pass through unchanged. Throws AlreadyExpanded if `tokens` already
// holds a Mask token.
std::vector<Token> mntp_expand(const GridSpec& spec, std::span<const Token> tokens);

struct SerializeOptions {
  bool mntp = false;
  bool with_specials = true;
};

// [BOS] + frame tokens in input order + [EOS]. Frame indices must be
// non-negative and strictly ascending; all frames share `spec`.
TokenSequence serialize(const GridSpec& spec, std::span<const Frame> frames,
                        const SerializeOptions& options = {});

// Rebuilds the frames breadth-first: each Code token expands the next
// frontier cell of its level, then Atom tokens fill the leaves in Morton
// order at the bin midpoint of their offsets. BOS/EOS are optional at the
// ends. Throws MalformedSequence (with the token index) on a frontier/token
// mismatch, InvalidCode on a code outside 1..255.
std::vector<Frame> decode(const TokenSequence& sequence);

struct StatsReport {
  int depth = 0;
  std::size_t frames = 0;
  std::size_t bos = 0;
  std::size_t eos = 0;
  std::size_t code = 0;
  std::size_t atom = 0;
  std::size_t mask = 0;
  // Code + Atom tokens per level (Mask twins excluded).
  std::vector<std::size_t> per_level;
  // Every non-special token, Mask twins included.
  std::size_t content_total = 0;
  // Leaf count of a dense grid at the same resolution, 2^(3(L-1)).
  double dense_equivalent = 0;
  double dense_ratio = 0;
  // Tokens an uncompressed octree would emit: one per child of every
  // internal cell plus the atoms.
  std::size_t naive_octree_equivalent = 0;
  double naive_ratio = 0;
  // Code tokens <= atoms * (L - 1) in every frame.
  bool bound_ok = true;
};

StatsReport token_stats(const TokenSequence& sequence);

}  // namespace octok

#endif  // OCTOK_TOKENIZER_HPP_
