// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/tokenizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "octok/error.hpp"
#include "octok/vocab.hpp"

namespace octok {
namespace {

Token special_token(const GridSpec& spec, TokenKind kind, int frame) {
  Token token;
  token.kind = kind;
  token.t = kind == TokenKind::kBos ? vocab::kBos : vocab::kEos;
  token.e = spec.default_offset();
  token.level = 0;
  token.frame = frame;
  token.c = cell_center(spec, 0, {});
  return token;
}

Token mask_twin(const GridSpec& spec, const Token& partner) {
  Token mask;
  mask.kind = TokenKind::kMask;
  mask.t = vocab::kMask;
  mask.e = spec.default_offset();
  mask.level = partner.level;
  mask.frame = partner.frame;
  mask.c = partner.kind == TokenKind::kAtom
               ? cell_center(spec, spec.leaf_level(), leaf_index_of(spec, partner.c))
               : partner.c;
  return mask;
}

[[noreturn]] void malformed(std::size_t index, const std::string& what) {
  throw Error(ErrorCode::kMalformedSequence, what + " at token " + std::to_string(index), index);
}

bool near(Vec3 a, Vec3 b, double tolerance) {
  return std::abs(a.x - b.x) <= tolerance && std::abs(a.y - b.y) <= tolerance &&
         std::abs(a.z - b.z) <= tolerance;
}

// Content token of the sequence together with its position in `tokens`.
struct Entry {
  const Token* token;
  std::size_t index;
};

// `centers` receives, per entry, the center of the cell the token describes.
Frame decode_frame(const GridSpec& spec, std::span<const Entry> entries, int frame_index,
                   std::vector<Vec3>& centers) {
  Frame frame;
  frame.frame_index = frame_index;
  std::vector<Cell> frontier{Cell{}};
  std::vector<Cell> next;
  std::size_t cursor = 0;

  auto take = [&](TokenKind kind, int level) -> const Entry& {
    if (cursor >= entries.size()) {
      const std::size_t at = entries.empty() ? 0 : entries.back().index + 1;
      malformed(at, "sequence ends before the frontier at level " + std::to_string(level) +
                        " is exhausted");
    }
    const Entry& entry = entries[cursor++];
    if (entry.token->kind != kind) {
      malformed(entry.index, std::string("expected a ") + kind_letter(kind) + " token, got " +
                                 kind_letter(entry.token->kind));
    }
    if (entry.token->level != level) {
      malformed(entry.index, "token level " + std::to_string(entry.token->level) +
                                 " where level " + std::to_string(level) + " is expected");
    }
    return entry;
  };

  for (int level = 0; level + 1 < spec.depth(); ++level) {
    next.clear();
    for (const Cell& cell : frontier) {
      const Entry& entry = take(TokenKind::kCode, level);
      centers.push_back(cell_center(spec, level, cell));
      const int value = entry.token->t;
      if (value < 1 || value > 255) {
        throw Error(ErrorCode::kInvalidCode,
                    "subtree code " + std::to_string(value) + " at token " +
                        std::to_string(entry.index),
                    entry.index);
      }
      for (const Cell& child : children_from_code(cell, SubtreeCode(value))) {
        next.push_back(child);
      }
    }
    std::swap(frontier, next);
  }

  frame.sites.reserve(frontier.size());
  for (const Cell& leaf : frontier) {
    const Entry& entry = take(TokenKind::kAtom, spec.leaf_level());
    centers.push_back(cell_center(spec, spec.leaf_level(), leaf));
    const Offset e = entry.token->e;
    if (e.x >= spec.n_p() || e.y >= spec.n_p() || e.z >= spec.n_p()) {
      malformed(entry.index, "offset outside [0, n_p)");
    }
    if (entry.token->t < 0) malformed(entry.index, "negative site type");
    frame.sites.push_back({entry.token->t, dequantize_offset(spec, leaf, e)});
  }
  if (cursor != entries.size()) {
    malformed(entries[cursor].index, "tokens left over after the leaf level");
  }
  return frame;
}

}  // namespace

char kind_letter(TokenKind kind) {
  switch (kind) {
    case TokenKind::kBos: return 'B';
    case TokenKind::kEos: return 'E';
    case TokenKind::kCode: return 'C';
    case TokenKind::kAtom: return 'A';
    case TokenKind::kMask: return 'M';
  }
  return '?';
}

std::vector<Token> serialize_frame(const GridSpec& spec, const Frame& frame) {
  if (frame.sites.empty()) throw Error(ErrorCode::kInvalidInput, "frame has no sites");
  const int leaf_level = spec.leaf_level();

  // (leaf Morton code, site index), sorted so that atoms come out in Morton
  // order and collisions are adjacent.
  std::vector<std::pair<MortonCode, std::size_t>> leaves;
  std::vector<Cell> cells;
  leaves.reserve(frame.sites.size());
  cells.reserve(frame.sites.size());
  for (std::size_t i = 0; i < frame.sites.size(); ++i) {
    const Cell cell = leaf_index_of(spec, frame.sites[i].pos);
    cells.push_back(cell);
    leaves.emplace_back(morton_encode(cell, leaf_level), i);
  }
  std::sort(leaves.begin(), leaves.end());
  for (std::size_t i = 1; i < leaves.size(); ++i) {
    if (leaves[i].first == leaves[i - 1].first) {
      const auto [a, b] = std::minmax(leaves[i - 1].second, leaves[i].second);
      throw Error(ErrorCode::kLeafCollision,
                  "sites " + std::to_string(a) + " and " + std::to_string(b) +
                      " share a leaf cell",
                  a, b);
    }
  }

  const Octree octree = build_octree(spec, cells);
  std::vector<Token> tokens;
  tokens.reserve(octree.internal_count() + leaves.size());
  for (int level = 0; level < leaf_level; ++level) {
    const auto codes = level_codes(octree, level);
    const auto cells_at_level = octree.level(level);
    for (std::size_t i = 0; i < codes.size(); ++i) {
      Token token;
      token.kind = TokenKind::kCode;
      token.t = codes[i].value();
      token.e = spec.default_offset();
      token.level = level;
      token.frame = frame.frame_index;
      token.c = cell_center(spec, level, morton_decode(cells_at_level[i], level));
      tokens.push_back(token);
    }
  }
  for (const auto& [code, index] : leaves) {
    const Site& site = frame.sites[index];
    Token token;
    token.kind = TokenKind::kAtom;
    token.t = site.type_id;
    token.e = quantize_offset(spec, site.pos, cells[index]);
    token.level = leaf_level;
    token.frame = frame.frame_index;
    token.c = site.pos;
    tokens.push_back(token);
  }
  return tokens;
}

std::vector<Token> mntp_expand(const GridSpec& spec, std::span<const Token> tokens) {
  std::vector<Token> out;
  out.reserve(tokens.size() * 2);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& token = tokens[i];
    if (token.kind == TokenKind::kMask) {
      throw Error(ErrorCode::kAlreadyExpanded, "input already contains Mask tokens", i);
    }
    if (token.is_content()) out.push_back(mask_twin(spec, token));
    out.push_back(token);
  }
  return out;
}

TokenSequence serialize(const GridSpec& spec, std::span<const Frame> frames,
                        const SerializeOptions& options) {
  TokenSequence sequence{spec, {}, options.mntp};
  int last_frame = frames.empty() ? 0 : frames.front().frame_index;
  if (options.with_specials) {
    sequence.tokens.push_back(special_token(spec, TokenKind::kBos, last_frame));
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Frame& frame = frames[i];
    // Without separators, frame boundaries are only visible as index changes.
    if (frame.frame_index < 0 || (i > 0 && frame.frame_index <= last_frame)) {
      throw Error(ErrorCode::kInvalidInput, "frame indices must be distinct and ascending");
    }
    last_frame = frame.frame_index;
    auto tokens = serialize_frame(spec, frame);
    if (options.mntp) tokens = mntp_expand(spec, tokens);
    sequence.tokens.insert(sequence.tokens.end(), tokens.begin(), tokens.end());
  }
  if (options.with_specials) {
    sequence.tokens.push_back(special_token(spec, TokenKind::kEos, last_frame));
  }
  return sequence;
}

std::vector<Frame> decode(const TokenSequence& sequence) {
  const GridSpec& spec = sequence.spec;
  const auto& tokens = sequence.tokens;
  std::size_t begin = 0;
  std::size_t end = tokens.size();
  if (begin < end && tokens[begin].kind == TokenKind::kBos) ++begin;
  if (end > begin && tokens[end - 1].kind == TokenKind::kEos) --end;

  const double tolerance = 1e-5 * std::max(1.0, spec.c0());
  std::vector<Entry> entries;
  entries.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    const Token& token = tokens[i];
    if (token.is_special()) malformed(i, "BOS/EOS inside the sequence");
    if (token.kind == TokenKind::kMask) {
      if (!sequence.mntp) malformed(i, "Mask token in a sequence without MNTP");
      if (i + 1 >= end || !tokens[i + 1].is_content()) malformed(i, "Mask token without partner");
      const Token& partner = tokens[i + 1];
      if (partner.level != token.level || partner.frame != token.frame) {
        malformed(i, "Mask twin disagrees with its partner on level or frame");
      }
      continue;
    }
    if (sequence.mntp && (i == begin || tokens[i - 1].kind != TokenKind::kMask)) {
      malformed(i, "content token without Mask twin");
    }
    entries.push_back({&token, i});
  }

  std::vector<Frame> frames;
  std::vector<Vec3> centers;
  centers.reserve(entries.size());
  std::size_t first = 0;
  while (first < entries.size()) {
    const int frame_index = entries[first].token->frame;
    if (!frames.empty() && frame_index <= frames.back().frame_index) {
      malformed(entries[first].index, "frame index decreases or repeats");
    }
    std::size_t last = first;
    while (last < entries.size() && entries[last].token->frame == frame_index) ++last;
    frames.push_back(decode_frame(spec,
                                  std::span<const Entry>(entries).subspan(first, last - first),
                                  frame_index, centers));
    first = last;
  }

  if (sequence.mntp) {
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const Token& mask = tokens[entries[k].index - 1];
      if (!near(mask.c, centers[k], tolerance)) {
        malformed(entries[k].index - 1, "Mask twin is not at its partner's cell center");
      }
    }
  }
  return frames;
}

StatsReport token_stats(const TokenSequence& sequence) {
  const GridSpec& spec = sequence.spec;
  StatsReport report;
  report.depth = spec.depth();
  report.per_level.assign(static_cast<std::size_t>(spec.depth()), 0);

  std::vector<std::pair<std::size_t, std::size_t>> per_frame;  // (codes, atoms)
  int current_frame = -1;
  for (const Token& token : sequence.tokens) {
    switch (token.kind) {
      case TokenKind::kBos: ++report.bos; continue;
      case TokenKind::kEos: ++report.eos; continue;
      case TokenKind::kMask: ++report.mask; break;
      case TokenKind::kCode: ++report.code; break;
      case TokenKind::kAtom: ++report.atom; break;
    }
    ++report.content_total;
    if (!token.is_content()) continue;
    if (token.level >= 0 && token.level < spec.depth()) {
      ++report.per_level[static_cast<std::size_t>(token.level)];
    }
    if (token.frame != current_frame || per_frame.empty()) {
      per_frame.emplace_back(0, 0);
      current_frame = token.frame;
    }
    (token.kind == TokenKind::kCode ? per_frame.back().first : per_frame.back().second)++;
  }

  report.frames = per_frame.size();
  for (const auto& [codes, atoms] : per_frame) {
    if (codes > atoms * static_cast<std::size_t>(spec.depth() - 1)) report.bound_ok = false;
  }
  report.dense_equivalent = std::ldexp(1.0, 3 * (spec.depth() - 1));
  report.dense_ratio =
      report.dense_equivalent / static_cast<double>(std::max<std::size_t>(report.content_total, 1));
  report.naive_octree_equivalent = 8 * report.code + report.atom;
  report.naive_ratio = static_cast<double>(report.naive_octree_equivalent) /
                       static_cast<double>(std::max<std::size_t>(report.code + report.atom, 1));
  return report;
}

}  // namespace octok
