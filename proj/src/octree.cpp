// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/octree.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "octok/error.hpp"

namespace octok {
namespace {

// Spreads the low 21 bits of v so that bit i moves to bit 3i.
std::uint64_t spread_bits(std::uint64_t v) {
  v &= 0x1fffff;
  v = (v | v << 32) & 0x1f00000000ffffULL;
  v = (v | v << 16) & 0x1f0000ff0000ffULL;
  v = (v | v << 8) & 0x100f00f00f00f00fULL;
  v = (v | v << 4) & 0x10c30c30c30c30c3ULL;
  v = (v | v << 2) & 0x1249249249249249ULL;
  return v;
}

std::uint64_t compact_bits(std::uint64_t v) {
  v &= 0x1249249249249249ULL;
  v = (v | v >> 2) & 0x10c30c30c30c30c3ULL;
  v = (v | v >> 4) & 0x100f00f00f00f00fULL;
  v = (v | v >> 8) & 0x1f0000ff0000ffULL;
  v = (v | v >> 16) & 0x1f00000000ffffULL;
  v = (v | v >> 32) & 0x1fffffULL;
  return v;
}

void check_level(int level) {
  if (level < 0 || level >= GridSpec::kMaxDepth) {
    throw Error(ErrorCode::kInvalidInput, "level " + std::to_string(level) + " out of range");
  }
}

}  // namespace

MortonCode morton_encode(Cell cell, int level) {
  check_level(level);
  const std::uint64_t limit = std::uint64_t{1} << level;
  if (cell.x >= limit || cell.y >= limit || cell.z >= limit) {
    throw Error(ErrorCode::kInvalidInput,
                "cell component exceeds 2^" + std::to_string(level));
  }
  return spread_bits(cell.x) << 2 | spread_bits(cell.y) << 1 | spread_bits(cell.z);
}

Cell morton_decode(MortonCode code, int level) {
  check_level(level);
  if (level < 21 && (code >> (3 * level)) != 0) {
    throw Error(ErrorCode::kInvalidInput, "code has bits above level " + std::to_string(level));
  }
  return {static_cast<std::uint32_t>(compact_bits(code >> 2)),
          static_cast<std::uint32_t>(compact_bits(code >> 1)),
          static_cast<std::uint32_t>(compact_bits(code))};
}

SubtreeCode::SubtreeCode(int value) {
  if (value < 1 || value > 255) {
    throw Error(ErrorCode::kInvalidCode, "subtree code " + std::to_string(value) +
                                             " outside [1, 255]");
  }
  value_ = static_cast<std::uint8_t>(value);
}

int SubtreeCode::child_count() const { return std::popcount(value_); }

bool Octree::occupied(int level, Cell cell) const {
  if (level < 0 || level >= depth()) return false;
  const auto& codes = levels_[static_cast<std::size_t>(level)];
  return std::binary_search(codes.begin(), codes.end(), morton_encode(cell, level));
}

std::size_t Octree::internal_count() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < levels_.size(); ++l) total += levels_[l].size();
  return total;
}

Octree build_octree(const GridSpec& spec, std::span<const Cell> leaf_cells) {
  if (leaf_cells.empty()) throw Error(ErrorCode::kInvalidInput, "no occupied leaves");
  const int leaf_level = spec.leaf_level();
  std::vector<std::vector<MortonCode>> levels(static_cast<std::size_t>(spec.depth()));

  auto& leaves = levels.back();
  leaves.reserve(leaf_cells.size());
  for (const Cell& cell : leaf_cells) leaves.push_back(morton_encode(cell, leaf_level));
  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());

  // Parents of an ascending list are ascending, so dedup is a linear pass.
  for (int l = leaf_level; l > 0; --l) {
    const auto& children = levels[static_cast<std::size_t>(l)];
    auto& parents = levels[static_cast<std::size_t>(l - 1)];
    for (MortonCode child : children) {
      const MortonCode p = parent_code(child);
      if (parents.empty() || parents.back() != p) parents.push_back(p);
    }
  }
  return Octree(spec, std::move(levels));
}

SubtreeCode subtree_code(const Octree& octree, int level, Cell parent) {
  if (level < 0 || level > octree.depth() - 2) {
    throw Error(ErrorCode::kInvalidInput, "subtree codes exist only on levels 0..L-2");
  }
  if (!octree.occupied(level, parent)) {
    throw Error(ErrorCode::kInvalidInput, "parent cell is not occupied");
  }
  const MortonCode first = morton_encode(parent, level) << 3;
  const auto children = octree.level(level + 1);
  auto it = std::lower_bound(children.begin(), children.end(), first);
  int mask = 0;
  for (; it != children.end() && *it < first + 8; ++it) mask |= 1 << (*it - first);
  return SubtreeCode(mask);
}

std::vector<SubtreeCode> level_codes(const Octree& octree, int level) {
  if (level < 0 || level > octree.depth() - 2) {
    throw Error(ErrorCode::kInvalidInput, "subtree codes exist only on levels 0..L-2");
  }
  const auto parents = octree.level(level);
  const auto children = octree.level(level + 1);
  std::vector<SubtreeCode> codes;
  codes.reserve(parents.size());
  std::size_t c = 0;
  for (MortonCode p : parents) {
    int mask = 0;
    for (; c < children.size() && parent_code(children[c]) == p; ++c) {
      mask |= 1 << (children[c] & 7u);
    }
    codes.emplace_back(mask);
  }
  return codes;
}

std::vector<Cell> children_from_code(Cell parent, SubtreeCode code) {
  std::vector<Cell> children;
  children.reserve(static_cast<std::size_t>(code.child_count()));
  for (unsigned ci = 0; ci < 8; ++ci) {
    if (!code.has_child(ci)) continue;
    children.push_back({(parent.x << 1) | ((ci >> 2) & 1u), (parent.y << 1) | ((ci >> 1) & 1u),
                        (parent.z << 1) | (ci & 1u)});
  }
  return children;
}

std::vector<Cell> children_from_code(Cell parent, int code) {
  return children_from_code(parent, SubtreeCode(code));
}

}  // namespace octok
