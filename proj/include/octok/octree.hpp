// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OCTOK_OCTREE_HPP_
#define OCTOK_OCTREE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "octok/geometry.hpp"

namespace octok {

using MortonCode = std::uint64_t;

// Child index of (ix, iy, iz) in {0,1}^3 within its parent; x is the most
// significant bit. Morton codes interleave the same way at every level, so
// the low three bits of a code are the child index and `code >> 3` is the
// parent's code.
constexpr unsigned child_index(unsigned ix, unsigned iy, unsigned iz) {
  return (ix << 2) | (iy << 1) | iz;
}

// Throws InvalidInput when a component is >= 2^level or level is outside
// [0, GridSpec::kMaxDepth).
MortonCode morton_encode(Cell cell, int level);
Cell morton_decode(MortonCode code, int level);

constexpr MortonCode parent_code(MortonCode code) { return code >> 3; }

// 8-bit occupancy mask of a parent's children: bit ci is set iff child ci is
// occupied. Valid codes are 1..255.
class SubtreeCode {
 public:
  // Throws InvalidCode unless 1 <= value <= 255.
  explicit SubtreeCode(int value);

  std::uint8_t value() const { return value_; }
  bool has_child(unsigned ci) const { return (value_ >> ci) & 1u; }
  int child_count() const;

  friend bool operator==(SubtreeCode, SubtreeCode) = default;

 private:
  std::uint8_t value_;
};

// Pruned occupancy octree. levels()[l] holds the strictly ascending Morton
// codes of the occupied cells at level l; levels()[0] is {0}.
class Octree {
 public:
  const GridSpec& spec() const { return spec_; }
  const std::vector<std::vector<MortonCode>>& levels() const { return levels_; }
  std::span<const MortonCode> level(int l) const { return levels_.at(static_cast<std::size_t>(l)); }
  int depth() const { return static_cast<int>(levels_.size()); }
  std::size_t leaf_count() const { return levels_.back().size(); }
  bool occupied(int level, Cell cell) const;

  // Number of occupied cells on levels 0..L-2, i.e. the number of subtree
  // codes the tree compresses to.
  std::size_t internal_count() const;

 private:
  friend Octree build_octree(const GridSpec& spec, std::span<const Cell> leaf_cells);
  Octree(GridSpec spec, std::vector<std::vector<MortonCode>> levels)
      : spec_(spec), levels_(std::move(levels)) {}

  GridSpec spec_;
  std::vector<std::vector<MortonCode>> levels_;
};

// Duplicate leaves are merged. Throws InvalidInput on an empty set or a leaf
// outside the grid.
Octree build_octree(const GridSpec& spec, std::span<const Cell> leaf_cells);

// Throws InvalidInput if `parent` is not occupied at `level` or level > L-2.
SubtreeCode subtree_code(const Octree& octree, int level, Cell parent);

// Occupancy masks of every occupied cell on `level`, in ascending Morton
// order. Requires level <= L-2.
std::vector<SubtreeCode> level_codes(const Octree& octree, int level);

// Children selected by `code`, ascending child index (hence ascending Morton).
std::vector<Cell> children_from_code(Cell parent, SubtreeCode code);
std::vector<Cell> children_from_code(Cell parent, int code);

}  // namespace octok

#endif  // OCTOK_OCTREE_HPP_
