// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/octree.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "octok/error.hpp"

namespace octok {
namespace {

using Triple = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

// Brute-force occupancy per level by repeated halving of leaf indices.
std::vector<std::set<Triple>> brute_force_levels(const std::vector<Cell>& leaves, int depth) {
  std::vector<std::set<Triple>> levels(static_cast<std::size_t>(depth));
  for (const Cell& c : leaves) levels.back().insert({c.x, c.y, c.z});
  for (int l = depth - 2; l >= 0; --l) {
    for (const auto& [x, y, z] : levels[static_cast<std::size_t>(l + 1)]) {
      levels[static_cast<std::size_t>(l)].insert({x >> 1, y >> 1, z >> 1});
    }
  }
  return levels;
}

// Reference Morton encoding, bit by bit.
MortonCode slow_morton(Cell c, int level) {
  MortonCode code = 0;
  for (int b = level - 1; b >= 0; --b) {
    code = (code << 3) | (((c.x >> b) & 1u) << 2) | (((c.y >> b) & 1u) << 1) | ((c.z >> b) & 1u);
  }
  return code;
}

// Same deterministic leaf set as the frozen values below (64-bit LCG).
std::vector<Cell> lcg_leaves(int count, std::uint32_t side) {
  std::uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<std::uint32_t>((state >> 33) % side);
  };
  std::vector<Cell> leaves;
  for (int i = 0; i < count; ++i) {
    const std::uint32_t x = next();
    const std::uint32_t y = next();
    const std::uint32_t z = next();
    leaves.push_back({x, y, z});
  }
  return leaves;
}

std::vector<std::size_t> sizes(const Octree& octree) {
  std::vector<std::size_t> out;
  for (const auto& level : octree.levels()) out.push_back(level.size());
  return out;
}

TEST(MortonTest, Examples) {
  EXPECT_EQ(morton_encode({0, 0, 0}, 0), 0u);
  EXPECT_EQ(morton_encode({1, 0, 0}, 1), 4u);
  EXPECT_EQ(morton_encode({0, 1, 1}, 1), 3u);
  EXPECT_EQ(morton_decode(4, 1), (Cell{1, 0, 0}));
  EXPECT_EQ(morton_decode(3, 1), (Cell{0, 1, 1}));
  EXPECT_EQ(morton_encode({3, 3, 3}, 2), 63u);
}

TEST(MortonTest, RangeErrors) {
  EXPECT_THROW(morton_encode({2, 0, 0}, 1), Error);
  EXPECT_THROW(morton_encode({0, 0, 0}, -1), Error);
  EXPECT_THROW(morton_decode(8, 1), Error);
}

TEST(MortonTest, RandomRoundTripAndReference) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100000; ++i) {
    const int level = static_cast<int>(rng() % 21);
    const std::uint32_t mask = (std::uint32_t{1} << level) - 1;
    const Cell c{static_cast<std::uint32_t>(rng()) & mask, static_cast<std::uint32_t>(rng()) & mask,
                 static_cast<std::uint32_t>(rng()) & mask};
    const MortonCode code = morton_encode(c, level);
    ASSERT_EQ(code, slow_morton(c, level));
    ASSERT_EQ(morton_decode(code, level), c);
  }
}

// Ascending Morton order is the lexicographic order of root-to-cell child
// index paths.
TEST(MortonTest, OrderMatchesChildPathOrder) {
  std::mt19937_64 rng(2);
  const int level = 5;
  auto path = [&](Cell c) {
    std::vector<unsigned> p;
    for (int b = level - 1; b >= 0; --b) {
      p.push_back(child_index((c.x >> b) & 1u, (c.y >> b) & 1u, (c.z >> b) & 1u));
    }
    return p;
  };
  for (int i = 0; i < 10000; ++i) {
    const Cell a{static_cast<std::uint32_t>(rng() % 32), static_cast<std::uint32_t>(rng() % 32),
                 static_cast<std::uint32_t>(rng() % 32)};
    const Cell b{static_cast<std::uint32_t>(rng() % 32), static_cast<std::uint32_t>(rng() % 32),
                 static_cast<std::uint32_t>(rng() % 32)};
    ASSERT_EQ(morton_encode(a, level) < morton_encode(b, level), path(a) < path(b));
  }
}

TEST(BuildOctreeTest, SingleLeaf) {
  const GridSpec spec({0, 0, 0}, 3, 0.24, 0.01);
  const std::vector<Cell> leaves{{0, 0, 0}};
  EXPECT_EQ(sizes(build_octree(spec, leaves)), (std::vector<std::size_t>{1, 1, 1}));
}

TEST(BuildOctreeTest, OppositeCorners) {
  const GridSpec spec({0, 0, 0}, 3, 0.24, 0.01);
  const std::vector<Cell> leaves{{0, 0, 0}, {3, 3, 3}};
  const Octree octree = build_octree(spec, leaves);
  EXPECT_EQ(sizes(octree), (std::vector<std::size_t>{1, 2, 2}));
  EXPECT_TRUE(octree.occupied(1, {0, 0, 0}));
  EXPECT_TRUE(octree.occupied(1, {1, 1, 1}));
  EXPECT_EQ(octree.internal_count(), 3u);
}

TEST(BuildOctreeTest, FrozenFiftyLeafSet) {
  const GridSpec spec({0, 0, 0}, 6, 0.24, 0.01);
  const std::vector<Cell> leaves = lcg_leaves(50, 32);
  const Octree octree = build_octree(spec, leaves);
  // Computed offline by brute-force halving of the same LCG leaf set.
  EXPECT_EQ(sizes(octree), (std::vector<std::size_t>{1, 8, 33, 46, 50, 50}));
  std::vector<int> codes;
  int sum = 0;
  for (int l = 0; l < 5; ++l) {
    for (const SubtreeCode code : level_codes(octree, l)) {
      codes.push_back(code.value());
      sum += code.value();
    }
  }
  ASSERT_EQ(codes.size(), 138u);
  EXPECT_EQ((std::vector<int>(codes.begin(), codes.begin() + 12)),
            (std::vector<int>{255, 181, 224, 41, 61, 35, 182, 30, 167, 128, 2, 20}));
  EXPECT_EQ(sum, 4983);
}

TEST(BuildOctreeTest, MatchesBruteForceOnRandomSets) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int depth = 2 + static_cast<int>(rng() % 8);
    const GridSpec spec({0, 0, 0}, depth, 0.24, 0.01);
    const std::uint32_t n = spec.leaves_per_axis();
    std::vector<Cell> leaves;
    const int count = 1 + static_cast<int>(rng() % 200);
    for (int i = 0; i < count; ++i) {
      leaves.push_back({static_cast<std::uint32_t>(rng() % n), static_cast<std::uint32_t>(rng() % n),
                        static_cast<std::uint32_t>(rng() % n)});
    }
    const Octree octree = build_octree(spec, leaves);
    const auto expected = brute_force_levels(leaves, depth);
    for (int l = 0; l < depth; ++l) {
      const auto level = octree.level(l);
      ASSERT_EQ(level.size(), expected[static_cast<std::size_t>(l)].size());
      ASSERT_TRUE(std::is_sorted(level.begin(), level.end()));
      ASSERT_TRUE(std::adjacent_find(level.begin(), level.end()) == level.end());
      for (MortonCode code : level) {
        const Cell c = morton_decode(code, l);
        ASSERT_TRUE(expected[static_cast<std::size_t>(l)].count({c.x, c.y, c.z}));
      }
    }
    // Parent closure and the N(L-1) bound.
    for (int l = 1; l < depth; ++l) {
      std::vector<MortonCode> parents;
      for (MortonCode c : octree.level(l)) parents.push_back(parent_code(c));
      parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
      ASSERT_TRUE(std::equal(parents.begin(), parents.end(), octree.level(l - 1).begin(),
                             octree.level(l - 1).end()));
    }
    EXPECT_LE(octree.internal_count(), octree.leaf_count() * static_cast<std::size_t>(depth - 1));
  }
}

TEST(BuildOctreeTest, Errors) {
  const GridSpec spec({0, 0, 0}, 3, 0.24, 0.01);
  EXPECT_THROW(build_octree(spec, std::vector<Cell>{}), Error);
  EXPECT_THROW(build_octree(spec, std::vector<Cell>{{4, 0, 0}}), Error);
}

TEST(SubtreeCodeTest, Examples) {
  const GridSpec spec({0, 0, 0}, 3, 0.24, 0.01);
  {
    const std::vector<Cell> leaves{{0, 0, 0}};
    EXPECT_EQ(subtree_code(build_octree(spec, leaves), 0, {0, 0, 0}).value(), 1);
  }
  {
    // Level-1 children (1,0,0) and (0,1,1) of the root: ci 4 and 3.
    const std::vector<Cell> leaves{{2, 0, 0}, {0, 2, 2}};
    EXPECT_EQ(subtree_code(build_octree(spec, leaves), 0, {0, 0, 0}).value(), 24);
  }
  {
    std::vector<Cell> leaves;
    for (std::uint32_t i = 0; i < 8; ++i) leaves.push_back({2 + (i >> 2), 2 + ((i >> 1) & 1), 2 + (i & 1)});
    const Octree octree = build_octree(spec, leaves);
    EXPECT_EQ(subtree_code(octree, 1, {1, 1, 1}).value(), 255);
    EXPECT_EQ(subtree_code(octree, 0, {0, 0, 0}).value(), 128);
    try {
      subtree_code(octree, 1, {0, 0, 0});
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
    }
    EXPECT_THROW(subtree_code(octree, 2, {2, 2, 2}), Error);
  }
}

TEST(SubtreeCodeTest, ValueRange) {
  EXPECT_THROW(SubtreeCode(0), Error);
  EXPECT_THROW(SubtreeCode(256), Error);
  try {
    SubtreeCode(0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidCode);
  }
  EXPECT_EQ(SubtreeCode(255).child_count(), 8);
}

TEST(ChildrenFromCodeTest, Examples) {
  EXPECT_EQ(children_from_code({0, 0, 0}, 1), (std::vector<Cell>{{0, 0, 0}}));
  EXPECT_EQ(children_from_code({0, 0, 0}, 24), (std::vector<Cell>{{0, 1, 1}, {1, 0, 0}}));
  const auto all = children_from_code({1, 1, 1}, 255);
  ASSERT_EQ(all.size(), 8u);
  for (unsigned ci = 0; ci < 8; ++ci) {
    EXPECT_EQ(all[ci], (Cell{2 + (ci >> 2), 2 + ((ci >> 1) & 1u), 2 + (ci & 1u)}));
  }
  try {
    children_from_code({0, 0, 0}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidCode);
  }
}

// subtree_code(children_from_code(p, v)) == v for every code and a few parents.
TEST(ChildrenFromCodeTest, DualityWithSubtreeCode) {
  const GridSpec spec({0, 0, 0}, 4, 0.24, 0.01);
  const std::vector<Cell> parents{{0, 0, 0}, {3, 1, 2}, {1, 3, 0}};
  for (const Cell& parent : parents) {
    for (int v = 1; v <= 255; ++v) {
      const std::vector<Cell> leaves = children_from_code(parent, v);
      const Octree octree = build_octree(spec, leaves);
      ASSERT_EQ(subtree_code(octree, 2, parent).value(), v);
      const auto children = children_from_code(parent, v);
      ASSERT_TRUE(std::is_sorted(children.begin(), children.end(), [](Cell a, Cell b) {
        return morton_encode(a, 3) < morton_encode(b, 3);
      }));
    }
  }
}

}  // namespace
}  // namespace octok
