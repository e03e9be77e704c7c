// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OCTOK_GEOMETRY_HPP_
#define OCTOK_GEOMETRY_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace octok {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  double& operator[](int axis) { return axis == 0 ? x : axis == 1 ? y : z; }

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  bool finite() const;
};

double distance(Vec3 a, Vec3 b);

// Integer cell address at some octree level, or an in-cell offset triple.
struct Cell {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t z = 0;

  std::uint32_t operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

using Offset = Cell;

// Hierarchical cubic grid. Level 0 is the root cell of length `c0`; level
// `depth - 1` holds the leaves of length `c_leaf`. In-cell offsets are
// quantized at resolution `c_r` into `n_p` bins per axis.
class GridSpec {
 public:
  static constexpr int kMinDepth = 2;
  static constexpr int kMaxDepth = 21;  // 3 * 20 bits of Morton code per level

  // Throws InvalidInput on non-positive lengths, a depth outside
  // [kMinDepth, kMaxDepth], non-finite origin, or c_r > c_leaf.
  GridSpec(Vec3 origin, int depth, double c_leaf, double c_r);

  const Vec3& origin() const { return origin_; }
  int depth() const { return depth_; }
  double c0() const { return c0_; }
  double c_leaf() const { return c_leaf_; }
  double c_r() const { return c_r_; }
  std::uint32_t n_p() const { return n_p_; }

  std::uint32_t cells_per_axis(int level) const { return std::uint32_t{1} << level; }
  std::uint32_t leaves_per_axis() const { return cells_per_axis(depth_ - 1); }
  double cell_length(int level) const;
  int leaf_level() const { return depth_ - 1; }

  // Offset assigned to tokens that carry no in-cell position.
  Offset default_offset() const { return {n_p_ / 2, n_p_ / 2, n_p_ / 2}; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  Vec3 origin_;
  int depth_;
  double c_leaf_;
  double c_r_;
  double c0_;
  std::uint32_t n_p_;
};

struct Site {
  int type_id = 0;
  Vec3 pos;
};

struct Frame {
  std::vector<Site> sites;
  int frame_index = 0;
};

struct FitOptions {
  double c_leaf = 0.24;
  double c_r = 0.01;
  double margin = 0.12;
  int max_depth = 16;
  // When > 0 the depth is forced instead of chosen minimally.
  int fixed_depth = 0;
};

// Smallest depth whose root cell covers the joint bounding box of all frames
// plus `margin` on each side; the box center is placed at the root center.
// Throws InvalidInput (no sites, non-finite coordinates, bad parameters) or
// TooLarge (extent needs more than max_depth, or exceeds a forced depth).
GridSpec fit_grid(std::span<const Frame> frames, const FitOptions& options = {});

// Leaf cell containing `p` (half-open cells, clamped on the upper faces).
// Throws OutOfBounds when p lies outside the root cell.
Cell leaf_index_of(const GridSpec& spec, Vec3 p);

// Center of `cell` at `level`. Throws InvalidInput on out-of-range arguments.
Vec3 cell_center(const GridSpec& spec, int level, Cell cell);

// Minimum corner of `cell` at `level`.
Vec3 cell_min_corner(const GridSpec& spec, int level, Cell cell);

Offset quantize_offset(const GridSpec& spec, Vec3 p, Cell leaf);

// Bin midpoint of `e` inside `leaf`. Throws InvalidInput when e >= n_p.
Vec3 dequantize_offset(const GridSpec& spec, Cell leaf, Offset e);

using Rotation = std::array<std::array<double, 3>, 3>;

// Uniformly distributed rotation drawn from a normalized quaternion of four
// standard normals.
Rotation random_rotation_matrix(std::uint64_t seed);

// Rotates every site of every frame about the joint centroid.
std::vector<Frame> random_rotation(std::span<const Frame> frames, std::uint64_t seed);

std::vector<Frame> rotate_frames(std::span<const Frame> frames, const Rotation& rotation);

}  // namespace octok

#endif  // OCTOK_GEOMETRY_HPP_
