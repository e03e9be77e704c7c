// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "octok/error.hpp"

namespace octok {
namespace {

// Slack, in units of one bin, absorbed by floor() so that coordinates that are
// a representation error below a bin boundary land in the upper bin.
constexpr double kBinSnap = 1e-9;

std::uint32_t floor_clamped(double value, std::uint32_t upper) {
  const double f = std::floor(value + kBinSnap);
  if (f <= 0.0) return 0;
  if (f >= static_cast<double>(upper - 1)) return upper - 1;
  return static_cast<std::uint32_t>(f);
}

}  // namespace

bool Vec3::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

double distance(Vec3 a, Vec3 b) {
  const Vec3 d = a - b;
  return std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
}

GridSpec::GridSpec(Vec3 origin, int depth, double c_leaf, double c_r)
    : origin_(origin), depth_(depth), c_leaf_(c_leaf), c_r_(c_r) {
  if (!origin.finite()) throw Error(ErrorCode::kInvalidInput, "grid origin is not finite");
  if (depth < kMinDepth || depth > kMaxDepth) {
    throw Error(ErrorCode::kInvalidInput, "grid depth " + std::to_string(depth) +
                                              " outside [2, 21]");
  }
  if (!(c_leaf > 0.0) || !(c_r > 0.0) || !std::isfinite(c_leaf) || !std::isfinite(c_r)) {
    throw Error(ErrorCode::kInvalidInput, "cell length and resolution must be positive");
  }
  if (c_r > c_leaf) throw Error(ErrorCode::kInvalidInput, "resolution exceeds leaf length");
  c0_ = std::ldexp(c_leaf, depth - 1);
  n_p_ = static_cast<std::uint32_t>(std::lround(c_leaf / c_r));
  if (n_p_ == 0) n_p_ = 1;
}

double GridSpec::cell_length(int level) const { return std::ldexp(c0_, -level); }

GridSpec fit_grid(std::span<const Frame> frames, const FitOptions& options) {
  if (!(options.margin >= 0.0)) throw Error(ErrorCode::kInvalidInput, "margin must be >= 0");
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = lo * -1.0;
  std::size_t count = 0;
  for (const Frame& frame : frames) {
    for (const Site& site : frame.sites) {
      if (!site.pos.finite()) {
        throw Error(ErrorCode::kInvalidInput, "non-finite site coordinate", count);
      }
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], site.pos[a]);
        hi[a] = std::max(hi[a], site.pos[a]);
      }
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::kInvalidInput, "no sites to fit a grid to");

  const double extent = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
  const double needed = extent + 2.0 * options.margin;

  int depth = GridSpec::kMinDepth;
  if (options.fixed_depth > 0) {
    depth = options.fixed_depth;
    if (std::ldexp(options.c_leaf, depth - 1) < needed) {
      throw Error(ErrorCode::kTooLarge, "extent " + std::to_string(extent) +
                                            " does not fit a depth-" + std::to_string(depth) +
                                            " grid");
    }
  } else {
    while (std::ldexp(options.c_leaf, depth - 1) < needed) {
      if (++depth > options.max_depth) {
        throw Error(ErrorCode::kTooLarge, "extent " + std::to_string(extent) +
                                              " needs more than " +
                                              std::to_string(options.max_depth) + " levels");
      }
    }
  }

  const double c0 = std::ldexp(options.c_leaf, depth - 1);
  const Vec3 center = (lo + hi) * 0.5;
  const Vec3 origin = center - Vec3{c0, c0, c0} * 0.5;
  return GridSpec(origin, depth, options.c_leaf, options.c_r);
}

Cell leaf_index_of(const GridSpec& spec, Vec3 p) {
  const double tolerance = spec.c0() * 1e-12;
  const std::uint32_t n = spec.leaves_per_axis();
  std::array<std::uint32_t, 3> index{};
  for (int a = 0; a < 3; ++a) {
    const double rel = p[a] - spec.origin()[a];
    if (!(rel >= -tolerance && rel <= spec.c0() + tolerance)) {
      throw Error(ErrorCode::kOutOfBounds, "point outside the root cell on axis " +
                                               std::to_string(a));
    }
    index[a] = floor_clamped(rel / spec.c_leaf(), n);
  }
  return {index[0], index[1], index[2]};
}

Vec3 cell_min_corner(const GridSpec& spec, int level, Cell cell) {
  if (level < 0 || level >= spec.depth()) {
    throw Error(ErrorCode::kInvalidInput, "level " + std::to_string(level) + " out of range");
  }
  const std::uint32_t n = spec.cells_per_axis(level);
  if (cell.x >= n || cell.y >= n || cell.z >= n) {
    throw Error(ErrorCode::kInvalidInput, "cell out of range at level " + std::to_string(level));
  }
  const double len = spec.cell_length(level);
  return spec.origin() + Vec3{cell.x * len, cell.y * len, cell.z * len};
}

Vec3 cell_center(const GridSpec& spec, int level, Cell cell) {
  const double half = 0.5 * spec.cell_length(level);
  return cell_min_corner(spec, level, cell) + Vec3{half, half, half};
}

Offset quantize_offset(const GridSpec& spec, Vec3 p, Cell leaf) {
  const Vec3 rel = p - cell_min_corner(spec, spec.leaf_level(), leaf);
  return {floor_clamped(rel.x / spec.c_r(), spec.n_p()),
          floor_clamped(rel.y / spec.c_r(), spec.n_p()),
          floor_clamped(rel.z / spec.c_r(), spec.n_p())};
}

Vec3 dequantize_offset(const GridSpec& spec, Cell leaf, Offset e) {
  if (e.x >= spec.n_p() || e.y >= spec.n_p() || e.z >= spec.n_p()) {
    throw Error(ErrorCode::kInvalidInput, "offset outside [0, n_p)");
  }
  const double r = spec.c_r();
  return cell_min_corner(spec, spec.leaf_level(), leaf) +
         Vec3{(e.x + 0.5) * r, (e.y + 0.5) * r, (e.z + 0.5) * r};
}

Rotation random_rotation_matrix(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double w = 0, x = 0, y = 0, z = 0, norm = 0;
  do {
    w = normal(rng);
    x = normal(rng);
    y = normal(rng);
    z = normal(rng);
    norm = std::sqrt(w * w + x * x + y * y + z * z);
  } while (norm < 1e-12);
  w /= norm;
  x /= norm;
  y /= norm;
  z /= norm;
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
           {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
           {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

std::vector<Frame> rotate_frames(std::span<const Frame> frames, const Rotation& rotation) {
  Vec3 centroid;
  std::size_t count = 0;
  for (const Frame& frame : frames) {
    for (const Site& site : frame.sites) {
      centroid = centroid + site.pos;
      ++count;
    }
  }
  if (count > 0) centroid = centroid * (1.0 / static_cast<double>(count));

  std::vector<Frame> out(frames.begin(), frames.end());
  for (Frame& frame : out) {
    for (Site& site : frame.sites) {
      const Vec3 d = site.pos - centroid;
      Vec3 r;
      for (int i = 0; i < 3; ++i) {
        r[i] = rotation[i][0] * d.x + rotation[i][1] * d.y + rotation[i][2] * d.z;
      }
      site.pos = centroid + r;
    }
  }
  return out;
}

std::vector<Frame> random_rotation(std::span<const Frame> frames, std::uint64_t seed) {
  return rotate_frames(frames, random_rotation_matrix(seed));
}

}  // namespace octok
