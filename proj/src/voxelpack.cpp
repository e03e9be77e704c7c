// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/voxelpack.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "octok/error.hpp"
#include "octok/vocab.hpp"

namespace octok {
namespace {

constexpr std::size_t kHeaderSize = 16;
constexpr std::uint16_t kVersion = 1;
constexpr std::uint8_t kRawLayout = 0;
constexpr std::uint8_t kPackedLayout = 1;

std::vector<std::uint8_t> header(std::uint32_t dim, std::uint8_t layout) {
  std::vector<std::uint8_t> out(kHeaderSize, 0);
  out[0] = 'O';
  out[1] = 'C';
  out[2] = 'T';
  out[3] = 'K';
  out[4] = kVersion & 0xff;
  out[5] = kVersion >> 8;
  for (int i = 0; i < 4; ++i) out[6 + i] = static_cast<std::uint8_t>(dim >> (8 * i));
  out[10] = layout;
  return out;
}

std::uint32_t read_header(std::span<const std::uint8_t> bytes, std::uint8_t layout) {
  if (bytes.size() < kHeaderSize) throw Error(ErrorCode::kParseError, "grid file shorter than its header");
  if (bytes[0] != 'O' || bytes[1] != 'C' || bytes[2] != 'T' || bytes[3] != 'K') {
    throw Error(ErrorCode::kParseError, "bad grid file magic");
  }
  const std::uint16_t version = static_cast<std::uint16_t>(bytes[4] | bytes[5] << 8);
  if (version != kVersion) {
    throw Error(ErrorCode::kParseError, "unsupported grid file version " + std::to_string(version));
  }
  if (bytes[10] != layout) {
    throw Error(ErrorCode::kParseError,
                layout == kRawLayout ? "file holds a packed grid" : "file holds a raw grid");
  }
  std::uint32_t dim = 0;
  for (int i = 0; i < 4; ++i) dim |= std::uint32_t{bytes[6 + i]} << (8 * i);
  if (dim < 4 || dim % 4 != 0) {
    throw Error(ErrorCode::kParseError, "grid dimension " + std::to_string(dim) + " is not a multiple of 4");
  }
  return dim;
}

}  // namespace

BoolGrid::BoolGrid(std::uint32_t dim) : dim_(dim) {
  if (dim < 4 || dim % 4 != 0) {
    throw Error(ErrorCode::kInvalidInput, "grid dimension " + std::to_string(dim) +
                                              " must be a positive multiple of 4");
  }
  words_.assign((voxel_count() + 63) / 64, 0);
}

void BoolGrid::set(std::uint32_t x, std::uint32_t y, std::uint32_t z, bool value) {
  const std::uint64_t i = index(x, y, z);
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= bit;
  } else {
    words_[i >> 6] &= ~bit;
  }
}

std::uint64_t BoolGrid::popcount() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

PackedGrid::PackedGrid(std::uint32_t block_dim)
    : block_dim_(block_dim), bytes_(kChannels * channel_size(), 0) {}

// A block row (fixed ly, lz) is four consecutive bits starting at a multiple
// of 4, so it never straddles a 64-bit word and li = lz*16 + ly*4 + lx makes
// each row one nibble of the block's 64-bit pattern.
PackedGrid pack(const BoolGrid& grid) {
  const std::uint32_t m = grid.dim() / 4;
  PackedGrid packed(m);
  const auto words = grid.words();
  auto out = packed.bytes();
  const std::uint64_t channel_size = packed.channel_size();
  std::uint64_t block_index = 0;
  for (std::uint32_t bz = 0; bz < m; ++bz) {
    for (std::uint32_t by = 0; by < m; ++by) {
      for (std::uint32_t bx = 0; bx < m; ++bx, ++block_index) {
        std::uint64_t pattern = 0;
        for (std::uint32_t lz = 0; lz < 4; ++lz) {
          for (std::uint32_t ly = 0; ly < 4; ++ly) {
            const std::uint64_t i = grid.index(4 * bx, 4 * by + ly, 4 * bz + lz);
            const std::uint64_t nibble = (words[i >> 6] >> (i & 63)) & 0xfu;
            pattern |= nibble << (lz * 16 + ly * 4);
          }
        }
        for (int c = 0; c < PackedGrid::kChannels; ++c) {
          out[c * channel_size + block_index] = static_cast<std::uint8_t>(pattern >> (8 * c));
        }
      }
    }
  }
  return packed;
}

BoolGrid unpack(const PackedGrid& packed) {
  const std::uint32_t m = packed.block_dim();
  BoolGrid grid(4 * m);
  auto words = grid.words();
  const auto in = packed.bytes();
  const std::uint64_t channel_size = packed.channel_size();
  std::uint64_t block_index = 0;
  for (std::uint32_t bz = 0; bz < m; ++bz) {
    for (std::uint32_t by = 0; by < m; ++by) {
      for (std::uint32_t bx = 0; bx < m; ++bx, ++block_index) {
        std::uint64_t pattern = 0;
        for (int c = 0; c < PackedGrid::kChannels; ++c) {
          pattern |= std::uint64_t{in[c * channel_size + block_index]} << (8 * c);
        }
        if (pattern == 0) continue;
        for (std::uint32_t lz = 0; lz < 4; ++lz) {
          for (std::uint32_t ly = 0; ly < 4; ++ly) {
            const std::uint64_t nibble = (pattern >> (lz * 16 + ly * 4)) & 0xfu;
            const std::uint64_t i = grid.index(4 * bx, 4 * by + ly, 4 * bz + lz);
            words[i >> 6] |= nibble << (i & 63);
          }
        }
      }
    }
  }
  return grid;
}

bool is_blank_patch(const BoolGrid& grid, Cell origin, std::uint32_t size) {
  const std::uint64_t dim = grid.dim();
  if (size == 0 || origin.x + std::uint64_t{size} > dim || origin.y + std::uint64_t{size} > dim ||
      origin.z + std::uint64_t{size} > dim) {
    throw Error(ErrorCode::kInvalidInput, "patch extends outside the grid");
  }
  for (std::uint32_t z = origin.z; z < origin.z + size; ++z) {
    for (std::uint32_t y = origin.y; y < origin.y + size; ++y) {
      for (std::uint32_t x = origin.x; x < origin.x + size; ++x) {
        if (grid.get(x, y, z)) return false;
      }
    }
  }
  return true;
}

std::vector<std::uint8_t> write_grid_file(const BoolGrid& grid) {
  std::vector<std::uint8_t> out = header(grid.dim(), kRawLayout);
  const std::uint64_t payload = grid.voxel_count() / 8;
  out.reserve(kHeaderSize + payload);
  const auto words = grid.words();
  for (std::uint64_t b = 0; b < payload; ++b) {
    out.push_back(static_cast<std::uint8_t>(words[b / 8] >> (8 * (b % 8))));
  }
  return out;
}

std::vector<std::uint8_t> write_packed_file(const PackedGrid& packed) {
  std::vector<std::uint8_t> out = header(packed.block_dim() * 4, kPackedLayout);
  out.insert(out.end(), packed.bytes().begin(), packed.bytes().end());
  return out;
}

BoolGrid read_grid_file(std::span<const std::uint8_t> bytes) {
  const std::uint32_t dim = read_header(bytes, kRawLayout);
  BoolGrid grid(dim);
  const std::uint64_t payload = grid.voxel_count() / 8;
  if (bytes.size() != kHeaderSize + payload) {
    throw Error(ErrorCode::kParseError, "raw grid payload has the wrong size");
  }
  auto words = grid.words();
  for (std::uint64_t b = 0; b < payload; ++b) {
    words[b / 8] |= std::uint64_t{bytes[kHeaderSize + b]} << (8 * (b % 8));
  }
  return grid;
}

PackedGrid read_packed_file(std::span<const std::uint8_t> bytes) {
  const std::uint32_t dim = read_header(bytes, kPackedLayout);
  PackedGrid packed(dim / 4);
  if (bytes.size() != kHeaderSize + packed.bytes().size()) {
    throw Error(ErrorCode::kParseError, "packed grid payload has the wrong size");
  }
  std::copy(bytes.begin() + kHeaderSize, bytes.end(), packed.bytes().begin());
  return packed;
}

GridSpec voxel_grid_spec(std::uint32_t dim) {
  int depth = GridSpec::kMinDepth;
  while ((std::uint64_t{1} << (depth - 1)) < dim) ++depth;
  return GridSpec({0, 0, 0}, depth, 1.0, 1.0);
}

Frame voxel_frame(const BoolGrid& grid, int frame_index) {
  Frame frame;
  frame.frame_index = frame_index;
  frame.sites.reserve(grid.popcount());
  const auto words = grid.words();
  const std::uint64_t dim = grid.dim();
  for (std::uint64_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      const std::uint64_t i = w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits));
      bits &= bits - 1;
      const double x = static_cast<double>(i % dim);
      const double y = static_cast<double>((i / dim) % dim);
      const double z = static_cast<double>(i / (dim * dim));
      frame.sites.push_back({vocab::kOccupied, {x + 0.5, y + 0.5, z + 0.5}});
    }
  }
  return frame;
}

BoolGrid grid_from_frame(const Frame& frame, std::uint32_t dim) {
  BoolGrid grid(dim);
  for (const Site& site : frame.sites) {
    const double x = std::floor(site.pos.x);
    const double y = std::floor(site.pos.y);
    const double z = std::floor(site.pos.z);
    if (x < 0 || y < 0 || z < 0 || x >= dim || y >= dim || z >= dim) continue;
    grid.set(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
             static_cast<std::uint32_t>(z));
  }
  return grid;
}

}  // namespace octok
