// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OCTOK_VOXELPACK_HPP_
#define OCTOK_VOXELPACK_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "octok/geometry.hpp"

namespace octok {

// Cubic boolean volume of side D (a multiple of 4), stored as a bitstream
// with bit index x + D * (y + D * z).
class BoolGrid {
 public:
  // Throws InvalidInput unless D >= 4 and D % 4 == 0.
  explicit BoolGrid(std::uint32_t dim);

  std::uint32_t dim() const { return dim_; }
  std::uint64_t voxel_count() const { return std::uint64_t{dim_} * dim_ * dim_; }
  std::uint64_t index(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
    return x + std::uint64_t{dim_} * (y + std::uint64_t{dim_} * z);
  }

  bool get(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
    const std::uint64_t i = index(x, y, z);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::uint32_t x, std::uint32_t y, std::uint32_t z, bool value = true);

  std::uint64_t popcount() const;
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  friend bool operator==(const BoolGrid&, const BoolGrid&) = default;

 private:
  std::uint32_t dim_;
  std::vector<std::uint64_t> words_;
};

// Eight byte channels of side D/4. Within each 4x4x4 block the local index
// li = lz*16 + ly*4 + lx selects channel li / 8 and bit li % 8 (LSB first).
// Channels are stored one after another, each x-fastest over blocks.
class PackedGrid {
 public:
  static constexpr int kChannels = 8;

  explicit PackedGrid(std::uint32_t block_dim);

  std::uint32_t block_dim() const { return block_dim_; }
  std::uint64_t channel_size() const {
    return std::uint64_t{block_dim_} * block_dim_ * block_dim_;
  }
  std::uint8_t at(int channel, std::uint32_t bx, std::uint32_t by, std::uint32_t bz) const {
    return bytes_[offset(channel, bx, by, bz)];
  }
  std::uint8_t& at(int channel, std::uint32_t bx, std::uint32_t by, std::uint32_t bz) {
    return bytes_[offset(channel, bx, by, bz)];
  }
  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::span<std::uint8_t> bytes() { return bytes_; }

  friend bool operator==(const PackedGrid&, const PackedGrid&) = default;

 private:
  std::uint64_t offset(int channel, std::uint32_t bx, std::uint32_t by, std::uint32_t bz) const {
    return static_cast<std::uint64_t>(channel) * channel_size() + bx +
           std::uint64_t{block_dim_} * (by + std::uint64_t{block_dim_} * bz);
  }

  std::uint32_t block_dim_;
  std::vector<std::uint8_t> bytes_;
};

PackedGrid pack(const BoolGrid& grid);
BoolGrid unpack(const PackedGrid& packed);

// True iff every voxel of the size^3 patch starting at `origin` is clear.
// Throws InvalidInput when the patch leaves the grid or size is 0.
bool is_blank_patch(const BoolGrid& grid, Cell origin, std::uint32_t size = 32);

// Files: a 16-byte header ("OCTK", u16 version = 1, u32 D, u8 layout with 0
// for raw and 1 for packed, five zero bytes; little endian) followed by the
// raw bitstream (D^3/8 bytes, LSB first) or the packed channels.
std::vector<std::uint8_t> write_grid_file(const BoolGrid& grid);
std::vector<std::uint8_t> write_packed_file(const PackedGrid& packed);
// Throws ParseError on a bad header or a truncated payload.
BoolGrid read_grid_file(std::span<const std::uint8_t> bytes);
PackedGrid read_packed_file(std::span<const std::uint8_t> bytes);

// Voxel volumes reuse the octree tokenizer with one leaf per voxel: unit
// leaves, a single offset bin, origin at the grid corner.
GridSpec voxel_grid_spec(std::uint32_t dim);
Frame voxel_frame(const BoolGrid& grid, int frame_index = 0);
// Sites outside [0, dim)^3 are ignored.
BoolGrid grid_from_frame(const Frame& frame, std::uint32_t dim);

}  // namespace octok

#endif  // OCTOK_VOXELPACK_HPP_
