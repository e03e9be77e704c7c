// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OCTOK_FORMATS_HPP_
#define OCTOK_FORMATS_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "octok/geometry.hpp"

namespace octok {

// XYZ: a count line, a comment line, then `count` lines of
// "<symbol> <x> <y> <z>" in Angstrom. Symbols are element symbols or "LAT"
// (case-insensitive). parse_xyz reads exactly one block; parse_xyz_frames
// reads consecutive blocks and numbers them 0, 1, ...
// Errors: ParseError with the 1-based line number.
Frame parse_xyz(std::string_view text);
std::vector<Frame> parse_xyz_frames(std::string_view text);
std::string write_xyz(std::span<const Frame> frames);

using Lattice = std::array<Vec3, 3>;  // row vectors a, b, c

struct CrystalInput {
  Lattice lattice;
  std::vector<std::pair<int, Vec3>> atoms;  // (type id, fractional coordinate)
};

// Crystal text: '#' starts a comment, blank lines are skipped. The first
// three data lines are the lattice rows "ax ay az"; every following line is
// "<symbol> <fa> <fb> <fc>" with fractional coordinates in [0, 1).
// ParseError on malformed lines, InvalidInput on a singular lattice or a
// fractional coordinate outside [0, 1).
CrystalInput parse_crystal_input(std::string_view text);

// Frame 0 holds the eight lattice corners {0,1}^3 . lattice as LAT sites
// (corner index i has fractional coordinate (i>>2 & 1, i>>1 & 1, i & 1)),
// frame 1 the atoms in Cartesian coordinates.
std::pair<Frame, Frame> crystal_frames(const CrystalInput& crystal);
std::pair<Frame, Frame> parse_crystal(std::string_view text);

// Whole-file helpers. write_file_atomic writes a sibling temporary and
// renames it over `path`. All throw IoError.
std::string read_text_file(const std::string& path);
std::vector<std::uint8_t> read_binary_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view contents);
void write_file_atomic(const std::string& path, std::span<const std::uint8_t> contents);

}  // namespace octok

#endif  // OCTOK_FORMATS_HPP_
