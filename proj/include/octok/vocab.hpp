// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OCTOK_VOCAB_HPP_
#define OCTOK_VOCAB_HPP_

#include <optional>
#include <string_view>

namespace octok::vocab {

// Site and token type ids. Elements use their atomic number (H = 1 ..
// Og = 118); the reserved ids follow. These values are part of the token
// file format and must not change.
inline constexpr int kFirstElement = 1;
inline constexpr int kLastElement = 118;
inline constexpr int kLattice = 119;   // "LAT": crystal lattice vertex
inline constexpr int kOccupied = 120;  // "OCC": occupied voxel
inline constexpr int kMask = 121;
inline constexpr int kBos = 122;
inline constexpr int kEos = 123;
inline constexpr int kSize = 124;

// Case-insensitive lookup of an element or special symbol.
std::optional<int> id_of(std::string_view symbol);

// Canonical spelling ("C", "Cl", "LAT"); empty for ids outside the table.
std::string_view symbol_of(int id);

bool is_site_type(int id);

}  // namespace octok::vocab

#endif  // OCTOK_VOCAB_HPP_
