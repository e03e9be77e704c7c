// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/formats.hpp"

#include <gtest/gtest.h>

#include "octok/error.hpp"
#include "octok/vocab.hpp"

namespace octok {
namespace {

std::size_t error_line(auto&& fn, ErrorCode expected = ErrorCode::kParseError) {
  try {
    fn();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), expected) << e.what();
    return e.position();
  }
  ADD_FAILURE() << "no error";
  return 0;
}

TEST(VocabTest, StableIds) {
  EXPECT_EQ(vocab::id_of("H"), 1);
  EXPECT_EQ(vocab::id_of("c"), 6);
  EXPECT_EQ(vocab::id_of("CL"), 17);
  EXPECT_EQ(vocab::id_of("Og"), 118);
  EXPECT_EQ(vocab::id_of("LAT"), vocab::kLattice);
  EXPECT_EQ(vocab::id_of("OCC"), vocab::kOccupied);
  EXPECT_FALSE(vocab::id_of("Xx").has_value());
  EXPECT_EQ(vocab::symbol_of(26), "Fe");
  EXPECT_EQ(vocab::symbol_of(vocab::kMask), "MASK");
  for (int id = 1; id < vocab::kSize; ++id) EXPECT_EQ(vocab::id_of(vocab::symbol_of(id)), id);
}

TEST(XyzTest, SingleOxygen) {
  const Frame frame = parse_xyz("1\nwater fragment\nO 0.0 0.0 0.0\n");
  ASSERT_EQ(frame.sites.size(), 1u);
  EXPECT_EQ(frame.sites[0].type_id, 8);
  EXPECT_EQ(frame.sites[0].pos, (Vec3{0, 0, 0}));
}

TEST(XyzTest, MultipleBlocksAndRoundTrip) {
  const std::string text = "2\nfirst\nC 0 0 0\nH 1.09 0 0\n\n1\nsecond\r\nN -1.5 2 3.25\n";
  const auto frames = parse_xyz_frames(text);
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[1].frame_index, 1);
  EXPECT_EQ(frames[1].sites[0].pos, (Vec3{-1.5, 2, 3.25}));
  const auto again = parse_xyz_frames(write_xyz(frames));
  ASSERT_EQ(again.size(), 2u);
  EXPECT_EQ(again[0].sites[1].type_id, 1);
  EXPECT_EQ(again[1].sites[0].pos, frames[1].sites[0].pos);
}

TEST(XyzTest, Errors) {
  EXPECT_EQ(error_line([] { parse_xyz(""); }), 1u);
  EXPECT_EQ(error_line([] { parse_xyz("two\ncomment\n"); }), 1u);
  EXPECT_EQ(error_line([] { parse_xyz("2\ncomment\nC 0 0 0\n"); }), 4u);
  EXPECT_EQ(error_line([] { parse_xyz("1\ncomment\nC 0 zero 0\n"); }), 3u);
  EXPECT_EQ(error_line([] { parse_xyz("1\ncomment\nQq 0 0 0\n"); }), 3u);
  EXPECT_EQ(error_line([] { parse_xyz("1\ncomment\nC 0 0\n"); }), 3u);
  EXPECT_EQ(error_line([] { parse_xyz("1\nc\nC 0 0 0\nextra\n"); }), 4u);
}

TEST(CrystalTest, CubicCell) {
  const auto [lattice, atoms] = parse_crystal(
      "# rock salt fragment\n5 0 0\n0 5 0\n0 0 5\n\nNa 0.5 0.5 0.5  # center\nCl 0 0 0\n");
  ASSERT_EQ(lattice.sites.size(), 8u);
  EXPECT_EQ(lattice.frame_index, 0);
  EXPECT_EQ(atoms.frame_index, 1);
  for (unsigned i = 0; i < 8; ++i) {
    EXPECT_EQ(lattice.sites[i].type_id, vocab::kLattice);
    EXPECT_EQ(lattice.sites[i].pos,
              (Vec3{5.0 * ((i >> 2) & 1u), 5.0 * ((i >> 1) & 1u), 5.0 * (i & 1u)}));
  }
  ASSERT_EQ(atoms.sites.size(), 2u);
  EXPECT_EQ(atoms.sites[0].type_id, 11);
  EXPECT_EQ(atoms.sites[0].pos, (Vec3{2.5, 2.5, 2.5}));
}

TEST(CrystalTest, ObliqueLattice) {
  const auto [lattice, atoms] = parse_crystal("4 0 0\n2 3 0\n1 1 5\nSi 0.5 0.5 0\n");
  EXPECT_EQ(atoms.sites[0].pos, (Vec3{3.0, 1.5, 0.0}));
  EXPECT_EQ(lattice.sites[7].pos, (Vec3{7, 4, 5}));
}

TEST(CrystalTest, Errors) {
  EXPECT_EQ(error_line([] { parse_crystal("1 0 0\n0 1 0\n"); }), 2u);
  EXPECT_EQ(error_line([] { parse_crystal("1 0 0\n0 1\n0 0 1\n"); }), 2u);
  EXPECT_EQ(error_line([] { parse_crystal("1 0 0\n0 1 0\n0 0 1\nC 0.5 0.5\n"); }), 4u);
  error_line([] { parse_crystal("1 0 0\n2 0 0\n0 0 1\n"); }, ErrorCode::kInvalidInput);
  EXPECT_EQ(error_line([] { parse_crystal("1 0 0\n0 1 0\n0 0 1\nC 1.0 0 0\n"); },
                       ErrorCode::kInvalidInput),
            4u);
}

}  // namespace
}  // namespace octok
