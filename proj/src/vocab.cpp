// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/vocab.hpp"

#include <array>
#include <cctype>

namespace octok::vocab {
namespace {

constexpr std::array<std::string_view, kSize> kSymbols = {
    "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf",
    "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og", "LAT",
    "OCC", "MASK", "BOS", "EOS"};

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::optional<int> id_of(std::string_view symbol) {
  for (int id = 1; id < kSize; ++id) {
    if (iequals(kSymbols[static_cast<std::size_t>(id)], symbol)) return id;
  }
  return std::nullopt;
}

std::string_view symbol_of(int id) {
  if (id < 1 || id >= kSize) return {};
  return kSymbols[static_cast<std::size_t>(id)];
}

bool is_site_type(int id) { return id >= kFirstElement && id <= kOccupied; }

}  // namespace octok::vocab
