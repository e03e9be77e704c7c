// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/formats.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "octok/error.hpp"
#include "octok/token_io.hpp"
#include "octok/vocab.hpp"

namespace octok {
namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + what, line);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_real(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size() || !std::isfinite(value)) {
    parse_error(line, "\"" + std::string(field) + "\" is not a finite number");
  }
  return value;
}

int parse_symbol(std::string_view field, std::size_t line) {
  const auto id = vocab::id_of(field);
  if (!id || !vocab::is_site_type(*id) || *id == vocab::kOccupied) {
    parse_error(line, "unknown element \"" + std::string(field) + "\"");
  }
  return *id;
}

// Lines of `text` without their terminators.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    std::size_t eol = text_.find('\n', pos_);
    if (eol == std::string_view::npos) eol = text_.size();
    line = text_.substr(pos_, eol - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = eol + 1;
    ++number_;
    return true;
  }
  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

bool is_blank(std::string_view line) { return split_fields(line).empty(); }

// Reads one XYZ block; returns false at end of input before a count line.
bool read_xyz_block(LineReader& reader, Frame& frame) {
  std::string_view line;
  do {
    if (!reader.next(line)) return false;
  } while (is_blank(line));

  const auto header = split_fields(line);
  std::size_t count = 0;
  const auto [end, ec] =
      std::from_chars(header[0].data(), header[0].data() + header[0].size(), count);
  if (header.size() != 1 || ec != std::errc() || end != header[0].data() + header[0].size()) {
    parse_error(reader.number(), "expected an atom count");
  }
  if (!reader.next(line)) parse_error(reader.number() + 1, "missing comment line");

  frame.sites.clear();
  frame.sites.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!reader.next(line)) parse_error(reader.number() + 1, "missing atom line");
    const auto fields = split_fields(line);
    if (fields.size() < 4) parse_error(reader.number(), "expected \"symbol x y z\"");
    Site site;
    site.type_id = parse_symbol(fields[0], reader.number());
    site.pos = {parse_real(fields[1], reader.number()), parse_real(fields[2], reader.number()),
                parse_real(fields[3], reader.number())};
    frame.sites.push_back(site);
  }
  return true;
}

double determinant(const Lattice& m) {
  return m[0].x * (m[1].y * m[2].z - m[1].z * m[2].y) -
         m[0].y * (m[1].x * m[2].z - m[1].z * m[2].x) +
         m[0].z * (m[1].x * m[2].y - m[1].y * m[2].x);
}

Vec3 to_cartesian(const Lattice& lattice, Vec3 fractional) {
  return lattice[0] * fractional.x + lattice[1] * fractional.y + lattice[2] * fractional.z;
}

}  // namespace

Frame parse_xyz(std::string_view text) {
  LineReader reader(text);
  Frame frame;
  if (!read_xyz_block(reader, frame)) parse_error(1, "empty XYZ input");
  std::string_view line;
  while (reader.next(line)) {
    if (!is_blank(line)) parse_error(reader.number(), "trailing content after the XYZ block");
  }
  return frame;
}

std::vector<Frame> parse_xyz_frames(std::string_view text) {
  LineReader reader(text);
  std::vector<Frame> frames;
  Frame frame;
  while (read_xyz_block(reader, frame)) {
    frame.frame_index = static_cast<int>(frames.size());
    frames.push_back(frame);
  }
  if (frames.empty()) parse_error(1, "empty XYZ input");
  return frames;
}

std::string write_xyz(std::span<const Frame> frames) {
  std::string out;
  for (const Frame& frame : frames) {
    out += std::to_string(frame.sites.size()) + "\n";
    out += "frame " + std::to_string(frame.frame_index) + "\n";
    for (const Site& site : frame.sites) {
      std::string_view symbol = vocab::symbol_of(site.type_id);
      const std::string name = symbol.empty() ? "X" + std::to_string(site.type_id)
                                              : std::string(symbol);
      out += name + " " + format_real(site.pos.x) + " " + format_real(site.pos.y) + " " +
             format_real(site.pos.z) + "\n";
    }
  }
  return out;
}

CrystalInput parse_crystal_input(std::string_view text) {
  LineReader reader(text);
  CrystalInput crystal;
  std::size_t rows = 0;
  std::string_view line;
  while (reader.next(line)) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (rows < 3) {
      if (fields.size() != 3) parse_error(reader.number(), "expected a lattice row \"x y z\"");
      crystal.lattice[rows++] = {parse_real(fields[0], reader.number()),
                                 parse_real(fields[1], reader.number()),
                                 parse_real(fields[2], reader.number())};
      continue;
    }
    if (fields.size() != 4) parse_error(reader.number(), "expected \"symbol fa fb fc\"");
    const int type_id = parse_symbol(fields[0], reader.number());
    const Vec3 fractional{parse_real(fields[1], reader.number()),
                          parse_real(fields[2], reader.number()),
                          parse_real(fields[3], reader.number())};
    for (int a = 0; a < 3; ++a) {
      if (fractional[a] < 0.0 || fractional[a] >= 1.0) {
        throw Error(ErrorCode::kInvalidInput,
                    "line " + std::to_string(reader.number()) +
                        ": fractional coordinate outside [0, 1)",
                    reader.number());
      }
    }
    crystal.atoms.emplace_back(type_id, fractional);
  }
  if (rows < 3) parse_error(reader.number(), "crystal input needs three lattice rows");
  const double scale = std::max({distance(crystal.lattice[0], {}), distance(crystal.lattice[1], {}),
                                 distance(crystal.lattice[2], {})});
  if (!(std::abs(determinant(crystal.lattice)) > 1e-12 * scale * scale * scale)) {
    throw Error(ErrorCode::kInvalidInput, "lattice matrix is singular");
  }
  return crystal;
}

std::pair<Frame, Frame> crystal_frames(const CrystalInput& crystal) {
  Frame lattice;
  lattice.frame_index = 0;
  for (unsigned i = 0; i < 8; ++i) {
    const Vec3 corner{static_cast<double>((i >> 2) & 1u), static_cast<double>((i >> 1) & 1u),
                      static_cast<double>(i & 1u)};
    lattice.sites.push_back({vocab::kLattice, to_cartesian(crystal.lattice, corner)});
  }
  Frame atoms;
  atoms.frame_index = 1;
  for (const auto& [type_id, fractional] : crystal.atoms) {
    atoms.sites.push_back({type_id, to_cartesian(crystal.lattice, fractional)});
  }
  return {std::move(lattice), std::move(atoms)};
}

std::pair<Frame, Frame> parse_crystal(std::string_view text) {
  return crystal_frames(parse_crystal_input(text));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "cannot read " + path);
  return buffer.str();
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  const std::string text = read_text_file(path);
  return {text.begin(), text.end()};
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  const std::string temporary = path + ".tmp";
  {
    std::ofstream out(temporary, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot create " + temporary);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + temporary);
  }
  std::error_code ec;
  std::filesystem::rename(temporary, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot rename " + temporary + ": " + ec.message());
}

void write_file_atomic(const std::string& path, std::span<const std::uint8_t> contents) {
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(contents.data()),
                                           contents.size()));
}

}  // namespace octok
