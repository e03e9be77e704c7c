// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: tokenize, detokenize, verify, stats, fit, sample,
// pack and unpack.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "octok/error.hpp"
#include "octok/formats.hpp"
#include "octok/geometry.hpp"
#include "octok/octree.hpp"
#include "octok/sampler.hpp"
#include "octok/token_io.hpp"
#include "octok/tokenizer.hpp"
#include "octok/vocab.hpp"
#include "octok/voxelpack.hpp"

namespace fs = std::filesystem;

namespace octok {
namespace {

constexpr std::uint8_t kLayoutPacked = 1;
constexpr std::size_t kLayoutByte = 10;

struct TokenizeFlags {
  std::string in;
  std::string format = "xyz";
  std::string out;
  bool mntp = false;
  int depth = 0;
  bool auto_depth = false;
  double leaf = 0.24;
  double res = 0.01;
  std::uint64_t seed = 0;
  bool rotate = false;
};

// Accepts both raw and packed grid files.
BoolGrid load_grid(const std::string& path) {
  const auto bytes = read_binary_file(path);
  if (bytes.size() > kLayoutByte && bytes[kLayoutByte] == kLayoutPacked) {
    return unpack(read_packed_file(bytes));
  }
  return read_grid_file(bytes);
}

std::vector<Frame> load_frames(const TokenizeFlags& flags) {
  if (flags.format == "xyz") return parse_xyz_frames(read_text_file(flags.in));
  if (flags.format == "crystal") {
    auto [lattice, atoms] = parse_crystal(read_text_file(flags.in));
    return {std::move(lattice), std::move(atoms)};
  }
  if (flags.format == "voxgrid") return {voxel_frame(load_grid(flags.in))};
  throw Error(ErrorCode::kInvalidInput, "unknown format '" + flags.format + "'");
}

// Serializes frames under the flags. With auto depth a leaf collision is
// retried one level deeper inside the same root box, which halves the leaf
// length, until the leaf would drop below the resolution.
TokenSequence tokenize_frames(const TokenizeFlags& flags, std::vector<Frame>& frames,
                              std::optional<std::uint32_t> voxel_dim) {
  if (flags.rotate) {
    if (voxel_dim) throw Error(ErrorCode::kInvalidInput, "--rotate does not apply to voxel grids");
    frames = random_rotation(frames, flags.seed);
  }
  const SerializeOptions options{.mntp = flags.mntp};
  if (voxel_dim) return serialize(voxel_grid_spec(*voxel_dim), frames, options);

  FitOptions fit{.c_leaf = flags.leaf, .c_r = flags.res, .margin = flags.leaf / 2};
  fit.fixed_depth = flags.depth;
  GridSpec spec = fit_grid(frames, fit);
  for (;;) {
    try {
      return serialize(spec, frames, options);
    } catch (const Error& e) {
      const double finer = spec.c_leaf() / 2;
      if (!flags.auto_depth || e.code() != ErrorCode::kLeafCollision ||
          spec.depth() >= GridSpec::kMaxDepth || finer < spec.c_r()) {
        throw;
      }
      spec = GridSpec(spec.origin(), spec.depth() + 1, finer, spec.c_r());
    }
  }
}

std::optional<std::uint32_t> voxel_dim_of(const TokenizeFlags& flags) {
  if (flags.format != "voxgrid") return std::nullopt;
  return load_grid(flags.in).dim();
}

int run_tokenize(const TokenizeFlags& flags) {
  std::vector<Frame> frames = load_frames(flags);
  const TokenSequence seq = tokenize_frames(flags, frames, voxel_dim_of(flags));
  write_file_atomic(flags.out, write_jsonl(seq));
  return 0;
}

// A voxel sequence is one whose sites are all OCC.
bool is_voxel_sequence(const TokenSequence& seq) {
  bool any = false;
  for (const Token& t : seq.tokens) {
    if (t.kind != TokenKind::kAtom) continue;
    if (t.t != vocab::kOccupied) return false;
    any = true;
  }
  return any;
}

int run_detokenize(const std::string& in, const std::string& out) {
  const TokenSequence seq = read_jsonl(read_text_file(in));
  const std::vector<Frame> frames = decode(seq);
  if (is_voxel_sequence(seq)) {
    if (frames.size() != 1) {
      throw Error(ErrorCode::kInvalidInput, "voxel sequences must hold exactly one frame");
    }
    const auto dim = static_cast<std::uint32_t>(seq.spec.leaves_per_axis());
    write_file_atomic(out, write_grid_file(grid_from_frame(frames[0], dim)));
  } else {
    write_file_atomic(out, write_xyz(frames));
  }
  return 0;
}

// Largest distance between an input site and the decoded site in the same
// leaf. Sites are matched by leaf because decoding reorders them.
double max_site_error(const GridSpec& spec, std::span<const Frame> input,
                      std::span<const Frame> decoded) {
  if (input.size() != decoded.size()) {
    throw Error(ErrorCode::kMalformedSequence, "frame count changed in round trip");
  }
  double worst = 0;
  for (std::size_t f = 0; f < input.size(); ++f) {
    if (input[f].sites.size() != decoded[f].sites.size()) {
      throw Error(ErrorCode::kMalformedSequence, fmt::format("site count changed in frame {}", f));
    }
    std::map<Cell, const Site*> by_leaf;
    for (const Site& s : decoded[f].sites) by_leaf[leaf_index_of(spec, s.pos)] = &s;
    for (const Site& s : input[f].sites) {
      const auto it = by_leaf.find(leaf_index_of(spec, s.pos));
      if (it == by_leaf.end() || it->second->type_id != s.type_id) {
        throw Error(ErrorCode::kMalformedSequence,
                    fmt::format("site lost in round trip in frame {}", f));
      }
      worst = std::max(worst, distance(s.pos, it->second->pos));
    }
  }
  return worst;
}

int run_verify(const TokenizeFlags& flags) {
  std::vector<Frame> frames = load_frames(flags);
  const auto dim = voxel_dim_of(flags);
  const TokenSequence seq = tokenize_frames(flags, frames, dim);
  // Decode what a reader would see, including the text round trip.
  const TokenSequence reread = read_jsonl(write_jsonl(seq));
  const std::vector<Frame> decoded = decode(reread);
  double error = 0;
  if (dim) {
    if (grid_from_frame(decoded.at(0), *dim) != load_grid(flags.in)) {
      throw Error(ErrorCode::kMalformedSequence, "voxel grid changed in round trip");
    }
  } else {
    error = max_site_error(seq.spec, frames, decoded);
  }
  std::cout << fmt::format("frames={} sites={} L={} max_error={:.6f} c_r={:.6f}\n",
                           frames.size(), token_stats(seq).atom, seq.spec.depth(), error,
                           seq.spec.c_r());
  if (error > seq.spec.c_r()) {
    std::cerr << "octok: max coordinate error exceeds c_r\n";
    return 1;
  }
  return 0;
}

int run_stats(const std::string& in) {
  const TokenSequence seq = read_jsonl(read_text_file(in));
  decode(seq);
  const StatsReport r = token_stats(seq);
  nlohmann::ordered_json out;
  out["L"] = r.depth;
  out["mntp"] = seq.mntp;
  out["frames"] = r.frames;
  out["bos"] = r.bos;
  out["eos"] = r.eos;
  out["code"] = r.code;
  out["atom"] = r.atom;
  out["mask"] = r.mask;
  out["per_level"] = r.per_level;
  out["content_total"] = r.content_total;
  out["dense_equivalent"] = r.dense_equivalent;
  out["dense_ratio"] = r.dense_ratio;
  out["naive_octree_equivalent"] = r.naive_octree_equivalent;
  out["naive_ratio"] = r.naive_ratio;
  out["bound_ok"] = r.bound_ok;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_fit(const std::string& corpus_dir, const std::string& out, double alpha) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw Error(ErrorCode::kInvalidInput, "no .jsonl files in '" + corpus_dir + "'");
  }
  std::vector<TokenSequence> corpus;
  corpus.reserve(files.size());
  for (const auto& path : files) {
    try {
      corpus.push_back(read_jsonl(read_text_file(path.string())));
    } catch (const Error& e) {
      throw std::runtime_error(path.string() + ": " + e.what());
    }
  }
  write_file_atomic(out, write_model_json(fit(corpus, alpha)));
  return 0;
}

int run_sample(const std::string& model_path, std::size_t n, std::uint64_t seed,
               double temperature, std::size_t top_r, const std::string& out_dir) {
  if (n == 0) throw Error(ErrorCode::kInvalidInput, "--n must be positive");
  const CodeModel model = read_model_json(read_text_file(model_path));
  const GridSpec spec = model.grid();
  std::vector<TokenSequence> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) samples.push_back(sample(model, spec, seed + i, temperature));
  if (top_r == 0) throw Error(ErrorCode::kInvalidInput, "--top-r must be positive");
  const std::size_t r = std::min(top_r, n);
  const std::vector<TokenSequence> best = rank(samples, model, r);
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < best.size(); ++i) {
    const fs::path path = fs::path(out_dir) / fmt::format("sample_{:04d}.jsonl", i);
    write_file_atomic(path.string(), write_jsonl(best[i]));
  }
  return 0;
}

int run_pack(const std::string& in, const std::string& out) {
  write_file_atomic(out, write_packed_file(pack(read_grid_file(read_binary_file(in)))));
  return 0;
}

int run_unpack(const std::string& in, const std::string& out) {
  write_file_atomic(out, write_grid_file(unpack(read_packed_file(read_binary_file(in)))));
  return 0;
}

void add_tokenize_flags(CLI::App* cmd, TokenizeFlags& flags) {
  cmd->add_option("--in", flags.in, "input file")->required();
  cmd->add_option("--format", flags.format, "input format")
      ->check(CLI::IsMember({"xyz", "crystal", "voxgrid"}));
  cmd->add_flag("--mntp", flags.mntp, "emit Mask twins");
  auto* depth = cmd->add_option("--L", flags.depth, "fixed depth")->check(CLI::Range(2, 21));
  auto* auto_depth = cmd->add_flag("--auto-L", flags.auto_depth, "deepen on leaf collisions");
  depth->excludes(auto_depth);
  cmd->add_option("--leaf", flags.leaf, "leaf cell length")->check(CLI::PositiveNumber);
  cmd->add_option("--res", flags.res, "offset resolution")->check(CLI::PositiveNumber);
  auto* seed = cmd->add_option("--seed", flags.seed, "rotation seed");
  cmd->add_flag("--rotate", flags.rotate, "apply a seeded random rotation")->needs(seed);
}

int run(int argc, char** argv) {
  CLI::App app{"Octree tokenizer for sparse 3D structures", "octok"};
  app.require_subcommand(1);

  TokenizeFlags tok;
  auto* tokenize = app.add_subcommand("tokenize", "structure file to token JSONL");
  add_tokenize_flags(tokenize, tok);
  tokenize->add_option("--out", tok.out, "output .jsonl")->required();

  TokenizeFlags ver;
  auto* verify = app.add_subcommand("verify", "round trip a structure and report the error");
  add_tokenize_flags(verify, ver);

  std::string in, out;
  auto* detokenize = app.add_subcommand("detokenize", "token JSONL to XYZ or grid file");
  detokenize->add_option("--in", in)->required();
  detokenize->add_option("--out", out)->required();

  auto* stats = app.add_subcommand("stats", "token counts and compression ratios as JSON");
  stats->add_option("--in", in)->required();

  std::string corpus;
  double alpha = 1.0;
  auto* fit_cmd = app.add_subcommand("fit", "fit a count model on a directory of .jsonl");
  fit_cmd->add_option("--corpus", corpus)->required();
  fit_cmd->add_option("--out", out)->required();
  fit_cmd->add_option("--alpha", alpha)->check(CLI::PositiveNumber);

  std::string model;
  std::size_t n = 1, top_r = 1;
  std::uint64_t seed = 0;
  double temperature = 1.0;
  auto* sample_cmd = app.add_subcommand("sample", "draw token sequences from a model");
  sample_cmd->add_option("--model", model)->required();
  sample_cmd->add_option("--n", n)->required();
  sample_cmd->add_option("--seed", seed)->required();
  sample_cmd->add_option("--temperature", temperature)->check(CLI::PositiveNumber);
  sample_cmd->add_option("--top-r", top_r, "keep the r best-scored samples (default 1)");
  sample_cmd->add_option("--out", out, "output directory")->required();

  auto* pack_cmd = app.add_subcommand("pack", "raw grid file to packed grid file");
  pack_cmd->add_option("--in", in)->required();
  pack_cmd->add_option("--out", out)->required();
  auto* unpack_cmd = app.add_subcommand("unpack", "packed grid file to raw grid file");
  unpack_cmd->add_option("--in", in)->required();
  unpack_cmd->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (tokenize->parsed()) return run_tokenize(tok);
  if (verify->parsed()) return run_verify(ver);
  if (detokenize->parsed()) return run_detokenize(in, out);
  if (stats->parsed()) return run_stats(in);
  if (fit_cmd->parsed()) return run_fit(corpus, out, alpha);
  if (sample_cmd->parsed()) return run_sample(model, n, seed, temperature, top_r, out);
  if (pack_cmd->parsed()) return run_pack(in, out);
  if (unpack_cmd->parsed()) return run_unpack(in, out);
  return 1;
}

}  // namespace
}  // namespace octok

int main(int argc, char** argv) {
  try {
    return octok::run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "octok: " << e.what() << "\n";
    return 1;
  }
}
