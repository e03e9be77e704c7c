// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OCTOK_SAMPLER_HPP_
#define OCTOK_SAMPLER_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "octok/geometry.hpp"
#include "octok/tokenizer.hpp"

namespace octok {

// Conditioning context of a Code token: its level and the subtree code that
// created its cell (0 for the root).
struct CodeContext {
  int level = 0;
  int parent_code = 0;
  friend auto operator<=>(const CodeContext&, const CodeContext&) = default;
};

// Laplace-smoothed count tables over subtree codes (per context) and site
// types. Code 0 never receives probability mass.
class CodeModel {
 public:
  using CodeCounts = std::array<std::uint64_t, 256>;

  // depth 0 means "not yet tied to a grid" (a model fitted on nothing).
  // Throws InvalidInput unless alpha > 0.
  explicit CodeModel(double alpha = 1.0, int depth = 0, double c_leaf = 0.24, double c_r = 0.01);

  double alpha() const { return alpha_; }
  int depth() const { return depth_; }
  double c_leaf() const { return c_leaf_; }
  double c_r() const { return c_r_; }

  const std::map<CodeContext, CodeCounts>& code_counts() const { return code_counts_; }
  const std::map<int, std::uint64_t>& type_counts() const { return type_counts_; }

  void add_code(CodeContext context, int code, std::uint64_t count = 1);
  void add_type(int type_id, std::uint64_t count = 1);

  // P(code | context) for code 0..255; entry 0 is always 0.
  std::array<double, 256> code_distribution(CodeContext context) const;
  double code_probability(CodeContext context, int code) const;

  // Types that can be sampled: every site type of the vocabulary plus any
  // other id seen while fitting, ascending.
  std::vector<int> type_support() const;
  // 0 for ids outside type_support().
  double type_probability(int type_id) const;

  // Grid with the model's depth and resolution, origin at 0.
  GridSpec grid() const;

 private:
  double alpha_;
  int depth_;
  double c_leaf_;
  double c_r_;
  std::map<CodeContext, CodeCounts> code_counts_;
  std::map<int, std::uint64_t> type_counts_;
  std::uint64_t type_total_ = 0;
};

// Context of every Code token of a well-formed sequence, in sequence order.
// Throws like decode() on malformed input.
std::vector<CodeContext> code_contexts(const TokenSequence& sequence);

// Counts codes per context and atom types over the corpus. Throws
// InvalidInput when the sequences disagree on depth or resolution.
CodeModel fit(std::span<const TokenSequence> corpus, double alpha = 1.0);

// Below this temperature sampling is greedy: the most probable value, lowest
// on ties.
inline constexpr double kGreedyTemperature = 1e-6;

// Draws from p^(1/T) renormalized over entries with p > 0, using one uniform
// from `rng`. Exposed for tests.
std::size_t draw_tempered(std::span<const double> probabilities, double temperature,
                          std::uint64_t random_bits);

// Generates one MNTP sequence (single frame, index 0) by walking the
// frontier: each step places a Mask at the next frontier cell, then draws its
// content. Atom offsets are uniform. Throws InvalidInput if temperature <= 0
// or the model's depth disagrees with the grid.
TokenSequence sample(const CodeModel& model, const GridSpec& spec, std::uint64_t seed,
                     double temperature = 1.0);

struct SampleScore {
  double total_logprob = 0;
  // One entry per Code/Atom token. An atom's entry covers its type and its
  // three offsets.
  std::vector<double> per_token;
};

SampleScore score(const CodeModel& model, const TokenSequence& sequence);

// Top-r by total log-probability, descending; ties broken by ascending
// serialized bytes.
std::vector<TokenSequence> rank(std::span<const TokenSequence> samples, const CodeModel& model,
                                std::size_t r);

inline constexpr std::string_view kModelSchema = "octok-model/1";

// Versioned JSON; counts stored sparsely as [index, count] pairs.
std::string write_model_json(const CodeModel& model);
// Throws ParseError on malformed documents.
CodeModel read_model_json(std::string_view text);

}  // namespace octok

#endif  // OCTOK_SAMPLER_HPP_
