// Copyright 2026 The octok Authors
// SPDX-License-Identifier: Apache-2.0

#include "octok/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "json.hpp"
#include "octok/error.hpp"
#include "octok/token_io.hpp"
#include "octok/vocab.hpp"

namespace octok {
namespace {

using nlohmann::json;

constexpr int kCodeSupport = 255;

double uniform01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

Token positioned(TokenKind kind, int t, Offset e, int level, Vec3 c) {
  Token token;
  token.kind = kind;
  token.t = t;
  token.e = e;
  token.level = level;
  token.frame = 0;
  token.c = c;
  return token;
}

}  // namespace

CodeModel::CodeModel(double alpha, int depth, double c_leaf, double c_r)
    : alpha_(alpha), depth_(depth), c_leaf_(c_leaf), c_r_(c_r) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidInput, "smoothing alpha must be positive");
  }
  if (depth != 0) GridSpec({0, 0, 0}, depth, c_leaf, c_r);  // validates
}

void CodeModel::add_code(CodeContext context, int code, std::uint64_t count) {
  if (code < 1 || code > 255) throw Error(ErrorCode::kInvalidCode, "code outside [1, 255]");
  auto [it, inserted] = code_counts_.try_emplace(context);
  if (inserted) it->second.fill(0);
  it->second[static_cast<std::size_t>(code)] += count;
}

void CodeModel::add_type(int type_id, std::uint64_t count) {
  type_counts_[type_id] += count;
  type_total_ += count;
}

std::array<double, 256> CodeModel::code_distribution(CodeContext context) const {
  std::array<double, 256> p{};
  const auto it = code_counts_.find(context);
  std::uint64_t total = 0;
  if (it != code_counts_.end()) {
    total = std::accumulate(it->second.begin(), it->second.end(), std::uint64_t{0});
  }
  const double denominator = static_cast<double>(total) + kCodeSupport * alpha_;
  for (int v = 1; v <= 255; ++v) {
    const double n = it == code_counts_.end() ? 0.0 : static_cast<double>(it->second[v]);
    p[static_cast<std::size_t>(v)] = (n + alpha_) / denominator;
  }
  return p;
}

double CodeModel::code_probability(CodeContext context, int code) const {
  if (code < 1 || code > 255) return 0.0;
  return code_distribution(context)[static_cast<std::size_t>(code)];
}

std::vector<int> CodeModel::type_support() const {
  std::vector<int> support;
  for (int id = vocab::kFirstElement; id <= vocab::kOccupied; ++id) support.push_back(id);
  for (const auto& [id, count] : type_counts_) {
    if (!vocab::is_site_type(id)) support.push_back(id);
  }
  std::sort(support.begin(), support.end());
  return support;
}

double CodeModel::type_probability(int type_id) const {
  const auto it = type_counts_.find(type_id);
  if (!vocab::is_site_type(type_id) && it == type_counts_.end()) return 0.0;
  std::size_t extra = 0;
  for (const auto& [id, count] : type_counts_) extra += vocab::is_site_type(id) ? 0 : 1;
  const double support = static_cast<double>(vocab::kOccupied - vocab::kFirstElement + 1 + extra);
  const double n = it == type_counts_.end() ? 0.0 : static_cast<double>(it->second);
  return (n + alpha_) / (static_cast<double>(type_total_) + support * alpha_);
}

GridSpec CodeModel::grid() const {
  if (depth_ == 0) throw Error(ErrorCode::kInvalidInput, "model is not tied to a grid depth");
  return GridSpec({0, 0, 0}, depth_, c_leaf_, c_r_);
}

std::vector<CodeContext> code_contexts(const TokenSequence& sequence) {
  decode(sequence);  // validates structure; the walk below trusts it
  const int depth = sequence.spec.depth();
  std::vector<CodeContext> contexts;
  std::vector<int> frontier;
  std::vector<int> next;
  int level = 0;
  std::size_t remaining = 0;
  int frame = -1;
  for (const Token& token : sequence.tokens) {
    if (token.kind != TokenKind::kCode && token.kind != TokenKind::kAtom) continue;
    if (token.frame != frame) {
      frame = token.frame;
      frontier.assign(1, 0);
      next.clear();
      level = 0;
      remaining = 1;
    }
    if (token.kind == TokenKind::kAtom) continue;
    contexts.push_back({level, frontier[frontier.size() - remaining]});
    next.insert(next.end(), static_cast<std::size_t>(std::popcount(static_cast<unsigned>(token.t))),
                token.t);
    if (--remaining == 0 && level + 1 < depth - 1) {
      std::swap(frontier, next);
      next.clear();
      remaining = frontier.size();
      ++level;
    }
  }
  return contexts;
}

CodeModel fit(std::span<const TokenSequence> corpus, double alpha) {
  if (corpus.empty()) return CodeModel(alpha);
  const GridSpec& first = corpus.front().spec;
  CodeModel model(alpha, first.depth(), first.c_leaf(), first.c_r());
  for (const TokenSequence& sequence : corpus) {
    const GridSpec& spec = sequence.spec;
    if (spec.depth() != first.depth() || spec.n_p() != first.n_p() ||
        std::abs(spec.c_leaf() - first.c_leaf()) > 1e-9) {
      throw Error(ErrorCode::kInvalidInput, "corpus mixes grid depths or resolutions");
    }
    const std::vector<CodeContext> contexts = code_contexts(sequence);
    std::size_t k = 0;
    for (const Token& token : sequence.tokens) {
      if (token.kind == TokenKind::kCode) {
        model.add_code(contexts[k++], token.t);
      } else if (token.kind == TokenKind::kAtom) {
        model.add_type(token.t);
      }
    }
  }
  return model;
}

std::size_t draw_tempered(std::span<const double> probabilities, double temperature,
                          std::uint64_t random_bits) {
  if (!(temperature > 0.0)) throw Error(ErrorCode::kInvalidInput, "temperature must be > 0");
  std::size_t best = probabilities.size();
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] > 0.0 && (best == probabilities.size() || probabilities[i] > probabilities[best])) {
      best = i;
    }
  }
  if (best == probabilities.size()) throw Error(ErrorCode::kInvalidInput, "empty support");
  if (temperature <= kGreedyTemperature) return best;

  const double top = std::log(probabilities[best]) / temperature;
  std::vector<double> weights(probabilities.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    weights[i] = std::exp(std::log(probabilities[i]) / temperature - top);
    total += weights[i];
  }
  double u = uniform01(random_bits) * total;
  std::size_t last = best;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last = i;
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return last;
}

TokenSequence sample(const CodeModel& model, const GridSpec& spec, std::uint64_t seed,
                     double temperature) {
  if (!(temperature > 0.0)) throw Error(ErrorCode::kInvalidInput, "temperature must be > 0");
  if (model.depth() != 0 && model.depth() != spec.depth()) {
    throw Error(ErrorCode::kInvalidInput, "model depth differs from the grid depth");
  }
  std::mt19937_64 rng(seed);
  TokenSequence out{spec, {}, true};
  const Offset neutral = spec.default_offset();
  const Vec3 root_center = cell_center(spec, 0, {});
  out.tokens.push_back(positioned(TokenKind::kBos, vocab::kBos, neutral, 0, root_center));

  struct Pending {
    Cell cell;
    int parent_code;
  };
  std::vector<Pending> frontier{{Cell{}, 0}};
  std::vector<Pending> next;
  for (int level = 0; level < spec.leaf_level(); ++level) {
    next.clear();
    for (const Pending& pending : frontier) {
      const Vec3 center = cell_center(spec, level, pending.cell);
      out.tokens.push_back(positioned(TokenKind::kMask, vocab::kMask, neutral, level, center));
      const auto p = model.code_distribution({level, pending.parent_code});
      const int code = static_cast<int>(draw_tempered(p, temperature, rng()));
      out.tokens.push_back(positioned(TokenKind::kCode, code, neutral, level, center));
      for (const Cell& child : children_from_code(pending.cell, code)) {
        next.push_back({child, code});
      }
    }
    std::swap(frontier, next);
  }

  const std::vector<int> support = model.type_support();
  std::vector<double> type_p(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) type_p[i] = model.type_probability(support[i]);
  const int leaf_level = spec.leaf_level();
  for (const Pending& pending : frontier) {
    out.tokens.push_back(positioned(TokenKind::kMask, vocab::kMask, neutral, leaf_level,
                                    cell_center(spec, leaf_level, pending.cell)));
    const int type_id = support[draw_tempered(type_p, temperature, rng())];
    std::array<std::uint32_t, 3> e{};
    for (auto& component : e) {
      component = std::min(static_cast<std::uint32_t>(uniform01(rng()) * spec.n_p()),
                           spec.n_p() - 1);
    }
    const Offset offset{e[0], e[1], e[2]};
    out.tokens.push_back(positioned(TokenKind::kAtom, type_id, offset, leaf_level,
                                    dequantize_offset(spec, pending.cell, offset)));
  }
  out.tokens.push_back(positioned(TokenKind::kEos, vocab::kEos, neutral, 0, root_center));
  return out;
}

SampleScore score(const CodeModel& model, const TokenSequence& sequence) {
  if (model.depth() != 0 && model.depth() != sequence.spec.depth()) {
    throw Error(ErrorCode::kInvalidInput, "sequence depth differs from the model depth");
  }
  const std::vector<CodeContext> contexts = code_contexts(sequence);
  const double offset_logprob = -3.0 * std::log(static_cast<double>(sequence.spec.n_p()));
  SampleScore result;
  std::size_t k = 0;
  for (const Token& token : sequence.tokens) {
    double logprob = 0.0;
    if (token.kind == TokenKind::kCode) {
      logprob = std::log(model.code_probability(contexts[k++], token.t));
    } else if (token.kind == TokenKind::kAtom) {
      const double p = model.type_probability(token.t);
      if (p <= 0.0) {
        throw Error(ErrorCode::kInvalidInput,
                    "site type " + std::to_string(token.t) + " is outside the model vocabulary");
      }
      logprob = std::log(p) + offset_logprob;
    } else {
      continue;
    }
    result.per_token.push_back(logprob);
  }
  result.total_logprob = std::accumulate(result.per_token.begin(), result.per_token.end(), 0.0);
  return result;
}

std::vector<TokenSequence> rank(std::span<const TokenSequence> samples, const CodeModel& model,
                                std::size_t r) {
  struct Scored {
    double total;
    std::string bytes;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    scored.push_back({score(model, samples[i]).total_logprob, write_jsonl(samples[i]), i});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.bytes < b.bytes;
  });
  std::vector<TokenSequence> top;
  for (std::size_t i = 0; i < std::min(r, scored.size()); ++i) {
    top.push_back(samples[scored[i].index]);
  }
  return top;
}

std::string write_model_json(const CodeModel& model) {
  json codes = json::array();
  for (const auto& [context, counts] : model.code_counts()) {
    json pairs = json::array();
    for (std::size_t v = 0; v < counts.size(); ++v) {
      if (counts[v] != 0) pairs.push_back({v, counts[v]});
    }
    codes.push_back({{"level", context.level}, {"parent", context.parent_code}, {"counts", pairs}});
  }
  json types = json::array();
  for (const auto& [id, count] : model.type_counts()) types.push_back({id, count});
  json doc = {{"schema", kModelSchema},  {"alpha", model.alpha()},
              {"L", model.depth()},      {"c_leaf", model.c_leaf()},
              {"c_r", model.c_r()},      {"code_counts", codes},
              {"type_counts", types}};
  return doc.dump(1) + "\n";
}

CodeModel read_model_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("schema").get<std::string>() != kModelSchema) {
      throw Error(ErrorCode::kParseError, "unsupported model schema");
    }
    CodeModel model(doc.at("alpha").get<double>(), doc.at("L").get<int>(),
                    doc.at("c_leaf").get<double>(), doc.at("c_r").get<double>());
    for (const json& entry : doc.at("code_counts")) {
      const CodeContext context{entry.at("level").get<int>(), entry.at("parent").get<int>()};
      for (const json& pair : entry.at("counts")) {
        const int code = pair.at(0).get<int>();
        model.add_code(context, code, pair.at(1).get<std::uint64_t>());
      }
    }
    for (const json& pair : doc.at("type_counts")) {
      const int id = pair.at(0).get<int>();
      model.add_type(id, pair.at(1).get<std::uint64_t>());
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("model JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    throw Error(ErrorCode::kParseError, std::string("model JSON: ") + e.what());
  }
}

}  // namespace octok
