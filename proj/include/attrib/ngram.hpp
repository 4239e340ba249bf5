// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace attrib {

// Log-probability of one continuation character.
struct CharLogprob {
  char32_t symbol;
  double logprob;
};

// Character-level n-gram model with additive smoothing.
//
// A model of order n conditions each character on the previous n - 1
// characters. Training counts full-length windows inside each text only;
// no window spans two texts. Probabilities are natural-log:
//
//   ln((count(ctx, s) + alpha) / (count(ctx) + alpha * |vocab|))
//
// A symbol outside the vocabulary is scored as if the vocabulary were
// extended by that one symbol, which keeps every query finite.
class NgramModel {
 public:
  static NgramModel train(std::span<const std::string> texts, int order, double alpha);

  // Copy of this model with `text` added as one more training text.
  NgramModel ingest(std::string_view text) const;

  // `context` may be longer than order - 1; only its tail is used.
  double char_logprob(std::u32string_view context, char32_t symbol) const;

  // Sum of char_logprob over the continuation, each factor conditioned on
  // the characters of prefix + continuation that precede it.
  double sequence_logprob(std::string_view prefix, std::string_view continuation) const;

  // Per-character factors of sequence_logprob.
  std::vector<CharLogprob> continuation_logprobs(std::string_view prefix,
                                                 std::string_view continuation) const;

  int order() const noexcept { return order_; }
  double alpha() const noexcept { return alpha_; }
  const std::set<char32_t>& vocab() const noexcept { return vocab_; }

  std::uint64_t context_count(std::u32string_view context) const;
  std::uint64_t transition_count(std::u32string_view context, char32_t symbol) const;

  // {"order", "alpha", "vocab": [sorted], "counts": {ctx: {sym: n}}}
  nlohmann::json to_json() const;
  static NgramModel from_json(const nlohmann::json& dump);

  bool operator==(const NgramModel& other) const;

 private:
  struct ContextStats {
    std::uint64_t total = 0;
    std::unordered_map<char32_t, std::uint64_t> next;
    bool operator==(const ContextStats&) const = default;
  };

  NgramModel(int order, double alpha) : order_(order), alpha_(alpha) {}

  void add_text(std::u32string_view text);
  double logprob_given(const ContextStats* stats, char32_t symbol) const;

  int order_ = 1;
  double alpha_ = 0.5;
  std::set<char32_t> vocab_;
  std::unordered_map<std::u32string, ContextStats> contexts_;
};

}  // namespace attrib
