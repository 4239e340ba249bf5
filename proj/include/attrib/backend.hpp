// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "attrib/ngram.hpp"

namespace attrib {

struct TokenLogprob {
  std::string text;
  double logprob = 0.0;
};

// Log-probability of a continuation given a prompt.
struct ScoredContinuation {
  double total_logprob = 0.0;
  // Empty for backends that only report totals.
  std::vector<TokenLogprob> token_logprobs;
  std::size_t token_count = 0;
  // Set when a token crossing the prompt/continuation boundary was dropped.
  bool straddle = false;
  std::vector<std::string> warnings;
};

// Scores continuations under some language model.
//
// Implementations must be safe for concurrent score() calls.
class ScoringBackend {
 public:
  virtual ~ScoringBackend() = default;

  virtual std::string name() const = 0;

  // Limit on prompt + continuation length in characters, if any.
  virtual std::optional<std::size_t> max_prompt_chars() const { return std::nullopt; }

  // Validates the request and returns ln P(continuation | prompt).
  ScoredContinuation score(std::string_view prompt, std::string_view continuation) const;

  // As score(), for callers that know which candidate the prompt belongs to.
  // Backends that key their results by candidate override do_score_candidate.
  ScoredContinuation score_candidate(std::size_t candidate_index, std::string_view prompt,
                                     std::string_view continuation) const;

 protected:
  virtual ScoredContinuation do_score(std::string_view prompt,
                                      std::string_view continuation) const = 0;

  virtual ScoredContinuation do_score_candidate(std::size_t /*candidate_index*/,
                                                std::string_view prompt,
                                                std::string_view continuation) const {
    return do_score(prompt, continuation);
  }

 private:
  void validate(std::string_view prompt, std::string_view continuation) const;
};

// Ingests the prompt into a copy of base_model, then scores the
// continuation after the prompt. base_model is not modified.
ScoredContinuation adaptive_score(const NgramModel& base_model, std::string_view prompt,
                                  std::string_view continuation);

// Per-character breakdown of a continuation under a fixed model.
ScoredContinuation ngram_score(const NgramModel& model, std::string_view prompt,
                               std::string_view continuation);

// n-gram scoring. In adaptive mode the prompt is first ingested into a
// copy of the base model, the analog of in-context conditioning; otherwise
// the base model scores the continuation directly.
class NgramBackend final : public ScoringBackend {
 public:
  NgramBackend(NgramModel base, bool adaptive = true) : base_(std::move(base)), adaptive_(adaptive) {}

  // Base model trained on `order` spaces, so it carries no style of its own.
  static NgramBackend neutral(int order, double alpha);

  std::string name() const override { return adaptive_ ? "ngram-adaptive" : "ngram"; }
  const NgramModel& base() const noexcept { return base_; }

 protected:
  ScoredContinuation do_score(std::string_view prompt, std::string_view continuation) const override;

 private:
  NgramModel base_;
  bool adaptive_;
};

// Fixed-table backend for replay tests. Lookups are exact; a missing key is
// an error, never a default.
class MockBackend final : public ScoringBackend {
 public:
  MockBackend() = default;

  // JSON object mapping "<candidate_index>" to a total log-probability.
  static MockBackend from_file(const std::filesystem::path& path);
  static MockBackend from_json(const nlohmann::json& table);

  void set(std::string prompt, std::string continuation, double total_logprob);
  void set_candidate(std::size_t candidate_index, double total_logprob);

  std::string name() const override { return "mock"; }

 protected:
  ScoredContinuation do_score(std::string_view prompt, std::string_view continuation) const override;
  ScoredContinuation do_score_candidate(std::size_t candidate_index, std::string_view prompt,
                                        std::string_view continuation) const override;

 private:
  std::map<std::pair<std::string, std::string>, double> by_text_;
  std::map<std::size_t, double> by_candidate_;
};

// Forwards to another backend and counts calls.
class CountingBackend final : public ScoringBackend {
 public:
  explicit CountingBackend(const ScoringBackend& inner) : inner_(inner) {}

  std::string name() const override { return inner_.name(); }
  std::optional<std::size_t> max_prompt_chars() const override { return inner_.max_prompt_chars(); }

  std::size_t calls() const noexcept { return calls_.load(); }
  void reset() noexcept { calls_ = 0; }

 protected:
  ScoredContinuation do_score(std::string_view prompt, std::string_view continuation) const override;
  ScoredContinuation do_score_candidate(std::size_t candidate_index, std::string_view prompt,
                                        std::string_view continuation) const override;

 private:
  const ScoringBackend& inner_;
  mutable std::atomic<std::size_t> calls_{0};
};

}  // namespace attrib
