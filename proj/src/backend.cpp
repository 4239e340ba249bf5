// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/backend.hpp"

#include <fstream>
#include <string>

#include "attrib/error.hpp"
#include "attrib/text.hpp"

namespace attrib {

void ScoringBackend::validate(std::string_view prompt, std::string_view continuation) const {
  if (continuation.empty()) throw InputError("continuation must be non-empty");
  if (auto limit = max_prompt_chars()) {
    const std::size_t required = text::length(prompt) + text::length(continuation);
    if (required > *limit) {
      throw BackendError(BackendError::Kind::kPromptOverflow,
                         name() + ": prompt overflow, required " + std::to_string(required) +
                             " characters, allowed " + std::to_string(*limit));
    }
  }
}

ScoredContinuation ScoringBackend::score(std::string_view prompt,
                                         std::string_view continuation) const {
  validate(prompt, continuation);
  return do_score(prompt, continuation);
}

ScoredContinuation ScoringBackend::score_candidate(std::size_t candidate_index,
                                                   std::string_view prompt,
                                                   std::string_view continuation) const {
  validate(prompt, continuation);
  return do_score_candidate(candidate_index, prompt, continuation);
}

ScoredContinuation ngram_score(const NgramModel& model, std::string_view prompt,
                               std::string_view continuation) {
  ScoredContinuation out;
  for (const CharLogprob& f : model.continuation_logprobs(prompt, continuation)) {
    out.total_logprob += f.logprob;
    out.token_logprobs.push_back({text::encode(f.symbol), f.logprob});
  }
  out.token_count = out.token_logprobs.size();
  return out;
}

ScoredContinuation adaptive_score(const NgramModel& base_model, std::string_view prompt,
                                  std::string_view continuation) {
  if (continuation.empty()) throw InputError("continuation must be non-empty");
  if (prompt.empty()) return ngram_score(base_model, prompt, continuation);
  return ngram_score(base_model.ingest(prompt), prompt, continuation);
}

NgramBackend NgramBackend::neutral(int order, double alpha) {
  const std::string background(order < 1 ? 1 : static_cast<std::size_t>(order), ' ');
  return NgramBackend(NgramModel::train(std::span(&background, 1), order, alpha));
}

ScoredContinuation NgramBackend::do_score(std::string_view prompt,
                                          std::string_view continuation) const {
  return adaptive_ ? adaptive_score(base_, prompt, continuation)
                   : ngram_score(base_, prompt, continuation);
}

MockBackend MockBackend::from_json(const nlohmann::json& table) {
  if (!table.is_object()) throw InputError("mock table must be a JSON object");
  MockBackend mock;
  for (const auto& [key, value] : table.items()) {
    std::size_t used = 0;
    unsigned long index = 0;
    try {
      index = std::stoul(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || key.empty() || key[0] == '-') {
      throw InputError("mock table key '" + key + "' is not a candidate index");
    }
    if (!value.is_number()) throw InputError("mock table value for '" + key + "' is not a number");
    mock.set_candidate(index, value.get<double>());
  }
  return mock;
}

MockBackend MockBackend::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mock table " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed mock table " + path.string() + ": " + e.what());
  }
}

void MockBackend::set(std::string prompt, std::string continuation, double total_logprob) {
  by_text_[{std::move(prompt), std::move(continuation)}] = total_logprob;
}

void MockBackend::set_candidate(std::size_t candidate_index, double total_logprob) {
  by_candidate_[candidate_index] = total_logprob;
}

ScoredContinuation MockBackend::do_score(std::string_view prompt,
                                         std::string_view continuation) const {
  auto it = by_text_.find({std::string(prompt), std::string(continuation)});
  if (it == by_text_.end()) {
    throw BackendError(BackendError::Kind::kMissingEntry, "mock: no entry for this prompt/continuation");
  }
  ScoredContinuation out;
  out.total_logprob = it->second;
  return out;
}

ScoredContinuation MockBackend::do_score_candidate(std::size_t candidate_index,
                                                   std::string_view prompt,
                                                   std::string_view continuation) const {
  if (by_candidate_.empty()) return do_score(prompt, continuation);
  auto it = by_candidate_.find(candidate_index);
  if (it == by_candidate_.end()) {
    throw BackendError(BackendError::Kind::kMissingEntry,
                       "mock: no entry for candidate " + std::to_string(candidate_index));
  }
  ScoredContinuation out;
  out.total_logprob = it->second;
  return out;
}

ScoredContinuation CountingBackend::do_score(std::string_view prompt,
                                             std::string_view continuation) const {
  ++calls_;
  return inner_.score(prompt, continuation);
}

ScoredContinuation CountingBackend::do_score_candidate(std::size_t candidate_index,
                                                       std::string_view prompt,
                                                       std::string_view continuation) const {
  ++calls_;
  return inner_.score_candidate(candidate_index, prompt, continuation);
}

}  // namespace attrib
