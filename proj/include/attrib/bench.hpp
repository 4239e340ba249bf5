// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "attrib/backend.hpp"
#include "attrib/corpus.hpp"
#include "attrib/error.hpp"
#include "attrib/prompting.hpp"
#include "attrib/rng.hpp"

namespace attrib {

// Restricts benchmark pools to documents whose metadata value for `key` is
// one of `allowed`.
struct CandidateFilter {
  std::string key;
  std::set<std::string> allowed;

  bool accepts(const Document& doc) const;
};

struct BenchConfig {
  std::size_t num_candidates = 10;
  std::size_t shots = 1;
  std::size_t num_tests = 100;
  std::uint64_t seed = 0;
  TemplateId template_id = TemplateId::kP1;
  std::optional<CandidateFilter> candidate_filter;
  std::optional<std::size_t> max_example_chars;
  // Worker threads for trial execution; results do not depend on it.
  std::size_t jobs = 1;

  void validate() const;
};

// Attempts at drawing a candidate set whose authors all have enough
// documents before build_trial gives up.
inline constexpr int kMaxCandidateDraws = 10;

struct Trial {
  std::size_t trial_index = 0;
  std::uint64_t trial_seed = 0;
  std::vector<std::string> candidate_authors;
  // example_docs[i] holds the shots documents of candidate i.
  std::vector<std::vector<Document>> example_docs;
  std::size_t true_candidate_index = 0;
  Document query_doc;
};

struct TrialOutcome {
  Trial trial;
  std::vector<double> log_evidence;
  std::vector<bool> straddle;
  std::size_t true_rank = 0;  // 1-based
  double wall_time_ms = 0.0;

  std::size_t num_candidates() const noexcept { return trial.candidate_authors.size(); }
};

// One line per failed trial: "trial <i>: <message>".
class BenchError : public Error {
 public:
  BenchError(std::vector<std::pair<std::size_t, std::string>> failures, bool backend_failure);

  // True when at least one trial failed inside the scoring backend.
  bool backend_failure() const noexcept { return backend_failure_; }

  const std::vector<std::pair<std::size_t, std::string>>& failures() const noexcept {
    return failures_;
  }

 private:
  std::vector<std::pair<std::size_t, std::string>> failures_;
  bool backend_failure_;
};

// Candidate scoring failure inside a trial.
class TrialError : public BackendError {
 public:
  TrialError(std::size_t candidate_index, const BackendError& cause);

  std::size_t candidate_index() const noexcept { return candidate_index_; }

 private:
  std::size_t candidate_index_;
};

// Draws candidates, their example documents, the test author and a query
// document. Deterministic given the random source state.
Trial build_trial(const Corpus& corpus, const BenchConfig& config, Rng& rng);

// The trial drawn by run_benchmark at `trial_index`.
Trial build_indexed_trial(const Corpus& corpus, const BenchConfig& config, std::size_t trial_index);

// Scores the query against every candidate, exactly one backend call each.
TrialOutcome run_trial(const Trial& trial, const ScoringBackend& backend,
                       const PromptTemplate& tmpl,
                       std::optional<std::size_t> max_example_chars = std::nullopt);

// num_tests trials, trial i drawn from its own stream derived from
// (seed, i). Outcomes are ordered by trial index for any number of jobs.
std::vector<TrialOutcome> run_benchmark(const Corpus& corpus, const BenchConfig& config,
                                        const ScoringBackend& backend, const PromptTemplate& tmpl);

// Outcome log record. Example texts are referenced by doc id only.
nlohmann::json outcome_to_json(const TrialOutcome& outcome);

// Inverse of outcome_to_json; reconstructed documents carry no text.
TrialOutcome outcome_from_json(const nlohmann::json& record);

std::string outcomes_to_jsonl(const std::vector<TrialOutcome>& outcomes, bool include_timing = true);

// Throws ParseError with the offending line number.
std::vector<TrialOutcome> parse_outcome_log(std::string_view jsonl);

}  // namespace attrib
