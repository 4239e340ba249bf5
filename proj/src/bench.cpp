// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <sstream>
#include <thread>

#include "attrib/bayes.hpp"

namespace attrib {

using nlohmann::json;

bool CandidateFilter::accepts(const Document& doc) const {
  auto it = doc.meta.find(key);
  return it != doc.meta.end() && allowed.contains(it->second);
}

void BenchConfig::validate() const {
  if (num_candidates < 2) throw InputError("number of candidates must be at least 2");
  if (shots < 1) throw InputError("shots must be at least 1");
  if (num_tests < 1) throw InputError("number of tests must be at least 1");
  if (jobs < 1) throw InputError("jobs must be at least 1");
}

namespace {

std::string join_failures(const std::vector<std::pair<std::size_t, std::string>>& failures) {
  std::ostringstream out;
  out << failures.size() << " trial(s) failed";
  for (const auto& [index, message] : failures) out << "\n  trial " << index << ": " << message;
  return out.str();
}

}  // namespace

BenchError::BenchError(std::vector<std::pair<std::size_t, std::string>> failures,
                       bool backend_failure)
    : Error(join_failures(failures)),
      failures_(std::move(failures)),
      backend_failure_(backend_failure) {}

TrialError::TrialError(std::size_t candidate_index, const BackendError& cause)
    : BackendError(cause.kind(),
                   "candidate " + std::to_string(candidate_index) + ": " + cause.what()),
      candidate_index_(candidate_index) {}

Trial build_trial(const Corpus& corpus, const BenchConfig& config, Rng& rng) {
  config.validate();

  // Eligible documents per author, in corpus order.
  std::vector<std::string> pool;
  std::vector<std::vector<std::size_t>> pool_docs;
  std::size_t qualified = 0;
  for (const std::string& author : corpus.authors()) {
    std::vector<std::size_t> docs;
    for (std::size_t d : corpus.docs_of(author)) {
      if (!config.candidate_filter || config.candidate_filter->accepts(corpus.documents()[d])) {
        docs.push_back(d);
      }
    }
    if (docs.empty()) continue;
    if (docs.size() >= config.shots + 1) ++qualified;
    pool.push_back(author);
    pool_docs.push_back(std::move(docs));
  }
  if (qualified < config.num_candidates) {
    throw InputError("insufficient eligible authors: " + std::to_string(qualified) +
                     " have at least " + std::to_string(config.shots + 1) + " documents, " +
                     std::to_string(config.num_candidates) + " candidates requested");
  }

  // Step 1: uniform candidate set; redrawn whole when a member lacks documents.
  std::vector<std::size_t> chosen;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxCandidateDraws) {
      throw InputError("no candidate set with " + std::to_string(config.shots + 1) +
                       " documents per author after " + std::to_string(kMaxCandidateDraws) +
                       " draws");
    }
    chosen = rng.sample_without_replacement(pool.size(), config.num_candidates);
    bool ok = true;
    for (std::size_t c : chosen) ok = ok && pool_docs[c].size() >= config.shots + 1;
    if (ok) break;
  }

  Trial trial;
  // Step 2: example documents per candidate.
  std::vector<std::vector<std::size_t>> picks;
  for (std::size_t c : chosen) {
    trial.candidate_authors.push_back(pool[c]);
    const auto& docs = pool_docs[c];
    auto pick = rng.sample_without_replacement(docs.size(), docs.size());
    std::vector<Document> examples;
    for (std::size_t s = 0; s < config.shots; ++s) examples.push_back(corpus.documents()[docs[pick[s]]]);
    trial.example_docs.push_back(std::move(examples));
    picks.push_back(std::move(pick));
  }

  // Steps 3-4: test author, then one of their documents outside the examples.
  trial.true_candidate_index = rng.uniform_index(config.num_candidates);
  const auto& docs = pool_docs[chosen[trial.true_candidate_index]];
  const auto& pick = picks[trial.true_candidate_index];
  const std::size_t remaining = docs.size() - config.shots;
  trial.query_doc = corpus.documents()[docs[pick[config.shots + rng.uniform_index(remaining)]]];
  return trial;
}

Trial build_indexed_trial(const Corpus& corpus, const BenchConfig& config, std::size_t trial_index) {
  const std::uint64_t trial_seed = derive_seed(config.seed, trial_index);
  Rng rng(trial_seed);
  Trial trial = build_trial(corpus, config, rng);
  trial.trial_index = trial_index;
  trial.trial_seed = trial_seed;
  return trial;
}

TrialOutcome run_trial(const Trial& trial, const ScoringBackend& backend,
                       const PromptTemplate& tmpl, std::optional<std::size_t> max_example_chars) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = trial.candidate_authors.size();
  if (n == 0 || trial.example_docs.size() != n || trial.true_candidate_index >= n) {
    throw InputError("malformed trial");
  }

  TrialOutcome outcome;
  outcome.trial = trial;
  std::vector<CandidateScore> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> examples;
    for (const Document& d : trial.example_docs[i]) examples.push_back(d.text);
    const Prompt prompt = build_prompt(examples, tmpl, max_example_chars);
    ScoredContinuation scored;
    try {
      scored = backend.score_candidate(i, prompt.full_prefix, trial.query_doc.text);
    } catch (const BackendError& e) {
      throw TrialError(i, e);
    }
    scores[i] = {i, trial.candidate_authors[i], scored.total_logprob, scored.straddle};
    outcome.log_evidence.push_back(scored.total_logprob);
    outcome.straddle.push_back(scored.straddle);
  }
  outcome.true_rank = rank_of(posterior(scores), trial.true_candidate_index);
  outcome.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return outcome;
}

std::vector<TrialOutcome> run_benchmark(const Corpus& corpus, const BenchConfig& config,
                                        const ScoringBackend& backend, const PromptTemplate& tmpl) {
  config.validate();
  std::vector<std::optional<TrialOutcome>> slots(config.num_tests);
  std::vector<std::pair<std::size_t, std::string>> failures;
  std::mutex failures_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> backend_failure{false};

  auto worker = [&] {
    for (std::size_t i = next++; i < config.num_tests; i = next++) {
      try {
        slots[i] = run_trial(build_indexed_trial(corpus, config, i), backend, tmpl,
                             config.max_example_chars);
      } catch (const BackendError& e) {
        backend_failure = true;
        std::lock_guard lock(failures_mutex);
        failures.emplace_back(i, e.what());
      } catch (const std::exception& e) {
        std::lock_guard lock(failures_mutex);
        failures.emplace_back(i, e.what());
      }
    }
  };

  const std::size_t threads = std::min(config.jobs, config.num_tests);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    throw BenchError(std::move(failures), backend_failure);
  }
  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(slots.size());
  for (auto& slot : slots) outcomes.push_back(std::move(*slot));
  return outcomes;
}

json outcome_to_json(const TrialOutcome& outcome) {
  const Trial& t = outcome.trial;
  json examples = json::array();
  for (const auto& docs : t.example_docs) {
    json ids = json::array();
    for (const Document& d : docs) ids.push_back(d.doc_id);
    examples.push_back(std::move(ids));
  }
  return {
      {"trial_index", t.trial_index},
      {"trial_seed", t.trial_seed},
      {"candidates", t.candidate_authors},
      {"example_doc_ids", std::move(examples)},
      {"true_candidate_index", t.true_candidate_index},
      {"query_doc_id", t.query_doc.doc_id},
      {"query_meta", t.query_doc.meta},
      {"log_evidence", outcome.log_evidence},
      {"straddle", outcome.straddle},
      {"true_rank", outcome.true_rank},
      {"wall_time_ms", outcome.wall_time_ms},
  };
}

TrialOutcome outcome_from_json(const json& record) {
  TrialOutcome outcome;
  Trial& t = outcome.trial;
  t.trial_index = record.at("trial_index").get<std::size_t>();
  t.trial_seed = record.at("trial_seed").get<std::uint64_t>();
  t.candidate_authors = record.at("candidates").get<std::vector<std::string>>();
  for (const auto& ids : record.at("example_doc_ids")) {
    std::vector<Document> docs;
    for (const auto& id : ids) {
      Document d;
      d.doc_id = id.get<std::string>();
      docs.push_back(std::move(d));
    }
    t.example_docs.push_back(std::move(docs));
  }
  t.true_candidate_index = record.at("true_candidate_index").get<std::size_t>();
  t.query_doc.doc_id = record.at("query_doc_id").get<std::string>();
  t.query_doc.meta = record.at("query_meta").get<std::map<std::string, std::string>>();
  outcome.log_evidence = record.at("log_evidence").get<std::vector<double>>();
  if (auto it = record.find("straddle"); it != record.end()) {
    outcome.straddle = it->get<std::vector<bool>>();
  }
  outcome.true_rank = record.at("true_rank").get<std::size_t>();
  outcome.wall_time_ms = record.value("wall_time_ms", 0.0);

  const std::size_t n = t.candidate_authors.size();
  if (n == 0 || t.true_candidate_index >= n) throw InputError("true_candidate_index out of range");
  if (t.example_docs.size() != n || outcome.log_evidence.size() != n) {
    throw InputError("candidate list lengths disagree");
  }
  if (outcome.true_rank < 1 || outcome.true_rank > n) throw InputError("true_rank out of range");
  if (!t.candidate_authors.empty()) t.query_doc.author_id = t.candidate_authors[t.true_candidate_index];
  return outcome;
}

std::string outcomes_to_jsonl(const std::vector<TrialOutcome>& outcomes, bool include_timing) {
  std::string out;
  for (const TrialOutcome& o : outcomes) {
    json record = outcome_to_json(o);
    if (!include_timing) record.erase("wall_time_ms");
    out += record.dump();
    out += '\n';
  }
  return out;
}

std::vector<TrialOutcome> parse_outcome_log(std::string_view jsonl) {
  std::vector<TrialOutcome> outcomes;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view text = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      outcomes.push_back(outcome_from_json(json::parse(text)));
    } catch (const json::exception& e) {
      throw ParseError(line, std::string("malformed outcome record: ") + e.what());
    } catch (const InputError& e) {
      throw ParseError(line, e.what());
    }
  }
  return outcomes;
}

}  // namespace attrib
