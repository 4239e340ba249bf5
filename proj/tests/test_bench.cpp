// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include <doctest.h>

#include <set>

#include "attrib/bench.hpp"
#include "attrib/synth.hpp"

using namespace attrib;

namespace {

Corpus small_corpus(std::size_t authors, std::size_t docs_each) {
  std::vector<Document> docs;
  for (std::size_t a = 0; a < authors; ++a) {
    for (std::size_t d = 0; d < docs_each; ++d) {
      Document doc;
      doc.author_id = "a" + std::to_string(a);
      doc.doc_id = doc.author_id + "-" + std::to_string(d);
      doc.text = "text " + doc.doc_id;
      doc.meta["gender"] = a % 2 ? "female" : "male";
      docs.push_back(doc);
    }
  }
  return Corpus(docs);
}

Corpus markov(std::size_t authors) {
  synth::SynthConfig cfg;
  cfg.num_authors = authors;
  cfg.docs_per_author = 6;
  cfg.doc_chars = 200;
  return Corpus(synth::markov_style_corpus(cfg));
}

void check_trial_invariants(const Trial& t, const BenchConfig& config) {
  REQUIRE(t.candidate_authors.size() == config.num_candidates);
  CHECK(std::set(t.candidate_authors.begin(), t.candidate_authors.end()).size() ==
        config.num_candidates);
  REQUIRE(t.example_docs.size() == config.num_candidates);
  for (std::size_t i = 0; i < t.example_docs.size(); ++i) {
    CHECK(t.example_docs[i].size() == config.shots);
    std::set<std::string> ids;
    for (const auto& d : t.example_docs[i]) {
      CHECK(d.author_id == t.candidate_authors[i]);
      ids.insert(d.doc_id);
    }
    CHECK(ids.size() == config.shots);
  }
  CHECK(t.query_doc.author_id == t.candidate_authors[t.true_candidate_index]);
  for (const auto& d : t.example_docs[t.true_candidate_index]) CHECK(d.doc_id != t.query_doc.doc_id);
}

}  // namespace

TEST_CASE("build_trial with exactly enough authors uses all of them") {
  const Corpus corpus = small_corpus(10, 2);
  BenchConfig config;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Trial t = build_trial(corpus, config, rng);
    check_trial_invariants(t, config);
    CHECK(std::set(t.candidate_authors.begin(), t.candidate_authors.end()).size() == 10);
  }
}

TEST_CASE("build_trial is deterministic") {
  const Corpus corpus = small_corpus(15, 5);
  BenchConfig config;
  config.shots = 2;
  Rng a(5), b(5);
  const Trial x = build_trial(corpus, config, a);
  const Trial y = build_trial(corpus, config, b);
  CHECK(x.candidate_authors == y.candidate_authors);
  CHECK(x.query_doc == y.query_doc);
  CHECK(x.true_candidate_index == y.true_candidate_index);
  check_trial_invariants(x, config);
}

TEST_CASE("build_trial preconditions") {
  BenchConfig config;
  Rng rng(1);
  CHECK_THROWS_WITH_AS(build_trial(small_corpus(5, 3), config, rng),
                       doctest::Contains("insufficient eligible authors"), InputError);
  // Authors with a single document cannot supply example and query.
  CHECK_THROWS_AS(build_trial(small_corpus(12, 1), config, rng), InputError);
  config.num_candidates = 1;
  CHECK_THROWS_AS(build_trial(small_corpus(12, 3), config, rng), InputError);
}

TEST_CASE("sparse authors are redrawn, then the draw gives up") {
  // 10 rich authors and 90 with one document each.
  std::vector<Document> docs = small_corpus(10, 2).documents();
  for (int a = 0; a < 90; ++a) {
    docs.push_back({"s" + std::to_string(a), "sparse" + std::to_string(a), "x", {}, nlohmann::json::object()});
  }
  const Corpus corpus(docs);
  BenchConfig config;
  config.num_candidates = 2;
  int built = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    try {
      check_trial_invariants(build_trial(corpus, config, rng), config);
      ++built;
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("draws") != std::string::npos);
    }
  }
  CHECK(built > 0);
  config.num_candidates = 10;
  Rng rng(0);
  CHECK_THROWS_AS(build_trial(corpus, config, rng), InputError);
}

TEST_CASE("candidate filter restricts the pool") {
  const Corpus corpus = small_corpus(30, 3);
  BenchConfig config;
  config.candidate_filter = CandidateFilter{"gender", {"female"}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Trial t = build_trial(corpus, config, rng);
    for (const auto& docs : t.example_docs) {
      for (const auto& d : docs) CHECK(d.meta.at("gender") == "female");
    }
    CHECK(t.query_doc.meta.at("gender") == "female");
  }
  config.candidate_filter = CandidateFilter{"gender", {"other"}};
  Rng rng(0);
  CHECK_THROWS_AS(build_trial(corpus, config, rng), InputError);
}

TEST_CASE("run_trial with a replay table") {
  Trial trial;
  trial.candidate_authors = {"author1", "author2"};
  trial.example_docs = {{Document{"e1", "author1", "ex1", {}, {}}},
                        {Document{"e2", "author2", "ex2", {}, {}}}};
  trial.true_candidate_index = 0;
  trial.query_doc = {"q", "author1", "query", {}, {}};

  MockBackend mock;
  mock.set_candidate(0, -958.41);
  mock.set_candidate(1, -964.51);
  const TrialOutcome out = run_trial(trial, mock, template_by_id(TemplateId::kP1));
  CHECK(out.true_rank == 1);
  CHECK(out.log_evidence == std::vector<double>{-958.41, -964.51});
  CHECK(out.wall_time_ms >= 0.0);

  SUBCASE("ties break toward lower indices") {
    Trial three = trial;
    three.candidate_authors.push_back("author3");
    three.example_docs.push_back({Document{"e3", "author3", "ex3", {}, {}}});
    three.true_candidate_index = 2;
    MockBackend flat;
    for (std::size_t i = 0; i < 3; ++i) flat.set_candidate(i, -7.0);
    CHECK(run_trial(three, flat, template_by_id(TemplateId::kP1)).true_rank == 3);
  }
  SUBCASE("backend failures name the candidate") {
    MockBackend partial;
    partial.set_candidate(0, -1.0);
    try {
      run_trial(trial, partial, template_by_id(TemplateId::kP1));
      FAIL("expected failure");
    } catch (const TrialError& e) {
      CHECK(e.candidate_index() == 1);
    }
  }
}

TEST_CASE("run_trial scores each candidate once with the built prompt") {
  const Corpus corpus = markov(12);
  BenchConfig config;
  const Trial t = build_indexed_trial(corpus, config, 3);
  const NgramBackend backend = NgramBackend::neutral(3, 0.5);
  CountingBackend counting(backend);
  const auto& tmpl = template_by_id(TemplateId::kP2);
  const TrialOutcome out = run_trial(t, counting, tmpl);
  CHECK(counting.calls() == config.num_candidates);
  for (std::size_t i = 0; i < config.num_candidates; ++i) {
    const std::vector<std::string> ex = {t.example_docs[i][0].text};
    CHECK(out.log_evidence[i] ==
          backend.score(build_prompt(ex, tmpl).full_prefix, t.query_doc.text).total_logprob);
  }
}

TEST_CASE("run_benchmark is reproducible and prefix-stable") {
  const Corpus corpus = markov(12);
  const NgramBackend backend = NgramBackend::neutral(3, 0.5);
  const auto& tmpl = template_by_id(TemplateId::kP1);
  BenchConfig config;
  config.num_tests = 20;
  config.seed = 99;
  const auto first = run_benchmark(corpus, config, backend, tmpl);
  const auto again = run_benchmark(corpus, config, backend, tmpl);
  CHECK(outcomes_to_jsonl(first, false) == outcomes_to_jsonl(again, false));

  config.jobs = 4;
  CHECK(outcomes_to_jsonl(run_benchmark(corpus, config, backend, tmpl), false) ==
        outcomes_to_jsonl(first, false));

  config.num_tests = 7;
  const auto prefix = run_benchmark(corpus, config, backend, tmpl);
  CHECK(outcomes_to_jsonl(prefix, false) ==
        outcomes_to_jsonl({first.begin(), first.begin() + 7}, false));

  config.num_tests = 0;
  CHECK_THROWS_AS(run_benchmark(corpus, config, backend, tmpl), InputError);
}

TEST_CASE("run_benchmark aggregates trial failures") {
  const Corpus corpus = markov(12);
  MockBackend empty;
  BenchConfig config;
  config.num_tests = 3;
  config.jobs = 2;
  try {
    run_benchmark(corpus, config, empty, template_by_id(TemplateId::kP1));
    FAIL("expected failures");
  } catch (const BenchError& e) {
    REQUIRE(e.failures().size() == 3);
    CHECK(e.failures()[0].first == 0);
    CHECK(e.failures()[2].first == 2);
    CHECK(e.backend_failure());
  }
}

TEST_CASE("outcome log round trip") {
  const Corpus corpus = markov(12);
  const NgramBackend backend = NgramBackend::neutral(2, 0.5);
  BenchConfig config;
  config.num_tests = 5;
  config.seed = 4;
  const auto outcomes = run_benchmark(corpus, config, backend, template_by_id(TemplateId::kP1));
  const std::string log = outcomes_to_jsonl(outcomes);
  const auto parsed = parse_outcome_log(log);
  REQUIRE(parsed.size() == outcomes.size());
  CHECK(outcomes_to_jsonl(parsed) == log);
  CHECK(parsed[0].trial.query_doc.meta == outcomes[0].trial.query_doc.meta);

  const std::string truncated = log.substr(0, log.size() - 20);
  try {
    parse_outcome_log(truncated);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
  auto bad = nlohmann::json::parse(log.substr(0, log.find('\n')));
  bad["true_rank"] = 99;
  CHECK_THROWS_AS(parse_outcome_log(bad.dump()), ParseError);
}
