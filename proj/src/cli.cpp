// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "attrib/backend.hpp"
#include "attrib/bayes.hpp"
#include "attrib/bench.hpp"
#include "attrib/corpus.hpp"
#include "attrib/metrics.hpp"
#include "attrib/prompting.hpp"
#include "attrib/remote.hpp"
#include "attrib/synth.hpp"

namespace attrib::cli {
namespace {

using nlohmann::json;

struct BackendOptions {
  std::string kind = "ngram";
  std::string endpoint;
  std::string model;
  int order = 3;
  double alpha = 0.5;
  std::string mock_table;
  std::optional<std::size_t> max_prompt_chars;
};

struct CorpusOptions {
  std::string path;
  std::size_t min_doc_chars = 1;
};

struct OutputOptions {
  std::string format = "table";
  std::string group_by;
};

void add_backend_options(CLI::App& cmd, BackendOptions& o) {
  cmd.add_option("--backend", o.kind, "Scoring backend")
      ->check(CLI::IsMember({"ngram", "remote", "mock"}))
      ->capture_default_str();
  cmd.add_option("--endpoint", o.endpoint, "Completion server base URL (remote backend)");
  cmd.add_option("--model", o.model, "Served model name (remote backend)");
  cmd.add_option("--order", o.order, "n-gram order (ngram backend)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--alpha", o.alpha, "Additive smoothing mass (ngram backend)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--mock-table", o.mock_table, "JSON table of candidate log-probabilities");
  cmd.add_option("--max-prompt-chars", o.max_prompt_chars,
                 "Reject prompts longer than this many characters");
}

void add_corpus_options(CLI::App& cmd, CorpusOptions& o) {
  cmd.add_option("--corpus", o.path, "JSONL corpus")->required();
  cmd.add_option("--min-doc-chars", o.min_doc_chars, "Skip shorter documents")
      ->capture_default_str();
}

void add_output_options(CLI::App& cmd, OutputOptions& o) {
  cmd.add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  cmd.add_option("--group-by", o.group_by, "Break results down by a query metadata key");
}

std::unique_ptr<ScoringBackend> make_backend(const BackendOptions& o) {
  if (o.kind == "ngram") {
    return std::make_unique<NgramBackend>(NgramBackend::neutral(o.order, o.alpha));
  }
  if (o.kind == "mock") {
    if (o.mock_table.empty()) throw InputError("--backend mock requires --mock-table");
    return std::make_unique<MockBackend>(MockBackend::from_file(o.mock_table));
  }
  if (o.endpoint.empty() || o.model.empty()) {
    throw InputError("--backend remote requires --endpoint and --model");
  }
  RemoteConfig config;
  config.endpoint = o.endpoint;
  config.model = o.model;
  config.max_prompt_chars = o.max_prompt_chars;
  if (const char* key = std::getenv("ATTRIB_API_KEY"); key && *key) config.api_key = key;
  return std::make_unique<RemoteBackend>(std::move(config));
}

Corpus load(const CorpusOptions& o, std::ostream& err) {
  LoadedCorpus loaded = load_corpus(o.path, o.min_doc_chars);
  if (loaded.skipped > 0) {
    err << "skipped " << loaded.skipped << " document(s) shorter than " << o.min_doc_chars
        << " characters\n";
  }
  return std::move(loaded.corpus);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t generated = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "seed: " << generated << "\n";
  return generated;
}

std::optional<CandidateFilter> parse_filter(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw InputError("--filter expects KEY=VALUE[,VALUE...]");
  }
  CandidateFilter filter;
  filter.key = spec.substr(0, eq);
  std::stringstream values(spec.substr(eq + 1));
  for (std::string v; std::getline(values, v, ',');) {
    if (!v.empty()) filter.allowed.insert(v);
  }
  return filter;
}

MetricsReport build_report(std::span<const TrialOutcome> outcomes, const std::string& group_by) {
  if (group_by.empty()) return make_report(outcomes);
  const auto bins = default_bins(group_by);
  return bins.empty() ? group_report_by_value(outcomes, group_by)
                      : group_report(outcomes, group_by, bins);
}

void print_report(const MetricsReport& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << to_json(report).dump(2) << '\n';
  } else {
    out << to_table(report);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << contents;
  if (!out) throw InputError("write failure on " + path);
}

// --- attribute -------------------------------------------------------------

struct AttributeOptions {
  CorpusOptions corpus;
  BackendOptions backend;
  std::string query;
  std::string query_file;
  std::vector<std::string> authors;
  std::string template_name = "p1";
  std::size_t shots = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_example_chars;
  std::string format = "table";
};

int cmd_attribute(const AttributeOptions& o, std::ostream& out, std::ostream& err) {
  std::string query = o.query;
  if (!o.query_file.empty()) query = read_file(o.query_file);
  if (query.empty()) throw InputError("query text is empty");
  if (o.shots < 1) throw InputError("--shots must be at least 1");

  const PromptTemplate& tmpl = template_by_id(parse_template_id(o.template_name));
  const Corpus corpus = load(o.corpus, err);
  std::vector<std::string> candidates = o.authors;
  if (candidates.empty() || (candidates.size() == 1 && candidates[0] == "all")) {
    candidates = corpus.authors();
  }
  if (candidates.empty()) throw InputError("no candidate authors");
  for (const std::string& a : candidates) {
    if (!corpus.has_author(a)) throw InputError("unknown author '" + a + "'");
  }
  auto backend = make_backend(o.backend);

  Rng rng(resolve_seed(o.seed, err));
  std::vector<CandidateScore> scores;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<std::string> examples;
    for (const Document& d : sample_author_documents(corpus, candidates[i], o.shots, rng)) {
      examples.push_back(d.text);
    }
    const Prompt prompt = build_prompt(examples, tmpl, o.max_example_chars);
    const ScoredContinuation scored = backend->score_candidate(i, prompt.full_prefix, query);
    for (const std::string& w : scored.warnings) err << "warning: " << candidates[i] << ": " << w << '\n';
    scores.push_back({i, candidates[i], scored.total_logprob, scored.straddle});
  }

  const Posterior post = posterior(scores);
  if (o.format == "json") {
    json ranking = json::array();
    for (std::size_t r = 0; r < post.ranking.size(); ++r) {
      const std::size_t i = post.ranking[r];
      ranking.push_back({{"rank", r + 1},
                         {"candidate_index", i},
                         {"author_id", candidates[i]},
                         {"log_evidence", scores[i].log_evidence},
                         {"posterior", post.probability(i)},
                         {"straddle", scores[i].straddle}});
    }
    out << ranking.dump(2) << '\n';
  } else {
    for (std::size_t r = 0; r < post.ranking.size(); ++r) {
      const std::size_t i = post.ranking[r];
      char buf[96];
      std::snprintf(buf, sizeof buf, "  log_evidence=%.2f  posterior=%.6f", scores[i].log_evidence,
                    post.probability(i));
      out << r + 1 << "  " << candidates[i] << buf << '\n';
    }
  }
  return kExitOk;
}

// --- bench / sweep -----------------------------------------------------------

struct BenchOptions {
  CorpusOptions corpus;
  BackendOptions backend;
  OutputOptions output;
  std::size_t candidates = 10;
  std::size_t shots = 1;
  std::size_t tests = 100;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string template_name = "p1";
  std::optional<std::size_t> max_example_chars;
  std::string filter;
  std::string out_path;
  std::vector<std::size_t> sizes = {5, 10, 25, 50};
};

BenchConfig bench_config(const BenchOptions& o, std::ostream& err) {
  BenchConfig config;
  config.num_candidates = o.candidates;
  config.shots = o.shots;
  config.num_tests = o.tests;
  config.jobs = o.jobs;
  config.template_id = parse_template_id(o.template_name);
  config.max_example_chars = o.max_example_chars;
  config.candidate_filter = parse_filter(o.filter);
  config.validate();
  config.seed = resolve_seed(o.seed, err);
  return config;
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  BenchConfig config = bench_config(o, err);
  const Corpus corpus = load(o.corpus, err);
  auto backend = make_backend(o.backend);
  const auto outcomes =
      run_benchmark(corpus, config, *backend, template_by_id(config.template_id));
  if (!o.out_path.empty()) write_file(o.out_path, outcomes_to_jsonl(outcomes));
  print_report(build_report(outcomes, o.output.group_by), o.output.format, out);
  return kExitOk;
}

int cmd_sweep(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  if (o.sizes.empty()) throw InputError("--sizes needs at least one candidate count");
  BenchConfig config = bench_config(o, err);
  const Corpus corpus = load(o.corpus, err);
  auto backend = make_backend(o.backend);
  const PromptTemplate& tmpl = template_by_id(config.template_id);

  std::vector<SweepPoint> points;
  for (std::size_t size : o.sizes) {
    config.num_candidates = size;
    config.validate();
    points.push_back({size, make_report(run_benchmark(corpus, config, *backend, tmpl))});
  }
  if (!o.out_path.empty()) write_file(o.out_path, sweep_csv(points));

  if (o.output.format == "json") {
    json rows = json::array();
    for (const SweepPoint& p : points) {
      json row = to_json(p.report);
      row["num_candidates"] = p.num_candidates;
      rows.push_back(std::move(row));
    }
    out << rows.dump(2) << '\n';
  } else {
    out << std::left << std::setw(12) << "candidates" << std::setw(16) << "top-1" << std::setw(16)
        << "top-2" << "top-5\n";
    for (const SweepPoint& p : points) {
      out << std::setw(12) << p.num_candidates;
      for (std::size_t k : {1, 2, 5}) {
        const AccuracyStat& s = p.report.top_k.at(k);
        out << std::setw(17) << format_accuracy(s.accuracy, s.stderr_);
      }
      out << '\n';
    }
  }
  return kExitOk;
}

// --- report ------------------------------------------------------------------

int cmd_report(const std::string& log_path, const OutputOptions& o, std::ostream& out) {
  const auto outcomes = parse_outcome_log(read_file(log_path));
  if (outcomes.empty()) throw InputError(log_path + ": no outcomes");
  print_report(build_report(outcomes, o.group_by), o.format, out);
  return kExitOk;
}

// --- templates / synth -------------------------------------------------------

int cmd_templates(std::ostream& out) {
  for (const PromptTemplate& t : template_catalog()) {
    out << template_name(t.id) << '\t' << json(t.connective).dump() << '\n';
  }
  return kExitOk;
}

struct SynthOptions {
  std::string kind = "markov";
  synth::SynthConfig config;
  std::string out_path;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  const auto docs = o.kind == "disjoint" ? synth::disjoint_alphabet_corpus(o.config)
                                         : synth::markov_style_corpus(o.config);
  write_corpus(o.out_path, docs);
  out << "wrote " << docs.size() << " documents by " << o.config.num_authors << " authors to "
      << o.out_path << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Authorship attribution by language-model log-probabilities", "attrib"};
  app.require_subcommand(1);

  AttributeOptions attribute;
  auto* attribute_cmd = app.add_subcommand("attribute", "Rank candidate authors of a query text");
  add_corpus_options(*attribute_cmd, attribute.corpus);
  add_backend_options(*attribute_cmd, attribute.backend);
  auto* query_opt = attribute_cmd->add_option("--query", attribute.query, "Query text");
  auto* query_file_opt =
      attribute_cmd->add_option("--query-file", attribute.query_file, "File holding the query text");
  query_opt->excludes(query_file_opt);
  attribute_cmd->add_option("--authors", attribute.authors, "Candidate author ids, or 'all'")
      ->delimiter(',');
  attribute_cmd->add_option("--template", attribute.template_name, "Prompt template")
      ->check(CLI::IsMember({"none", "p1", "p2", "p3", "p4"}))
      ->capture_default_str();
  attribute_cmd->add_option("--shots", attribute.shots, "Example documents per candidate")
      ->capture_default_str();
  attribute_cmd->add_option("--seed", attribute.seed, "Seed for example selection");
  attribute_cmd->add_option("--max-example-chars", attribute.max_example_chars,
                            "Keep only this many leading characters of each example");
  attribute_cmd->add_option("--format", attribute.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  BenchOptions bench;
  auto add_bench_options = [&bench](CLI::App& cmd) {
    add_corpus_options(cmd, bench.corpus);
    add_backend_options(cmd, bench.backend);
    add_output_options(cmd, bench.output);
    cmd.add_option("--candidates", bench.candidates, "Candidate authors per trial")
        ->capture_default_str();
    cmd.add_option("--shots", bench.shots, "Example documents per candidate")
        ->capture_default_str();
    cmd.add_option("--tests", bench.tests, "Number of trials")->capture_default_str();
    cmd.add_option("--seed", bench.seed, "Benchmark seed");
    cmd.add_option("--jobs", bench.jobs, "Worker threads")->capture_default_str();
    cmd.add_option("--template", bench.template_name, "Prompt template")
        ->check(CLI::IsMember({"none", "p1", "p2", "p3", "p4"}))
        ->capture_default_str();
    cmd.add_option("--max-example-chars", bench.max_example_chars,
                   "Keep only this many leading characters of each example");
    cmd.add_option("--filter", bench.filter,
                   "Restrict pools to documents with metadata KEY=VALUE[,VALUE...]");
  };
  auto* bench_cmd = app.add_subcommand("bench", "Run the randomized benchmark");
  add_bench_options(*bench_cmd);
  bench_cmd->add_option("--out", bench.out_path, "Write the outcome log (JSONL) here");

  auto* sweep_cmd = app.add_subcommand("sweep", "Benchmark across candidate-set sizes");
  add_bench_options(*sweep_cmd);
  sweep_cmd->add_option("--sizes", bench.sizes, "Candidate counts")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--out", bench.out_path, "Write num_candidates,top1,top2,top5 CSV here");

  std::string log_path;
  OutputOptions report;
  auto* report_cmd = app.add_subcommand("report", "Recompute metrics from an outcome log");
  report_cmd->add_option("log", log_path, "Outcome log (JSONL)")->required();
  add_output_options(*report_cmd, report);

  auto* templates_cmd = app.add_subcommand("templates", "List prompt templates");

  SynthOptions synth_opts;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("--kind", synth_opts.kind, "Corpus family")
      ->check(CLI::IsMember({"markov", "disjoint"}))
      ->capture_default_str();
  synth_cmd->add_option("--authors", synth_opts.config.num_authors)->capture_default_str();
  synth_cmd->add_option("--docs", synth_opts.config.docs_per_author, "Documents per author")
      ->capture_default_str();
  synth_cmd->add_option("--chars", synth_opts.config.doc_chars, "Characters per document")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_opts.config.seed)->capture_default_str();
  synth_cmd->add_option("--style", synth_opts.config.style_strength,
                        "Private style weight in [0, 1]")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_opts.out_path, "Output JSONL")->required();

  std::vector<std::string> argv_storage = {"attrib"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*attribute_cmd) return cmd_attribute(attribute, out, err);
    if (*bench_cmd) return cmd_bench(bench, out, err);
    if (*sweep_cmd) return cmd_sweep(bench, out, err);
    if (*report_cmd) return cmd_report(log_path, report, out);
    if (*templates_cmd) return cmd_templates(out);
    if (*synth_cmd) return cmd_synth(synth_opts, out);
  } catch (const BackendError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const BenchError& e) {
    err << "error: " << e.what() << '\n';
    return e.backend_failure() ? kExitBackend : kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace attrib::cli
