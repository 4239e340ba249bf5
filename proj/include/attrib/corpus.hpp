// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "attrib/rng.hpp"

namespace attrib {

struct Document {
  std::string doc_id;
  std::string author_id;
  std::string text;
  // Metadata kept as strings; known keys are "gender", "age" and "rating".
  std::map<std::string, std::string> meta;
  // Unrecognized top-level record keys, preserved verbatim.
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const Document&) const = default;
};

// Immutable, author-indexed collection of documents.
class Corpus {
 public:
  Corpus() = default;

  // Validates non-empty texts and unique doc ids.
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const noexcept { return documents_; }

  // Author ids in order of first appearance.
  const std::vector<std::string>& authors() const noexcept { return authors_; }

  bool has_author(const std::string& author_id) const;

  // Indices into documents() of the author's documents, in file order.
  std::span<const std::size_t> docs_of(const std::string& author_id) const;

  std::size_t size() const noexcept { return documents_.size(); }

  bool operator==(const Corpus& other) const { return documents_ == other.documents_; }

 private:
  std::vector<Document> documents_;
  std::vector<std::string> authors_;
  std::unordered_map<std::string, std::vector<std::size_t>> author_index_;
};

struct LoadedCorpus {
  Corpus corpus;
  // Records shorter than the length threshold.
  std::size_t skipped = 0;
};

// Reads a JSONL corpus. Records with fewer than `min_doc_chars` characters
// are counted in `skipped` instead of loaded.
LoadedCorpus load_corpus(const std::filesystem::path& path, std::size_t min_doc_chars = 1);

// Parses one JSONL record; throws ParseError carrying `line`.
Document parse_document(std::string_view line_text, std::size_t line);

nlohmann::json to_json(const Document& doc);

// Writes documents in the same JSONL format load_corpus reads.
void write_corpus(const std::filesystem::path& path, std::span<const Document> documents);

// k distinct documents of one author, uniform without replacement.
std::vector<Document> sample_author_documents(const Corpus& corpus, const std::string& author_id,
                                              std::size_t k, Rng& rng);

}  // namespace attrib
