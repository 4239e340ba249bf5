// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/corpus.hpp"

#include <fstream>
#include <unordered_set>

#include "attrib/error.hpp"
#include "attrib/text.hpp"

namespace attrib {

using nlohmann::json;

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const Document& doc = documents_[i];
    if (doc.text.empty()) throw InputError("document '" + doc.doc_id + "': empty text");
    if (!ids.insert(doc.doc_id).second) {
      throw InputError("duplicate doc_id '" + doc.doc_id + "'");
    }
    auto [it, inserted] = author_index_.try_emplace(doc.author_id);
    if (inserted) authors_.push_back(doc.author_id);
    it->second.push_back(i);
  }
}

bool Corpus::has_author(const std::string& author_id) const {
  return author_index_.contains(author_id);
}

std::span<const std::size_t> Corpus::docs_of(const std::string& author_id) const {
  auto it = author_index_.find(author_id);
  if (it == author_index_.end()) throw InputError("unknown author '" + author_id + "'");
  return it->second;
}

namespace {

std::string required_string(const json& record, const char* key, std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) throw ParseError(line, std::string("missing \"") + key + "\"");
  if (!it->is_string()) throw ParseError(line, std::string("\"") + key + "\" must be a string");
  return it->get<std::string>();
}

}  // namespace

Document parse_document(std::string_view line_text, std::size_t line) {
  json record;
  try {
    record = json::parse(line_text);
  } catch (const json::parse_error& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(line, "record must be a JSON object");

  Document doc;
  doc.doc_id = required_string(record, "doc_id", line);
  doc.author_id = required_string(record, "author_id", line);
  doc.text = required_string(record, "text", line);
  if (doc.text.empty()) throw ParseError(line, "empty text");

  for (auto& [key, value] : record.items()) {
    if (key == "doc_id" || key == "author_id" || key == "text") continue;
    if (key == "meta") {
      if (value.is_null()) continue;
      if (!value.is_object()) throw ParseError(line, "\"meta\" must be an object");
      for (auto& [mkey, mvalue] : value.items()) {
        // Numeric metadata (ratings, ages) is kept in its JSON spelling.
        doc.meta[mkey] = mvalue.is_string() ? mvalue.get<std::string>() : mvalue.dump();
      }
      continue;
    }
    doc.extra[key] = value;
  }
  return doc;
}

LoadedCorpus load_corpus(const std::filesystem::path& path, std::size_t min_doc_chars) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus file " + path.string());

  LoadedCorpus result;
  std::vector<Document> documents;
  std::string line_text;
  std::size_t line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    if (!line_text.empty() && line_text.back() == '\r') line_text.pop_back();
    if (line_text.find_first_not_of(" \t") == std::string::npos) continue;
    Document doc = parse_document(line_text, line);
    if (!text::is_valid(doc.text)) throw ParseError(line, "text is not valid UTF-8");
    if (text::length(doc.text) < min_doc_chars) {
      ++result.skipped;
      continue;
    }
    documents.push_back(std::move(doc));
  }
  if (in.bad()) throw InputError("read failure on " + path.string());

  try {
    result.corpus = Corpus(std::move(documents));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return result;
}

json to_json(const Document& doc) {
  json record = doc.extra.is_object() ? doc.extra : json::object();
  record["doc_id"] = doc.doc_id;
  record["author_id"] = doc.author_id;
  record["text"] = doc.text;
  if (!doc.meta.empty()) record["meta"] = doc.meta;
  return record;
}

void write_corpus(const std::filesystem::path& path, std::span<const Document> documents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  for (const Document& doc : documents) out << to_json(doc).dump() << '\n';
  if (!out) throw InputError("write failure on " + path.string());
}

std::vector<Document> sample_author_documents(const Corpus& corpus, const std::string& author_id,
                                              std::size_t k, Rng& rng) {
  if (k == 0) throw InputError("sample size must be positive");
  auto docs = corpus.docs_of(author_id);
  if (docs.size() < k) {
    throw InputError("author '" + author_id + "' has " + std::to_string(docs.size()) +
                     " documents, " + std::to_string(k) + " requested (insufficient documents)");
  }
  std::vector<Document> out;
  out.reserve(k);
  for (std::size_t pick : rng.sample_without_replacement(docs.size(), k)) {
    out.push_back(corpus.documents()[docs[pick]]);
  }
  return out;
}

}  // namespace attrib
