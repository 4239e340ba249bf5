// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/synth.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "attrib/error.hpp"
#include "attrib/rng.hpp"
#include "attrib/text.hpp"

namespace attrib::synth {
namespace {

using Table = std::vector<std::vector<double>>;

double exp_draw(Rng& rng) { return -std::log(1.0 - rng.uniform_real()); }

Table random_table(std::size_t size, double power, Rng& rng) {
  Table t(size, std::vector<double>(size));
  for (auto& row : t) {
    double sum = 0.0;
    for (double& w : row) {
      w = std::pow(exp_draw(rng), power);
      sum += w;
    }
    for (double& w : row) w /= sum;
  }
  return t;
}

std::size_t draw(const std::vector<double>& row, Rng& rng) {
  const double u = rng.uniform_real();
  double acc = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    acc += row[i];
    if (u < acc) return i;
  }
  return row.size() - 1;
}

std::u32string walk(const Table& t, std::size_t length, Rng& rng, std::u32string_view alphabet) {
  std::u32string out;
  std::size_t state = rng.uniform_index(alphabet.size());
  for (std::size_t i = 0; i < length; ++i) {
    out.push_back(alphabet[state]);
    state = draw(t[state], rng);
  }
  return out;
}

std::string author_id(std::size_t a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "author%02zu", a);
  return buf;
}

Document make_doc(std::size_t a, std::size_t d, std::string text, Rng& rng) {
  static const char* kAges[] = {"15", "25", "40", "46"};
  Document doc;
  doc.author_id = author_id(a);
  doc.doc_id = doc.author_id + "-" + std::to_string(d);
  doc.text = std::move(text);
  doc.meta["gender"] = a % 2 == 0 ? "male" : "female";
  doc.meta["age"] = kAges[a % 4];
  doc.meta["rating"] = std::to_string(1 + rng.uniform_index(10));
  return doc;
}

void check(const SynthConfig& config) {
  if (config.num_authors == 0 || config.docs_per_author == 0 || config.doc_chars == 0) {
    throw InputError("synthetic corpus sizes must be positive");
  }
  if (!(config.style_strength >= 0.0 && config.style_strength <= 1.0)) {
    throw InputError("style strength must lie in [0, 1]");
  }
}

}  // namespace

std::vector<Document> disjoint_alphabet_corpus(const SynthConfig& config) {
  check(config);
  constexpr std::size_t kBlock = 12;
  Rng rng(derive_seed(config.seed, 0xD15));
  std::vector<Document> docs;
  for (std::size_t a = 0; a < config.num_authors; ++a) {
    std::u32string alphabet;
    for (std::size_t i = 0; i < kBlock; ++i) {
      alphabet.push_back(static_cast<char32_t>(0x4E00 + kBlock * a + i));
    }
    const Table table = random_table(kBlock, 2.0, rng);
    for (std::size_t d = 0; d < config.docs_per_author; ++d) {
      std::string body = text::encode(walk(table, config.doc_chars, rng, alphabet));
      docs.push_back(make_doc(a, d, std::move(body), rng));
    }
  }
  return docs;
}

std::vector<Document> markov_style_corpus(const SynthConfig& config) {
  check(config);
  static constexpr std::u32string_view kAlphabet = U"abcdefghijklmnopqrstuvwxyz .,";
  Rng rng(derive_seed(config.seed, 0x5717));
  const Table shared = random_table(kAlphabet.size(), 1.0, rng);
  std::vector<Document> docs;
  for (std::size_t a = 0; a < config.num_authors; ++a) {
    Table table = random_table(kAlphabet.size(), 3.0, rng);
    for (std::size_t c = 0; c < table.size(); ++c) {
      for (std::size_t s = 0; s < table.size(); ++s) {
        table[c][s] = (1.0 - config.style_strength) * shared[c][s] +
                      config.style_strength * table[c][s];
      }
    }
    for (std::size_t d = 0; d < config.docs_per_author; ++d) {
      std::string body = text::encode(walk(table, config.doc_chars, rng, kAlphabet));
      docs.push_back(make_doc(a, d, std::move(body), rng));
    }
  }
  return docs;
}

}  // namespace attrib::synth
