// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "attrib/corpus.hpp"

// Seeded synthetic corpora with known structure, for benchmarks that need
// no external data.
namespace attrib::synth {

struct SynthConfig {
  std::size_t num_authors = 10;
  std::size_t docs_per_author = 20;
  // Characters per document.
  std::size_t doc_chars = 400;
  std::uint64_t seed = 1;
  // Weight of each author's private transition table against the shared
  // one, in [0, 1]. Markov-style corpora only.
  double style_strength = 0.3;
};

// Every author writes over a private block of 12 code points
// (U+4E00 + 12 * author); no character is shared between authors. Text is a
// first-order Markov chain with author-specific transitions.
std::vector<Document> disjoint_alphabet_corpus(const SynthConfig& config);

// Authors share the alphabet "a".."z" plus space, period and comma. Each
// author's first-order transition table mixes a table shared by everyone
// with a private one:
//
//   P_author(s | c) = (1 - w) * P_shared(s | c) + w * P_private(s | c)
//
// where w = style_strength. Shared rows are normalized Exp(1) draws;
// private rows are normalized cubes of Exp(1) draws, which concentrates
// them on a few successors.
std::vector<Document> markov_style_corpus(const SynthConfig& config);

}  // namespace attrib::synth
