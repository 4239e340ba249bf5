// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

// Test-only reference computations. Nothing here calls into the library's
// scoring code; counts are re-derived by scanning raw text.

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "attrib/text.hpp"

namespace oracle {

// Brute-force additive-smoothing n-gram probability.
struct BruteNgram {
  std::vector<std::u32string> texts;
  int order;
  double alpha;

  BruteNgram(const std::vector<std::string>& utf8_texts, int order_, double alpha_)
      : order(order_), alpha(alpha_) {
    for (const auto& t : utf8_texts) texts.push_back(attrib::text::decode(t));
    for (const auto& t : texts) vocab.insert(t.begin(), t.end());
  }

  std::set<char32_t> vocab;

  // Windows whose first order-1 characters equal ctx (and, if given, whose
  // last character equals sym). Contexts shorter than order-1 never match.
  std::uint64_t count(const std::u32string& ctx, const char32_t* sym) const {
    if (ctx.size() != static_cast<std::size_t>(order - 1)) return 0;
    std::uint64_t n = 0;
    for (const auto& t : texts) {
      for (std::size_t i = 0; i + static_cast<std::size_t>(order) <= t.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < ctx.size(); ++j) match = match && t[i + j] == ctx[j];
        if (match && (!sym || t[i + ctx.size()] == *sym)) ++n;
      }
    }
    return n;
  }

  double logprob(std::u32string ctx, char32_t sym) const {
    const std::size_t keep = static_cast<std::size_t>(order - 1);
    if (ctx.size() > keep) ctx = ctx.substr(ctx.size() - keep);
    double vocab_size = static_cast<double>(vocab.size()) + (vocab.count(sym) ? 0.0 : 1.0);
    const double num = static_cast<double>(count(ctx, &sym)) + alpha;
    const double den = static_cast<double>(count(ctx, nullptr)) + alpha * vocab_size;
    return std::log(num / den);
  }

  double sequence(const std::string& prefix, const std::string& continuation) const {
    std::u32string history = attrib::text::decode(prefix);
    double total = 0.0;
    for (char32_t c : attrib::text::decode(continuation)) {
      total += logprob(history, c);
      history.push_back(c);
    }
    return total;
  }
};

}  // namespace oracle
