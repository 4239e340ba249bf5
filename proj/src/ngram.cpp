// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/ngram.hpp"

#include <cmath>
#include <map>

#include "attrib/error.hpp"
#include "attrib/text.hpp"

namespace attrib {

using nlohmann::json;

NgramModel NgramModel::train(std::span<const std::string> texts, int order, double alpha) {
  if (order < 1) throw InputError("n-gram order must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("alpha must be positive");
  if (texts.empty()) throw InputError("cannot train on an empty text list");

  NgramModel model(order, alpha);
  bool any_window = false;
  for (const std::string& t : texts) {
    auto decoded = text::decode(t);
    any_window = any_window || decoded.size() >= static_cast<std::size_t>(order);
    model.add_text(decoded);
  }
  if (!any_window) {
    throw InputError("all training texts are shorter than order " + std::to_string(order));
  }
  return model;
}

NgramModel NgramModel::ingest(std::string_view t) const {
  NgramModel copy = *this;
  copy.add_text(text::decode(t));
  return copy;
}

void NgramModel::add_text(std::u32string_view t) {
  vocab_.insert(t.begin(), t.end());
  const std::size_t ctx_len = static_cast<std::size_t>(order_ - 1);
  if (t.size() < static_cast<std::size_t>(order_)) return;
  for (std::size_t end = ctx_len; end < t.size(); ++end) {
    ContextStats& stats = contexts_[std::u32string(t.substr(end - ctx_len, ctx_len))];
    ++stats.total;
    ++stats.next[t[end]];
  }
}

double NgramModel::logprob_given(const ContextStats* stats, char32_t symbol) const {
  const double total = stats ? static_cast<double>(stats->total) : 0.0;
  double count = 0.0;
  if (stats) {
    auto it = stats->next.find(symbol);
    if (it != stats->next.end()) count = static_cast<double>(it->second);
  }
  double vocab_size = static_cast<double>(vocab_.size());
  if (!vocab_.contains(symbol)) vocab_size += 1.0;
  return std::log((count + alpha_) / (total + alpha_ * vocab_size));
}

double NgramModel::char_logprob(std::u32string_view context, char32_t symbol) const {
  const std::size_t ctx_len = static_cast<std::size_t>(order_ - 1);
  if (context.size() > ctx_len) context = context.substr(context.size() - ctx_len);
  auto it = contexts_.find(std::u32string(context));
  return logprob_given(it == contexts_.end() ? nullptr : &it->second, symbol);
}

std::vector<CharLogprob> NgramModel::continuation_logprobs(std::string_view prefix,
                                                           std::string_view continuation) const {
  if (continuation.empty()) throw InputError("continuation must be non-empty");
  const std::size_t ctx_len = static_cast<std::size_t>(order_ - 1);
  std::u32string history = text::decode(prefix);
  if (history.size() > ctx_len) history.erase(0, history.size() - ctx_len);
  const std::size_t offset = history.size();
  history += text::decode(continuation);

  std::vector<CharLogprob> out;
  out.reserve(history.size() - offset);
  std::u32string key;
  for (std::size_t i = offset; i < history.size(); ++i) {
    const std::size_t start = i > ctx_len ? i - ctx_len : 0;
    key.assign(history, start, i - start);
    auto it = contexts_.find(key);
    out.push_back({history[i], logprob_given(it == contexts_.end() ? nullptr : &it->second,
                                             history[i])});
  }
  return out;
}

double NgramModel::sequence_logprob(std::string_view prefix, std::string_view continuation) const {
  double total = 0.0;
  for (const CharLogprob& f : continuation_logprobs(prefix, continuation)) total += f.logprob;
  return total;
}

std::uint64_t NgramModel::context_count(std::u32string_view context) const {
  auto it = contexts_.find(std::u32string(context));
  return it == contexts_.end() ? 0 : it->second.total;
}

std::uint64_t NgramModel::transition_count(std::u32string_view context, char32_t symbol) const {
  auto it = contexts_.find(std::u32string(context));
  if (it == contexts_.end()) return 0;
  auto jt = it->second.next.find(symbol);
  return jt == it->second.next.end() ? 0 : jt->second;
}

json NgramModel::to_json() const {
  json vocab = json::array();
  for (char32_t c : vocab_) vocab.push_back(text::encode(c));

  // Sorted by code point sequence so dumps are stable.
  std::map<std::u32string, std::map<char32_t, std::uint64_t>> sorted;
  for (const auto& [ctx, stats] : contexts_) {
    sorted[ctx] = std::map<char32_t, std::uint64_t>(stats.next.begin(), stats.next.end());
  }
  json counts = json::object();
  for (const auto& [ctx, next] : sorted) {
    json row = json::object();
    for (const auto& [sym, n] : next) row[text::encode(sym)] = n;
    counts[text::encode(ctx)] = std::move(row);
  }
  return {{"order", order_}, {"alpha", alpha_}, {"vocab", std::move(vocab)},
          {"counts", std::move(counts)}};
}

NgramModel NgramModel::from_json(const json& dump) {
  try {
    NgramModel model(dump.at("order").get<int>(), dump.at("alpha").get<double>());
    if (model.order_ < 1 || !(model.alpha_ > 0.0)) throw InputError("invalid order or alpha");
    for (const auto& c : dump.at("vocab")) {
      auto cp = text::decode(c.get<std::string>());
      if (cp.size() != 1) throw InputError("vocab entries must be single characters");
      model.vocab_.insert(cp[0]);
    }
    for (const auto& [ctx, row] : dump.at("counts").items()) {
      auto key = text::decode(ctx);
      if (key.size() != static_cast<std::size_t>(model.order_ - 1)) {
        throw InputError("context length does not match order");
      }
      ContextStats& stats = model.contexts_[key];
      for (const auto& [sym, n] : row.items()) {
        auto cp = text::decode(sym);
        if (cp.size() != 1) throw InputError("count keys must be single characters");
        stats.next[cp[0]] = n.get<std::uint64_t>();
        stats.total += n.get<std::uint64_t>();
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed n-gram model dump: ") + e.what());
  }
}

bool NgramModel::operator==(const NgramModel& other) const {
  return order_ == other.order_ && alpha_ == other.alpha_ && vocab_ == other.vocab_ &&
         contexts_ == other.contexts_;
}

}  // namespace attrib
