// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "attrib/backend.hpp"

namespace attrib {

struct RemoteConfig {
  // Base URL, e.g. "http://localhost:8000"; "/v1/completions" is appended.
  std::string endpoint;
  std::string model;
  // Sent as a bearer token when set.
  std::optional<std::string> api_key;
  std::optional<std::size_t> max_prompt_chars;
  // Retries after the first attempt, transport errors only.
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{250};
  std::chrono::seconds timeout{300};
};

// Body of an echo-only completion request: zero generated tokens, logprobs
// for every prompt token.
nlohmann::json make_completion_request(std::string_view model, std::string_view full_text);

// Extracts the continuation's log-probability from an echo response.
//
// `boundary` is the character offset where the continuation starts inside
// the submitted text. Tokens starting at or after the boundary are summed.
// A token that starts before the boundary and ends after it is excluded,
// and the result is flagged as a straddle with a warning.
ScoredContinuation align_echo_logprobs(const nlohmann::json& response, std::size_t boundary);

// Client for an OpenAI-compatible /v1/completions server (vLLM and similar)
// that supports echo with logprobs. Log-probabilities are taken as natural
// log.
class RemoteBackend final : public ScoringBackend {
 public:
  explicit RemoteBackend(RemoteConfig config);

  std::string name() const override { return "remote:" + config_.model; }
  std::optional<std::size_t> max_prompt_chars() const override { return config_.max_prompt_chars; }

  const RemoteConfig& config() const noexcept { return config_; }

 protected:
  ScoredContinuation do_score(std::string_view prompt, std::string_view continuation) const override;

 private:
  nlohmann::json post_with_retry(const nlohmann::json& body) const;

  RemoteConfig config_;
  std::string scheme_host_port_;
  std::string base_path_;
};

}  // namespace attrib
