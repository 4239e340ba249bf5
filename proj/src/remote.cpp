// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/remote.hpp"

#include <thread>

#include <httplib.h>

#include "attrib/error.hpp"
#include "attrib/text.hpp"

namespace attrib {

using nlohmann::json;

namespace {

BackendError protocol_error(const std::string& what) {
  return BackendError(BackendError::Kind::kProtocol, "remote: " + what);
}

}  // namespace

json make_completion_request(std::string_view model, std::string_view full_text) {
  return {{"model", model},   {"prompt", full_text}, {"max_tokens", 0},
          {"echo", true},     {"logprobs", 1},       {"temperature", 0}};
}

ScoredContinuation align_echo_logprobs(const json& response, std::size_t boundary) {
  const json* logprobs = nullptr;
  try {
    logprobs = &response.at("choices").at(0).at("logprobs");
  } catch (const json::exception&) {
    throw protocol_error("response has no choices[0].logprobs");
  }
  if (logprobs->is_null()) throw protocol_error("logprobs unavailable (null) in response");

  auto field = [&](const char* key) -> const json& {
    auto it = logprobs->find(key);
    if (it == logprobs->end() || !it->is_array()) {
      throw protocol_error(std::string("logprobs.") + key + " missing or not a list");
    }
    return *it;
  };
  const json& tokens = field("tokens");
  const json& values = field("token_logprobs");
  const json& offsets = field("text_offset");
  const std::size_t n = tokens.size();
  if (values.size() != n || offsets.size() != n) {
    throw protocol_error("tokens, token_logprobs and text_offset differ in length");
  }

  ScoredContinuation out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!tokens[i].is_string() || !offsets[i].is_number_integer() || offsets[i].get<long long>() < 0) {
      throw protocol_error("malformed token entry " + std::to_string(i));
    }
    const auto start = offsets[i].get<std::size_t>();
    const std::string token = tokens[i].get<std::string>();
    if (start < boundary) {
      const std::size_t end =
          i + 1 < n ? offsets[i + 1].get<std::size_t>() : start + text::length(token);
      if (end > boundary) {
        out.straddle = true;
        out.warnings.push_back("token " + std::to_string(i) + " spans [" + std::to_string(start) +
                               "," + std::to_string(end) + ") across boundary " +
                               std::to_string(boundary) + "; excluded");
      }
      continue;
    }
    if (!values[i].is_number()) {
      throw protocol_error("logprobs unavailable for token " + std::to_string(i));
    }
    out.token_logprobs.push_back({token, values[i].get<double>()});
    out.total_logprob += values[i].get<double>();
  }
  out.token_count = out.token_logprobs.size();
  if (out.token_count == 0) throw protocol_error("no tokens at or after the continuation boundary");
  return out;
}

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw InputError("remote backend needs an endpoint URL");
  if (config_.model.empty()) throw InputError("remote backend needs a model name");
  std::string url = config_.endpoint;
  while (!url.empty() && url.back() == '/') url.pop_back();
  // Split "scheme://host:port/path" into the client address and path prefix.
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  base_path_ = path_start == std::string::npos ? "" : url.substr(path_start);
}

json RemoteBackend::post_with_retry(const json& body) const {
  const std::string payload = body.dump();
  const std::string path = base_path_ + "/v1/completions";
  httplib::Headers headers;
  if (config_.api_key) headers.emplace("Authorization", "Bearer " + *config_.api_key);

  auto backoff = config_.initial_backoff;
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(scheme_host_port_);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      throw protocol_error("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    try {
      return json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw protocol_error(std::string("response is not JSON: ") + e.what());
    }
  }
  throw BackendError(BackendError::Kind::kTransport,
                     "remote: " + scheme_host_port_ + path + " unreachable after " +
                         std::to_string(config_.max_retries + 1) + " attempts: " + last_error);
}

ScoredContinuation RemoteBackend::do_score(std::string_view prompt,
                                           std::string_view continuation) const {
  std::string full(prompt);
  full += continuation;
  json response = post_with_retry(make_completion_request(config_.model, full));
  return align_echo_logprobs(response, text::length(prompt));
}

}  // namespace attrib
