// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "attrib/error.hpp"

namespace attrib {

double Posterior::probability(std::size_t i) const { return std::exp(log_posterior.at(i)); }

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

Posterior posterior(std::span<const CandidateScore> scores,
                    std::optional<std::span<const double>> priors) {
  const std::size_t n = scores.size();
  if (n == 0) throw InputError("posterior needs at least one candidate");
  if (priors && priors->size() != n) {
    throw InputError("prior count " + std::to_string(priors->size()) + " does not match " +
                     std::to_string(n) + " candidates");
  }

  Posterior post;
  post.log_prior.resize(n);
  if (priors) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = (*priors)[i];
      if (!(p > 0.0) || !std::isfinite(p)) throw InputError("priors must be positive and finite");
      post.log_prior[i] = std::log(p);
    }
    const double norm = log_sum_exp(post.log_prior);
    for (double& lp : post.log_prior) lp -= norm;
  } else {
    std::fill(post.log_prior.begin(), post.log_prior.end(), -std::log(static_cast<double>(n)));
  }

  std::vector<double> joint(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(scores[i].log_evidence)) {
      throw InputError("candidate " + std::to_string(scores[i].candidate_index) +
                       ": log-evidence is not finite");
    }
    joint[i] = scores[i].log_evidence + post.log_prior[i];
  }
  const double norm = log_sum_exp(joint);
  post.log_posterior.resize(n);
  for (std::size_t i = 0; i < n; ++i) post.log_posterior[i] = joint[i] - norm;

  post.ranking.resize(n);
  std::iota(post.ranking.begin(), post.ranking.end(), std::size_t{0});
  std::stable_sort(post.ranking.begin(), post.ranking.end(), [&](std::size_t a, std::size_t b) {
    const double pa = post.log_posterior[a];
    const double pb = post.log_posterior[b];
    if (pa != pb) return pa > pb;
    return scores[a].candidate_index < scores[b].candidate_index;
  });
  return post;
}

Posterior posterior(std::span<const double> log_evidence,
                    std::optional<std::span<const double>> priors) {
  std::vector<CandidateScore> scores(log_evidence.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i].candidate_index = i;
    scores[i].log_evidence = log_evidence[i];
  }
  return posterior(scores, priors);
}

std::size_t rank_of(const Posterior& post, std::size_t index) {
  auto it = std::find(post.ranking.begin(), post.ranking.end(), index);
  if (it == post.ranking.end()) {
    throw InputError("candidate " + std::to_string(index) + " out of range (" +
                     std::to_string(post.ranking.size()) + " candidates)");
  }
  return static_cast<std::size_t>(it - post.ranking.begin()) + 1;
}

}  // namespace attrib
