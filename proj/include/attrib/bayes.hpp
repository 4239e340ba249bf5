// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace attrib {

struct CandidateScore {
  std::size_t candidate_index = 0;
  std::string author_id;
  // ln P(query | candidate's example texts); must be finite.
  double log_evidence = 0.0;
  bool straddle = false;
};

struct Posterior {
  std::vector<double> log_prior;      // normalized
  std::vector<double> log_posterior;  // sums to one in probability space
  // Candidate positions (into the input list), best first; ties go to the
  // lower candidate_index.
  std::vector<std::size_t> ranking;

  double probability(std::size_t i) const;
};

// Bayes' rule over the candidate set. `priors` may be unnormalized but must
// be positive; uniform when absent.
Posterior posterior(std::span<const CandidateScore> scores,
                    std::optional<std::span<const double>> priors = std::nullopt);

// Convenience overload indexing candidates 0..n-1.
Posterior posterior(std::span<const double> log_evidence,
                    std::optional<std::span<const double>> priors = std::nullopt);

// 1-based position of candidate `index` in the ranking.
std::size_t rank_of(const Posterior& post, std::size_t index);

double log_sum_exp(std::span<const double> values);

}  // namespace attrib
