// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "attrib/bayes.hpp"
#include "attrib/error.hpp"
#include "attrib/rng.hpp"

using namespace attrib;

namespace {

Posterior post(std::vector<double> evidence) { return posterior(std::span<const double>(evidence)); }

Posterior post(std::vector<double> evidence, std::vector<double> priors) {
  return posterior(std::span<const double>(evidence), std::span<const double>(priors));
}

double total(const Posterior& p) {
  double s = 0.0;
  for (double lp : p.log_posterior) s += std::exp(lp);
  return s;
}

}  // namespace

TEST_CASE("two-candidate replay") {
  const Posterior p = post({-958.41, -964.51});
  CHECK(p.ranking == std::vector<std::size_t>{0, 1});
  // 1 / (1 + e^-6.10), evaluated at 30 digits: 0.99776215147872...
  CHECK(std::abs(p.probability(0) - 0.997762151478724) < 1e-12);
}

TEST_CASE("symmetric evidence") {
  const Posterior p = post({-5, -5, -5});
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(p.probability(i) - 1.0 / 3.0) < 1e-15);
  CHECK(p.ranking == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("non-uniform prior") {
  const Posterior p = post({-10, -12}, {0.9, 0.1});
  // 1 / (1 + e^-(2 + ln 9)) = 0.98518551546926...
  CHECK(std::abs(p.probability(0) - 0.985185515469262) < 1e-12);
  // Priors need not sum to one.
  const Posterior scaled = post({-10, -12}, {9.0, 1.0});
  CHECK(std::abs(scaled.probability(0) - p.probability(0)) < 1e-15);
}

TEST_CASE("posterior preconditions") {
  CHECK_THROWS_AS(post({}), InputError);
  CHECK_THROWS_AS(post({-1, -2}, {1.0}), InputError);
  CHECK_THROWS_AS(post({-1, -2}, {1.0, 0.0}), InputError);
  CHECK_THROWS_AS(post({-1, -2}, {1.0, -3.0}), InputError);
  CHECK_THROWS_AS(post({-1, -INFINITY}), InputError);
  CHECK_THROWS_AS(post({-1, NAN}), InputError);
}

TEST_CASE("rank_of") {
  Posterior p;
  p.ranking = {2, 0, 1};
  CHECK(rank_of(p, 0) == 2);
  CHECK(rank_of(p, 2) == 1);
  CHECK_THROWS_AS(rank_of(p, 5), InputError);
  CHECK(rank_of(post({-3}), 0) == 1);
  CHECK(post({-3}).probability(0) == 1.0);
}

TEST_CASE("randomized posterior properties") {
  Rng rng(123);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(12);
    const double spread = trial % 3 == 0 ? 1000.0 : 20.0;
    std::vector<double> ev(n), priors(n);
    for (std::size_t i = 0; i < n; ++i) {
      ev[i] = -1000.0 + spread * (2.0 * rng.uniform_real() - 1.0);
      priors[i] = 0.01 + rng.uniform_real();
    }
    const Posterior p = post(ev, priors);
    CHECK(std::abs(total(p) - 1.0) < 1e-12);

    auto sorted = p.ranking;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> identity(n);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    CHECK(sorted == identity);
    for (std::size_t r = 1; r < n; ++r) {
      CHECK(p.log_posterior[p.ranking[r - 1]] >= p.log_posterior[p.ranking[r]]);
    }

    const double shift = 500.0 * (2.0 * rng.uniform_real() - 1.0);
    std::vector<double> shifted = ev;
    for (double& e : shifted) e += shift;
    const Posterior q = post(shifted, priors);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(q.log_posterior[i] - p.log_posterior[i]) < 1e-12);
  }
}

TEST_CASE("removing candidates never worsens a rank") {
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(9);
    std::vector<double> ev(n);
    for (double& e : ev) e = -std::floor(10.0 * rng.uniform_real());  // frequent ties
    const std::size_t target = rng.uniform_index(n);
    const Posterior full = post(ev);
    const std::size_t rank = rank_of(full, target);

    const std::size_t drop = rng.uniform_index(n);
    if (drop == target) continue;
    std::vector<CandidateScore> rest;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != drop) rest.push_back({i, "", ev[i], false});
    }
    const Posterior reduced = posterior(rest);
    std::size_t target_pos = 0;
    while (rest[target_pos].candidate_index != target) ++target_pos;
    const std::size_t new_rank = rank_of(reduced, target_pos);
    const bool dropped_above = rank_of(full, drop) < rank;
    CHECK(new_rank == (dropped_above ? rank - 1 : rank));
  }
}
