// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include <doctest.h>

#include <cmath>

#include "attrib/error.hpp"
#include "attrib/metrics.hpp"
#include "attrib/rng.hpp"

using namespace attrib;

namespace {

TrialOutcome outcome(std::size_t rank, std::size_t candidates = 10,
                     std::map<std::string, std::string> meta = {}, double ms = 0.0) {
  TrialOutcome o;
  o.trial.candidate_authors.resize(candidates);
  o.trial.query_doc.meta = std::move(meta);
  o.true_rank = rank;
  o.wall_time_ms = ms;
  return o;
}

std::vector<TrialOutcome> ranks(std::vector<std::size_t> rs) {
  std::vector<TrialOutcome> out;
  for (auto r : rs) out.push_back(outcome(r));
  return out;
}

}  // namespace

TEST_CASE("top-k accuracy by direct count") {
  const auto outs = ranks({1, 1, 3, 2, 6, 1, 1, 1, 1, 1});
  CHECK(top_k_accuracy(outs, 1) == 0.7);
  CHECK(top_k_accuracy(outs, 2) == 0.8);
  CHECK(top_k_accuracy(outs, 5) == 0.9);
  CHECK(top_k_accuracy(outs, 10) == 1.0);
  CHECK(top_k_accuracy(ranks({1, 1, 1}), 1) == 1.0);
  CHECK_THROWS_AS(top_k_accuracy({}, 1), InputError);
}

TEST_CASE("binomial standard error and rendering") {
  CHECK(binomial_stderr(0.85, 100) == doctest::Approx(0.0357).epsilon(1e-3));
  CHECK(format_accuracy(0.85, binomial_stderr(0.85, 100)) == "85.0 ± 3.6");
  CHECK(format_accuracy(0.84, binomial_stderr(0.84, 500)) == "84.0 ± 1.6");
  CHECK(format_accuracy(0.814, binomial_stderr(0.814, 237)) == "81.4 ± 2.5");
  CHECK(format_accuracy(0.863, binomial_stderr(0.863, 263)) == "86.3 ± 2.1");
  CHECK(binomial_stderr(0.0, 10) == 0.0);
  CHECK(binomial_stderr(1.0, 10) == 0.0);
  CHECK_THROWS_AS(binomial_stderr(0.5, 0), InputError);
  CHECK_THROWS_AS(binomial_stderr(1.5, 10), InputError);
  for (double p = 0.0; p <= 1.0; p += 0.01) {
    CHECK(binomial_stderr(p, 37) == doctest::Approx(binomial_stderr(1.0 - p, 37)).epsilon(1e-12));
  }
}

TEST_CASE("report monotonicity and saturation") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TrialOutcome> outs;
    const std::size_t candidates = 2 + rng.uniform_index(9);
    for (std::size_t i = 0, n = 1 + rng.uniform_index(40); i < n; ++i) {
      outs.push_back(outcome(1 + rng.uniform_index(candidates), candidates));
    }
    double previous = 0.0;
    for (std::size_t k = 1; k <= 12; ++k) {
      const double acc = top_k_accuracy(outs, k);
      CHECK(acc >= previous);
      previous = acc;
      if (k >= candidates) CHECK(acc == 1.0);
    }
  }
}

TEST_CASE("gender groups partition outcomes") {
  std::vector<TrialOutcome> outs;
  for (int i = 0; i < 237; ++i) outs.push_back(outcome(1 + i % 3, 10, {{"gender", "male"}}));
  for (int i = 0; i < 263; ++i) outs.push_back(outcome(1 + i % 4, 10, {{"gender", "Female"}}));
  const auto bins = default_bins("gender");
  const MetricsReport report = group_report(outs, "gender", bins);
  CHECK(report.n == 500);
  CHECK(report.groups.at("Male").n == 237);
  CHECK(report.groups.at("Female").n == 263);
  CHECK_FALSE(report.groups.contains(kUnknownGroup));
}

TEST_CASE("numeric bins and the unknown group") {
  std::vector<TrialOutcome> outs = {
      outcome(1, 10, {{"age", "15"}}), outcome(2, 10, {{"age", "25"}}),
      outcome(1, 10, {{"age", "40"}}), outcome(1, 10, {{"age", "47"}}),
      outcome(1, 10, {{"age", "70"}}), outcome(1, 10, {}),
      outcome(3, 10, {{"age", "n/a"}})};
  const auto bins = default_bins("age");
  REQUIRE(bins.size() == 4);
  const MetricsReport report = group_report(outs, "age", bins);
  CHECK(report.groups.at("[13-17]").n == 1);
  CHECK(report.groups.at("[18-34]").top_k.at(1).accuracy == 0.0);
  CHECK(report.groups.at("[45-48]").n == 1);
  CHECK(report.groups.at(kUnknownGroup).n == 3);
  std::size_t total = 0;
  for (const auto& [label, g] : report.groups) total += g.n;
  CHECK(total == outs.size());

  CHECK(default_bins("rating").size() == 5);
  CHECK(default_bins("rating")[4].matches("10"));
  CHECK(default_bins("rating")[4].matches("9.0"));
}

TEST_CASE("grouping errors and value grouping") {
  const auto outs = ranks({1, 2});
  CHECK_THROWS_AS(group_report(outs, "age", std::vector<GroupBin>{}), InputError);
  const std::vector<GroupBin> overlapping = {GroupBin::range("a", 1, 5), GroupBin::range("b", 5, 9)};
  CHECK_THROWS_AS(group_report(outs, "age", overlapping), InputError);
  CHECK_THROWS_AS(GroupBin::range("bad", 3, 1), InputError);

  const MetricsReport by_value = group_report_by_value(outs, "gender");
  REQUIRE(by_value.groups.size() == 1);
  CHECK(by_value.groups.at(kUnknownGroup).n == 2);
}

TEST_CASE("timing summary") {
  const std::vector<TrialOutcome> outs = {outcome(1, 10, {}, 100.0), outcome(1, 10, {}, 300.0)};
  const TimingSummary t = timing_summary(outs);
  CHECK(t.total_ms == 400.0);
  CHECK(t.mean_ms == 200.0);
  CHECK(t.per_trial_ms == std::vector<double>{100.0, 300.0});
  const std::vector<TrialOutcome> one = {outcome(1, 10, {}, 42.0)};
  CHECK(timing_summary(one).mean_ms == timing_summary(one).total_ms);
  CHECK_THROWS_AS(timing_summary({}), InputError);
}

TEST_CASE("report rendering") {
  const auto outs = ranks({1, 1, 3, 2, 6, 1, 1, 1, 1, 1});
  const MetricsReport report = make_report(outs);
  const auto j = to_json(report);
  CHECK(j.at("n") == 10);
  CHECK(j.at("top_k").at("1").at("accuracy") == 0.7);
  CHECK(to_json(report, false).contains("mean_wall_time_ms") == false);
  const std::string table = to_table(report);
  CHECK(table.find("70.0 ± 14.5") != std::string::npos);

  const std::vector<SweepPoint> points = {{5, report}};
  CHECK(sweep_csv(points) == "num_candidates,top1,top2,top5\n5,0.7000,0.8000,0.9000\n");
}
