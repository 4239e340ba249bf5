// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "attrib/bench.hpp"

namespace attrib {

struct AccuracyStat {
  double accuracy = 0.0;
  double stderr_ = 0.0;

  bool operator==(const AccuracyStat&) const = default;
};

struct MetricsReport {
  std::size_t n = 0;
  std::map<std::size_t, AccuracyStat> top_k;
  std::map<std::string, MetricsReport> groups;
  double mean_wall_time_ms = 0.0;
};

inline const std::vector<std::size_t> kDefaultTopK = {1, 2, 5};

// Fraction of outcomes whose true author ranks within the top k.
double top_k_accuracy(std::span<const TrialOutcome> outcomes, std::size_t k);

// sqrt(p (1 - p) / n).
double binomial_stderr(double p, std::size_t n);

// "85.0 ± 3.6": percentage and 100 * stderr, one decimal each.
std::string format_accuracy(double accuracy, double stderr_);

MetricsReport make_report(std::span<const TrialOutcome> outcomes,
                          std::span<const std::size_t> ks = kDefaultTopK);

// A subgroup bin: numeric values in [low, high], or a set of categories
// matched case-insensitively.
struct GroupBin {
  std::string label;
  std::optional<double> low;
  std::optional<double> high;
  std::vector<std::string> categories;

  static GroupBin range(std::string label, double low, double high);
  static GroupBin category(std::string label, std::vector<std::string> values);

  bool is_range() const noexcept { return low.has_value(); }
  bool matches(const std::string& value) const;
};

inline constexpr const char* kUnknownGroup = "unknown";

// Bins used for the "gender", "age" and "rating" keys; empty for others.
std::vector<GroupBin> default_bins(const std::string& key);

// Report whose groups partition outcomes by the query document's value for
// `key`. Values missing or matching no bin go to "unknown". Throws on an
// empty bin list or overlapping numeric bins.
MetricsReport group_report(std::span<const TrialOutcome> outcomes, const std::string& key,
                           std::span<const GroupBin> bins,
                           std::span<const std::size_t> ks = kDefaultTopK);

// As group_report with one group per distinct value.
MetricsReport group_report_by_value(std::span<const TrialOutcome> outcomes, const std::string& key,
                                    std::span<const std::size_t> ks = kDefaultTopK);

struct TimingSummary {
  double total_ms = 0.0;
  double mean_ms = 0.0;
  std::vector<double> per_trial_ms;
};

TimingSummary timing_summary(std::span<const TrialOutcome> outcomes);

nlohmann::json to_json(const MetricsReport& report, bool include_timing = true);

// Aligned plain-text table, one row per group.
std::string to_table(const MetricsReport& report, bool include_timing = true);

// One row of a candidate-count sweep.
struct SweepPoint {
  std::size_t num_candidates = 0;
  MetricsReport report;
};

// "num_candidates,top1,top2,top5" header plus one row per point.
std::string sweep_csv(std::span<const SweepPoint> points);

}  // namespace attrib
