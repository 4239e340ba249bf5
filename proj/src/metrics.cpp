// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "attrib/error.hpp"

namespace attrib {

using nlohmann::json;

double top_k_accuracy(std::span<const TrialOutcome> outcomes, std::size_t k) {
  if (outcomes.empty()) throw InputError("top-k accuracy of an empty outcome set");
  if (k == 0) throw InputError("k must be positive");
  const auto correct = std::count_if(outcomes.begin(), outcomes.end(),
                                     [k](const TrialOutcome& o) { return o.true_rank <= k; });
  return static_cast<double>(correct) / static_cast<double>(outcomes.size());
}

double binomial_stderr(double p, std::size_t n) {
  if (n == 0) throw InputError("standard error needs n > 0");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("proportion must lie in [0, 1]");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

std::string format_accuracy(double accuracy, double stderr_) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f ± %.1f", 100.0 * accuracy, 100.0 * stderr_);
  return buf;
}

MetricsReport make_report(std::span<const TrialOutcome> outcomes, std::span<const std::size_t> ks) {
  MetricsReport report;
  report.n = outcomes.size();
  if (outcomes.empty()) return report;
  for (std::size_t k : ks) {
    const double acc = top_k_accuracy(outcomes, k);
    report.top_k[k] = {acc, binomial_stderr(acc, outcomes.size())};
  }
  report.mean_wall_time_ms = timing_summary(outcomes).mean_ms;
  return report;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

const std::string* meta_value(const TrialOutcome& o, const std::string& key) {
  auto it = o.trial.query_doc.meta.find(key);
  return it == o.trial.query_doc.meta.end() ? nullptr : &it->second;
}

MetricsReport grouped(std::span<const TrialOutcome> outcomes,
                      const std::map<std::string, std::vector<TrialOutcome>>& parts,
                      std::span<const std::size_t> ks) {
  MetricsReport report = make_report(outcomes, ks);
  for (const auto& [label, members] : parts) report.groups[label] = make_report(members, ks);
  return report;
}

}  // namespace

GroupBin GroupBin::range(std::string label, double low, double high) {
  if (!(low <= high)) throw InputError("bin '" + label + "': low exceeds high");
  GroupBin bin;
  bin.label = std::move(label);
  bin.low = low;
  bin.high = high;
  return bin;
}

GroupBin GroupBin::category(std::string label, std::vector<std::string> values) {
  GroupBin bin;
  bin.label = std::move(label);
  for (auto& v : values) bin.categories.push_back(lower(std::move(v)));
  return bin;
}

bool GroupBin::matches(const std::string& value) const {
  if (is_range()) {
    auto v = parse_number(value);
    return v && *v >= *low && *v <= *high;
  }
  return std::find(categories.begin(), categories.end(), lower(value)) != categories.end();
}

std::vector<GroupBin> default_bins(const std::string& key) {
  if (key == "gender") {
    return {GroupBin::category("Male", {"male", "m"}),
            GroupBin::category("Female", {"female", "f"})};
  }
  if (key == "age") {
    return {GroupBin::range("[13-17]", 13, 17), GroupBin::range("[18-34]", 18, 34),
            GroupBin::range("[35-44]", 35, 44), GroupBin::range("[45-48]", 45, 48)};
  }
  if (key == "rating") {
    return {GroupBin::range("[1-2]", 1, 2), GroupBin::range("[3-4]", 3, 4),
            GroupBin::range("[5-6]", 5, 6), GroupBin::range("[7-8]", 7, 8),
            GroupBin::range("[9-10]", 9, 10)};
  }
  return {};
}

MetricsReport group_report(std::span<const TrialOutcome> outcomes, const std::string& key,
                           std::span<const GroupBin> bins, std::span<const std::size_t> ks) {
  if (bins.empty()) throw InputError("group report needs at least one bin");
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].label == kUnknownGroup) throw InputError("bin label 'unknown' is reserved");
    for (std::size_t j = i + 1; j < bins.size(); ++j) {
      if (bins[i].label == bins[j].label) throw InputError("duplicate bin label " + bins[i].label);
      if (bins[i].is_range() && bins[j].is_range() && *bins[i].low <= *bins[j].high &&
          *bins[j].low <= *bins[i].high) {
        throw InputError("bins " + bins[i].label + " and " + bins[j].label + " overlap");
      }
    }
  }

  std::map<std::string, std::vector<TrialOutcome>> parts;
  for (const TrialOutcome& o : outcomes) {
    std::string label = kUnknownGroup;
    if (const std::string* value = meta_value(o, key)) {
      for (const GroupBin& bin : bins) {
        if (bin.matches(*value)) {
          label = bin.label;
          break;
        }
      }
    }
    parts[label].push_back(o);
  }
  return grouped(outcomes, parts, ks);
}

MetricsReport group_report_by_value(std::span<const TrialOutcome> outcomes, const std::string& key,
                                    std::span<const std::size_t> ks) {
  std::map<std::string, std::vector<TrialOutcome>> parts;
  for (const TrialOutcome& o : outcomes) {
    const std::string* value = meta_value(o, key);
    parts[value ? *value : std::string(kUnknownGroup)].push_back(o);
  }
  return grouped(outcomes, parts, ks);
}

TimingSummary timing_summary(std::span<const TrialOutcome> outcomes) {
  if (outcomes.empty()) throw InputError("timing summary of an empty outcome set");
  TimingSummary summary;
  for (const TrialOutcome& o : outcomes) {
    summary.per_trial_ms.push_back(o.wall_time_ms);
    summary.total_ms += o.wall_time_ms;
  }
  summary.mean_ms = summary.total_ms / static_cast<double>(outcomes.size());
  return summary;
}

json to_json(const MetricsReport& report, bool include_timing) {
  json top_k = json::object();
  for (const auto& [k, stat] : report.top_k) {
    top_k[std::to_string(k)] = {{"accuracy", stat.accuracy}, {"stderr", stat.stderr_}};
  }
  json out = {{"n", report.n}, {"top_k", std::move(top_k)}};
  if (include_timing) out["mean_wall_time_ms"] = report.mean_wall_time_ms;
  if (!report.groups.empty()) {
    json groups = json::object();
    for (const auto& [label, sub] : report.groups) groups[label] = to_json(sub, include_timing);
    out["groups"] = std::move(groups);
  }
  return out;
}

std::string to_table(const MetricsReport& report, bool include_timing) {
  std::vector<std::pair<std::string, const MetricsReport*>> rows = {{"all", &report}};
  for (const auto& [label, sub] : report.groups) rows.emplace_back(label, &sub);

  std::size_t label_width = 7;
  for (const auto& row : rows) label_width = std::max(label_width, row.first.size() + 2);

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(label_width)) << "group" << std::setw(7) << "n";
  for (const auto& [k, stat] : report.top_k) {
    out << std::setw(16) << ("top-" + std::to_string(k));
  }
  if (include_timing) out << "mean_ms";
  out << '\n';
  for (const auto& [label, sub] : rows) {
    out << std::setw(static_cast<int>(label_width)) << label << std::setw(7) << sub->n;
    for (const auto& [k, stat] : report.top_k) {
      auto it = sub->top_k.find(k);
      if (it == sub->top_k.end()) {
        out << std::setw(16) << "-";
      } else {
        // "±" is two bytes in UTF-8; pad by one extra column.
        out << std::setw(17) << format_accuracy(it->second.accuracy, it->second.stderr_);
      }
    }
    if (include_timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", sub->mean_wall_time_ms);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::ostringstream out;
  out << "num_candidates,top1,top2,top5\n";
  for (const SweepPoint& p : points) {
    out << p.num_candidates;
    for (std::size_t k : {1, 2, 5}) {
      auto it = p.report.top_k.find(k);
      out << ',';
      if (it != p.report.top_k.end()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", it->second.accuracy);
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace attrib
