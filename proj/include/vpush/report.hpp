// Copyright 2026 The vpush Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VPUSH_REPORT_HPP
#define VPUSH_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "vpush/pipeline.hpp"
#include "vpush/stats.hpp"

namespace vpush {

struct MetricSummary {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Aggregates over rows without an error.
struct MethodSummary {
  int scenes = 0;
  int errors = 0;
  MetricSummary reduction_vpp;
  MetricSummary reduction_total;
  MetricSummary reduction_push;
  MetricSummary displacement_cm;
  MetricSummary iterations;
  MetricSummary steps;
  int drops = 0;
  MetricSummary plan_ms;
  MetricSummary push_ms;
};

struct MethodResult {
  std::string label;
  std::vector<PipelineRow> rows;
  MethodSummary summary;
};

struct Comparison {
  std::string metric;
  std::string baseline;
  std::string method;
  TTestResult test;
};

struct BenchReport {
  std::vector<MethodResult> methods;
  std::vector<Comparison> comparisons;
};

MethodSummary summarize(const std::vector<PipelineRow>& rows);

/// Report label of a planner. The sampling planners are analogs of the
/// published baselines, not reimplementations.
std::string planner_label(PlannerKind kind);

/// Per-scene metric by column name, e.g. "reduction_total".
double row_metric(const PipelineRow& row, const std::string& metric);

/// Summaries for every method plus paired t-tests of each method against
/// the first one on `metrics`, over the seeds where both succeeded.
BenchReport make_report(std::vector<MethodResult> methods,
                        const std::vector<std::string>& metrics);

/// One line per scene and method. Timing columns come last and can be left
/// out for byte-for-byte comparisons.
void write_rows_csv(std::ostream& os, const BenchReport& report, bool timing = true);
void write_summary_csv(std::ostream& os, const BenchReport& report);
nlohmann::json to_json(const BenchReport& report);

}  // namespace vpush

#endif  // VPUSH_REPORT_HPP
