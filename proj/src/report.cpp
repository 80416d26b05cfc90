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

#include "vpush/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace vpush {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

MetricSummary summary_of(const std::vector<double>& v) {
  return {mean(v), standard_error(v)};
}

const char* flag_name(TTestResult::Flag f) {
  switch (f) {
    case TTestResult::Flag::none: return "none";
    case TTestResult::Flag::exact_separation: return "exact_separation";
    case TTestResult::Flag::degenerate: return "degenerate";
  }
  return "none";
}

nlohmann::json metric_json(const MetricSummary& m) {
  return {{"mean", m.mean}, {"standard_error", m.standard_error}};
}

}  // namespace

double row_metric(const PipelineRow& row, const std::string& metric) {
  static const std::map<std::string, double PipelineRow::*> kDouble = {
      {"entropy_bootstrap", &PipelineRow::entropy_bootstrap},
      {"entropy_vpp", &PipelineRow::entropy_vpp},
      {"entropy_final", &PipelineRow::entropy_final},
      {"reduction_vpp", &PipelineRow::reduction_vpp},
      {"reduction_total", &PipelineRow::reduction_total},
      {"reduction_push", &PipelineRow::reduction_push},
      {"displacement_mean_cm", &PipelineRow::displacement_mean_cm},
      {"displacement_total_cm", &PipelineRow::displacement_total_cm},
      {"plan_ms", &PipelineRow::plan_ms},
      {"push_ms", &PipelineRow::push_ms},
  };
  static const std::map<std::string, int PipelineRow::*> kInt = {
      {"objects", &PipelineRow::objects},     {"iterations", &PipelineRow::iterations},
      {"drops", &PipelineRow::drops},         {"vpp_steps", &PipelineRow::vpp_steps},
      {"total_steps", &PipelineRow::total_steps},
  };
  if (auto it = kDouble.find(metric); it != kDouble.end()) return row.*(it->second);
  if (auto it = kInt.find(metric); it != kInt.end()) return row.*(it->second);
  throw Error("row_metric: unknown metric " + metric);
}

MethodSummary summarize(const std::vector<PipelineRow>& rows) {
  MethodSummary s;
  std::vector<double> vpp, total, push, disp, iters, steps, plan, pushms;
  for (const PipelineRow& r : rows) {
    if (!r.error.empty()) {
      ++s.errors;
      continue;
    }
    ++s.scenes;
    vpp.push_back(r.reduction_vpp);
    total.push_back(r.reduction_total);
    push.push_back(r.reduction_push);
    disp.push_back(r.displacement_mean_cm);
    iters.push_back(r.iterations);
    steps.push_back(r.total_steps);
    plan.push_back(r.plan_ms);
    pushms.push_back(r.push_ms);
    s.drops += r.drops;
  }
  s.reduction_vpp = summary_of(vpp);
  s.reduction_total = summary_of(total);
  s.reduction_push = summary_of(push);
  s.displacement_cm = summary_of(disp);
  s.iterations = summary_of(iters);
  s.steps = summary_of(steps);
  s.plan_ms = summary_of(plan);
  s.push_ms = summary_of(pushms);
  return s;
}

std::string planner_label(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::fixed3p: return "fixed3p";
    case PlannerKind::random: return "random";
    case PlannerKind::greedy: return "greedy-analog";
    case PlannerKind::global: return "global-analog";
  }
  return "unknown";
}

BenchReport make_report(std::vector<MethodResult> methods,
                        const std::vector<std::string>& metrics) {
  BenchReport report;
  for (MethodResult& m : methods) m.summary = summarize(m.rows);
  report.methods = std::move(methods);
  if (report.methods.size() < 2) return report;

  const MethodResult& base = report.methods.front();
  for (std::size_t k = 1; k < report.methods.size(); ++k) {
    const MethodResult& other = report.methods[k];
    std::map<std::uint64_t, const PipelineRow*> by_seed;
    for (const PipelineRow& r : other.rows) {
      if (r.error.empty()) by_seed[r.seed] = &r;
    }
    for (const std::string& metric : metrics) {
      std::vector<double> a, b;
      for (const PipelineRow& r : base.rows) {
        auto it = by_seed.find(r.seed);
        if (!r.error.empty() || it == by_seed.end()) continue;
        a.push_back(row_metric(r, metric));
        b.push_back(row_metric(*it->second, metric));
      }
      if (a.size() < 2) continue;
      report.comparisons.push_back({metric, base.label, other.label, paired_t_test(a, b)});
    }
  }
  return report;
}

void write_rows_csv(std::ostream& os, const BenchReport& report, bool timing) {
  os << "method,seed,objects,entropy_bootstrap,entropy_vpp,entropy_final,reduction_vpp,"
        "reduction_total,reduction_push,iterations,drops,displacement_mean_cm,"
        "displacement_total_cm,vpp_steps,total_steps,error";
  if (timing) os << ",plan_ms,push_ms";
  os << '\n';
  for (const MethodResult& m : report.methods) {
    for (const PipelineRow& r : m.rows) {
      os << csv_field(m.label) << ',' << r.seed << ',' << r.objects << ','
         << num(r.entropy_bootstrap) << ',' << num(r.entropy_vpp) << ','
         << num(r.entropy_final) << ',' << num(r.reduction_vpp) << ','
         << num(r.reduction_total) << ',' << num(r.reduction_push) << ',' << r.iterations
         << ',' << r.drops << ',' << num(r.displacement_mean_cm) << ','
         << num(r.displacement_total_cm) << ',' << r.vpp_steps << ',' << r.total_steps << ','
         << csv_field(r.error);
      if (timing) os << ',' << num(r.plan_ms) << ',' << num(r.push_ms);
      os << '\n';
    }
  }
}

void write_summary_csv(std::ostream& os, const BenchReport& report) {
  os << "method,scenes,errors,reduction_vpp,reduction_vpp_se,reduction_total,"
        "reduction_total_se,reduction_push,reduction_push_se,displacement_cm,"
        "displacement_cm_se,iterations,iterations_se,drops\n";
  for (const MethodResult& m : report.methods) {
    const MethodSummary& s = m.summary;
    os << csv_field(m.label) << ',' << s.scenes << ',' << s.errors << ','
       << num(s.reduction_vpp.mean) << ',' << num(s.reduction_vpp.standard_error) << ','
       << num(s.reduction_total.mean) << ',' << num(s.reduction_total.standard_error) << ','
       << num(s.reduction_push.mean) << ',' << num(s.reduction_push.standard_error) << ','
       << num(s.displacement_cm.mean) << ',' << num(s.displacement_cm.standard_error) << ','
       << num(s.iterations.mean) << ',' << num(s.iterations.standard_error) << ','
       << s.drops << '\n';
  }
}

nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json j;
  j["methods"] = nlohmann::json::array();
  for (const MethodResult& m : report.methods) {
    const MethodSummary& s = m.summary;
    j["methods"].push_back({{"label", m.label},
                            {"scenes", s.scenes},
                            {"errors", s.errors},
                            {"reduction_vpp", metric_json(s.reduction_vpp)},
                            {"reduction_total", metric_json(s.reduction_total)},
                            {"reduction_push", metric_json(s.reduction_push)},
                            {"displacement_cm", metric_json(s.displacement_cm)},
                            {"iterations", metric_json(s.iterations)},
                            {"steps", metric_json(s.steps)},
                            {"drops", s.drops},
                            {"plan_ms", metric_json(s.plan_ms)},
                            {"push_ms", metric_json(s.push_ms)}});
  }
  j["comparisons"] = nlohmann::json::array();
  for (const Comparison& c : report.comparisons) {
    j["comparisons"].push_back({{"metric", c.metric},
                                {"baseline", c.baseline},
                                {"method", c.method},
                                {"t", std::isfinite(c.test.t) ? nlohmann::json(c.test.t)
                                                              : nlohmann::json(nullptr)},
                                {"p", c.test.p},
                                {"df", c.test.df},
                                {"mean_difference", c.test.mean_difference},
                                {"flag", flag_name(c.test.flag)}});
  }
  return j;
}

}  // namespace vpush
