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

#include "vpush/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "vpush/scene.hpp"

namespace vpush {

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double standard_error(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const auto n = static_cast<double>(v.size());
  return std::sqrt(ss / (n - 1.0) / n);
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("paired_t_test: length mismatch");
  if (a.size() < 2) throw Error("paired_t_test: need at least two pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];

  TTestResult r;
  r.df = static_cast<int>(d.size()) - 1;
  r.mean_difference = mean(d);
  const double se = standard_error(d);
  double scale = 0.0;
  for (double x : d) scale = std::max(scale, std::abs(x));
  // Rounding in b - a can leave a constant shift with a tiny spread.
  if (se <= 1e-12 * scale || scale == 0.0) {
    if (r.mean_difference == 0.0) {
      r.flag = TTestResult::Flag::degenerate;
      r.p = 1.0;
    } else {
      r.flag = TTestResult::Flag::exact_separation;
      r.t = std::copysign(std::numeric_limits<double>::infinity(), r.mean_difference);
      r.p = 0.0;
    }
    return r;
  }
  r.t = r.mean_difference / se;
  const boost::math::students_t dist(r.df);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

}  // namespace vpush
