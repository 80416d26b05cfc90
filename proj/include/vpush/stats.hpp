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

#ifndef VPUSH_STATS_HPP
#define VPUSH_STATS_HPP

#include <span>

namespace vpush {

struct TTestResult {
  enum class Flag {
    none,
    exact_separation,  ///< zero-variance differences with nonzero mean, p = 0
    degenerate,        ///< all differences zero, p = 1
  };

  double t = 0.0;
  double p = 1.0;  ///< two-sided
  int df = 0;
  double mean_difference = 0.0;  ///< mean of b - a
  Flag flag = Flag::none;
};

/// Two-sided paired t-test on b - a. Throws Error on unequal lengths or
/// fewer than two pairs.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> v);
/// Standard error of the mean; 0 for fewer than two values.
double standard_error(std::span<const double> v);

}  // namespace vpush

#endif  // VPUSH_STATS_HPP
