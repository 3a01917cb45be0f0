// Copyright 2026 The stag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <span>

#include "stag/error.hpp"

namespace stag {

/// Running mean m += (x - m) / k. Exact for constant input, which keeps
/// degenerate fits (constant targets, single-leaf models) exact.
inline double mean(std::span<const double> x) {
  if (x.empty()) throw EmptyInputError("mean of empty sequence");
  double m = 0.0;
  double k = 0.0;
  for (double v : x) {
    k += 1.0;
    m += (v - m) / k;
  }
  return m;
}

inline double mean_squared_error(std::span<const double> y, std::span<const double> pred) {
  if (y.size() != pred.size()) throw ArgumentError("length mismatch");
  if (y.empty()) throw EmptyInputError("mse of empty sequence");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - pred[i];
    s += d * d;
  }
  return s / static_cast<double>(y.size());
}

/// Coefficient of determination, 1 - SS_res / SS_tot. Undefined (throws)
/// for constant `y`.
inline double r_squared(std::span<const double> y, std::span<const double> pred) {
  if (y.size() != pred.size()) throw ArgumentError("length mismatch");
  if (y.size() < 2) throw EmptyInputError("r_squared needs at least 2 values");
  const double m = mean(y);
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - pred[i];
    const double t = y[i] - m;
    ss_res += r * r;
    ss_tot += t * t;
  }
  if (ss_tot == 0.0) throw DegenerateInputError("r_squared of constant targets");
  return 1.0 - ss_res / ss_tot;
}

/// Population standard deviation about `m`.
inline double population_std(std::span<const double> x, double m) {
  if (x.empty()) throw EmptyInputError("std of empty sequence");
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace stag
