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

#include <algorithm>
#include <span>
#include <vector>

#include "stag/error.hpp"

namespace stag {

/// Cubic spline with not-a-knot end conditions: the third derivative is
/// continuous at the second and second-to-last knots, so cubic data is
/// reproduced exactly. Needs at least 4 strictly increasing knots.
class CubicSpline {
 public:
  CubicSpline(std::span<const double> x, std::span<const double> y) : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    const std::size_t n = x_.size();
    if (n != y_.size()) throw ArgumentError("spline knots and values differ in length");
    if (n < 4) throw ArgumentError("not-a-knot spline needs at least 4 points");
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!(x_[i + 1] > x_[i])) throw ArgumentError("spline knots must be strictly increasing");
    }
    solve_second_derivatives();
  }

  double operator()(double t) const {
    const std::size_t n = x_.size();
    std::size_t i = 0;
    if (t >= x_[n - 2]) {
      i = n - 2;
    } else if (t > x_[0]) {
      i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin()) - 1;
    }
    const double h = x_[i + 1] - x_[i];
    const double a = x_[i + 1] - t;
    const double b = t - x_[i];
    return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) + (y_[i] / h - m_[i] * h / 6.0) * a +
           (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
  }

  const std::vector<double>& second_derivatives() const { return m_; }

 private:
  // Interior equations for M_1..M_{n-2}
  //   h_{i-1} M_{i-1} + 2(h_{i-1}+h_i) M_i + h_i M_{i+1} = 6 (slope_i - slope_{i-1})
  // with M_0 and M_{n-1} eliminated through the not-a-knot conditions
  //   h_1 M_0 - (h_0+h_1) M_1 + h_0 M_2 = 0 (and the mirror at the end),
  // which keeps the system tridiagonal.
  void solve_second_derivatives() {
    const std::size_t n = x_.size();
    const std::size_t k = n - 2;  // unknowns M_1..M_{n-2}, k >= 2
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

    std::vector<double> sub(k, 0.0);
    std::vector<double> diag(k, 0.0);
    std::vector<double> sup(k, 0.0);
    std::vector<double> rhs(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t i = j + 1;
      sub[j] = h[i - 1];
      diag[j] = 2.0 * (h[i - 1] + h[i]);
      sup[j] = h[i];
      rhs[j] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
    }
    const double h0 = h[0];
    const double h1 = h[1];
    diag[0] = (h0 + h1) * (h0 + 2.0 * h1) / h1;
    sup[0] = (h1 * h1 - h0 * h0) / h1;
    const double a = h[n - 3];
    const double b = h[n - 2];
    sub[k - 1] = (a * a - b * b) / a;
    diag[k - 1] = (a + b) * (2.0 * a + b) / a;

    // Thomas algorithm.
    for (std::size_t j = 1; j < k; ++j) {
      const double w = sub[j] / diag[j - 1];
      diag[j] -= w * sup[j - 1];
      rhs[j] -= w * rhs[j - 1];
    }
    std::vector<double> mi(k);
    mi[k - 1] = rhs[k - 1] / diag[k - 1];
    for (std::size_t j = k - 1; j-- > 0;) mi[j] = (rhs[j] - sup[j] * mi[j + 1]) / diag[j];

    m_.assign(n, 0.0);
    std::copy(mi.begin(), mi.end(), m_.begin() + 1);
    m_[0] = ((h0 + h1) * m_[1] - h0 * m_[2]) / h1;
    m_[n - 1] = ((a + b) * m_[n - 2] - b * m_[n - 3]) / a;
  }

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

}  // namespace stag
