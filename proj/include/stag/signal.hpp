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
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "stag/error.hpp"
#include "stag/stats.hpp"

namespace stag {

struct NormStats {
  double mean = 0.0;
  double std = 1.0;  // population

  bool operator==(const NormStats&) const = default;
};

struct Normalized {
  std::vector<double> values;
  NormStats stats;
};

/// (x - mean) / std. With `stats` given (test time) those are applied;
/// otherwise they are computed from `x` (train time).
inline Normalized znormalize(std::span<const double> x, std::optional<NormStats> stats = std::nullopt) {
  if (x.size() < 2) throw ArgumentError("znormalize needs at least 2 samples");
  NormStats s;
  if (stats) {
    s = *stats;
    if (!(s.std > 0.0) || !std::isfinite(s.mean) || !std::isfinite(s.std)) {
      throw DegenerateInputError("normalization std must be positive and finite");
    }
  } else {
    s.mean = mean(x);
    s.std = population_std(x, s.mean);
    if (!(s.std > 0.0)) throw DegenerateInputError("zero variance: cannot z-normalize");
  }
  Normalized out{std::vector<double>(x.size()), s};
  for (std::size_t i = 0; i < x.size(); ++i) out.values[i] = (x[i] - s.mean) / s.std;
  return out;
}

inline std::vector<double> denormalize(std::span<const double> z, const NormStats& s) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] * s.std + s.mean;
  return out;
}

inline constexpr std::size_t kBaselineWindow = 51;

/// Centered moving average over `window` samples, truncated at the edges.
inline std::vector<double> moving_average(std::span<const double> x, std::size_t window = kBaselineWindow) {
  const std::size_t n = x.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    double s = 0.0;
    for (std::size_t j = lo; j < hi; ++j) s += x[j];
    out[i] = s / static_cast<double>(hi - lo);
  }
  return out;
}

/// Removes the moving-average baseline (gravity, drift): a high-pass step.
inline std::vector<double> noise_reduce(std::span<const double> x) {
  if (x.size() < 8) throw ArgumentError("noise_reduce needs at least 8 samples");
  const auto base = moving_average(x);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - base[i];
  return out;
}

inline double power(std::span<const double> x) {
  if (x.empty()) throw EmptyInputError("power of empty sequence");
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

/// 10 log10(P_signal / P_noise); +infinity when the noise has no power.
inline double snr_db(std::span<const double> signal, std::span<const double> noise) {
  if (signal.size() < 2 || noise.size() < 2) throw ArgumentError("snr_db needs at least 2 samples");
  const double pn = power(noise);
  if (pn == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(power(signal) / pn);
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("pearson: length mismatch");
  if (a.size() < 2) throw ArgumentError("pearson needs at least 2 samples");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw DegenerateInputError("pearson: zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// max over lags in [-max_lag, max_lag] of |pearson(a[i], b[i + lag])| on
/// the overlapping part of the two sequences.
inline double max_lag_abs_correlation(std::span<const double> a, std::span<const double> b, std::size_t max_lag) {
  const std::size_t n = std::min(a.size(), b.size());
  double best = 0.0;
  for (long lag = -static_cast<long>(max_lag); lag <= static_cast<long>(max_lag); ++lag) {
    const std::size_t shift = static_cast<std::size_t>(std::abs(lag));
    if (n < shift + 2) continue;
    const std::size_t len = n - shift;
    const auto sa = lag >= 0 ? a.subspan(0, len) : a.subspan(shift, len);
    const auto sb = lag >= 0 ? b.subspan(shift, len) : b.subspan(0, len);
    best = std::max(best, std::abs(pearson(sa, sb)));
  }
  return best;
}

struct Periodogram {
  std::vector<double> frequency;  // Hz, bins 0..n/2
  std::vector<double> power;

  std::size_t bin_of(double f) const {
    const double df = frequency.size() > 1 ? frequency[1] - frequency[0] : 1.0;
    return std::min(frequency.size() - 1, static_cast<std::size_t>(std::llround(f / df)));
  }

  std::size_t peak_bin() const {
    return static_cast<std::size_t>(std::max_element(power.begin() + 1, power.end()) - power.begin());
  }
};

/// Hann-windowed periodogram by direct DFT, mean removed.
inline Periodogram periodogram(std::span<const double> x, double rate) {
  const std::size_t n = x.size();
  if (n < 4) throw ArgumentError("periodogram needs at least 4 samples");
  const double m = mean(x);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    w[i] = (x[i] - m) * hann;
  }
  Periodogram p;
  const std::size_t bins = n / 2 + 1;
  p.frequency.resize(bins);
  p.power.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    double re = 0.0;
    double im = 0.0;
    const double step = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = step * static_cast<double>(i);
      re += w[i] * std::cos(ang);
      im -= w[i] * std::sin(ang);
    }
    p.frequency[k] = static_cast<double>(k) * rate / static_cast<double>(n);
    p.power[k] = (re * re + im * im) / static_cast<double>(n);
  }
  return p;
}

inline double to_db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace stag
