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

// Shared generators for the unit tests and the acceptance binary.

#pragma once

#include <cstdint>
#include <random>

#include "stag/stream.hpp"

namespace stag::testing {

/// Random non-empty stream with strictly increasing timestamps (possibly negative),
/// 1-3 axes and values spanning many magnitudes, including signed zeros
/// and subnormals.
inline SensorStream random_stream(std::mt19937_64& rng, std::size_t max_len = 64) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::size_t> naxes(1, 3);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<std::int64_t> start(-1'000'000'000'000LL, 1'000'000'000'000LL);
  std::uniform_int_distribution<std::int64_t> step(1, 50'000'000);
  std::uniform_int_distribution<int> exponent(-320, 300);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> special(0, 19);

  SensorStream s{static_cast<SensorKind>(kind(rng)), {}, {}, 0.0};
  const std::size_t n = len(rng);
  s.axes.assign(naxes(rng), {});
  std::int64_t t = start(rng);
  for (std::size_t i = 0; i < n; ++i) {
    t += step(rng);
    s.timestamps_ns.push_back(t);
    for (auto& a : s.axes) {
      double v = std::ldexp(mant(rng), exponent(rng) / 8);
      switch (special(rng)) {
        case 0: v = 0.0; break;
        case 1: v = -0.0; break;
        case 2: v = std::ldexp(mant(rng), exponent(rng)); break;
        case 3: v = 4.9e-324; break;
        default: break;
      }
      a.push_back(v);
    }
  }
  s.nominal_rate = std::uniform_real_distribution<double>(1.0, 5000.0)(rng);
  return s;
}

/// Regular stream at `rate` with 3 axes of seeded noise.
inline SensorStream regular_stream(std::size_t n, double rate, std::uint64_t seed, SensorKind kind = SensorKind::accel,
                                   double phase = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SensorStream s{kind, {}, std::vector<std::vector<double>>(3), rate};
  for (std::size_t i = 0; i < n; ++i) {
    s.timestamps_ns.push_back(std::llround((static_cast<double>(i) + phase) * 1e9 / rate));
    for (auto& a : s.axes) a.push_back(g(rng));
  }
  return s;
}

}  // namespace stag::testing
