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
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stag/error.hpp"

namespace stag {

enum class SensorKind { accel, gyro, mag };

enum class Axis : std::size_t { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAllAxes = {Axis::x, Axis::y, Axis::z};

inline std::string_view to_string(SensorKind kind) {
  switch (kind) {
    case SensorKind::accel: return "acc";
    case SensorKind::gyro: return "gyro";
    case SensorKind::mag: return "mag";
  }
  return "acc";
}

inline std::optional<SensorKind> parse_sensor_kind(std::string_view s) {
  if (s == "acc") return SensorKind::accel;
  if (s == "gyro") return SensorKind::gyro;
  if (s == "mag") return SensorKind::mag;
  return std::nullopt;
}

inline char axis_name(Axis a) { return "xyz"[static_cast<std::size_t>(a)]; }

inline std::optional<Axis> parse_axis(std::string_view s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  return std::nullopt;
}

inline constexpr double kNanosPerSecond = 1e9;

/// Timestamped sample sequence from one sensor. Axis 0 is x; a stream
/// holds 1 to 3 axes, each the same length as `timestamps_ns`.
struct SensorStream {
  SensorKind kind = SensorKind::accel;
  std::vector<std::int64_t> timestamps_ns;
  std::vector<std::vector<double>> axes;
  double nominal_rate = 0.0;  // Hz

  std::size_t size() const noexcept { return timestamps_ns.size(); }
  std::size_t axis_count() const noexcept { return axes.size(); }
  bool empty() const noexcept { return timestamps_ns.empty(); }

  const std::vector<double>& axis(Axis a) const {
    const auto i = static_cast<std::size_t>(a);
    if (i >= axes.size()) {
      throw ArgumentError(std::string("stream has no ") + axis_name(a) + " axis");
    }
    return axes[i];
  }

  double time_s(std::size_t i) const {
    return static_cast<double>(timestamps_ns[i]) / kNanosPerSecond;
  }

  bool operator==(const SensorStream&) const = default;
};

/// Throws ArgumentError unless timestamps are strictly increasing, every
/// axis matches the timestamp count, and the axis count is 1..3.
inline void validate(const SensorStream& s) {
  if (s.axes.empty() || s.axes.size() > 3) {
    throw ArgumentError("stream must have 1 to 3 axes");
  }
  for (const auto& a : s.axes) {
    if (a.size() != s.timestamps_ns.size()) {
      throw ArgumentError("axis length differs from timestamp count");
    }
  }
  const auto bad = std::adjacent_find(s.timestamps_ns.begin(), s.timestamps_ns.end(),
                                      [](auto a, auto b) { return b <= a; });
  if (bad != s.timestamps_ns.end()) {
    throw ArgumentError("timestamps not strictly increasing at index " +
                        std::to_string(bad - s.timestamps_ns.begin() + 1));
  }
}

/// Subsequence of samples [first, last).
inline SensorStream slice(const SensorStream& s, std::size_t first, std::size_t last) {
  last = std::min(last, s.size());
  first = std::min(first, last);
  SensorStream out{s.kind, {}, {}, s.nominal_rate};
  out.timestamps_ns.assign(s.timestamps_ns.begin() + first, s.timestamps_ns.begin() + last);
  for (const auto& a : s.axes) out.axes.emplace_back(a.begin() + first, a.begin() + last);
  return out;
}

}  // namespace stag
