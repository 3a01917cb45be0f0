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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "stag/error.hpp"
#include "stag/stream.hpp"

namespace stag {

// ---------------------------------------------------------------------------
// Sensor CSV
//
//   # nominal_rate_hz=400
//   timestamp_ns,sensor,x,y,z
//   2500000,gyro,0.0125,-0.003,
//
// The leading comment is optional on read; without it the rate is
// estimated from the median timestamp delta. Missing axes are empty.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kCsvHeader = "timestamp_ns,sensor,x,y,z";

namespace detail {

inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return v;
}

}  // namespace detail

inline void write_csv(const SensorStream& stream, std::ostream& os) {
  validate(stream);
  os << "# nominal_rate_hz=" << detail::format_double(stream.nominal_rate) << '\n';
  os << kCsvHeader << '\n';
  const std::string kind(to_string(stream.kind));
  std::string line;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    line = std::to_string(stream.timestamps_ns[i]);
    line += ',';
    line += kind;
    for (std::size_t a = 0; a < 3; ++a) {
      line += ',';
      if (a < stream.axis_count()) {
        const double v = stream.axes[a][i];
        if (!std::isfinite(v)) throw ArgumentError("non-finite sample at index " + std::to_string(i));
        line += detail::format_double(v);
      }
    }
    line += '\n';
    os << line;
  }
}

inline void write_csv(const SensorStream& stream, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open " + path.string() + " for writing");
  write_csv(stream, os);
  if (!os) throw InputError("write failed: " + path.string());
}

inline SensorStream read_csv(std::istream& is) {
  SensorStream out;
  std::optional<double> rate;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::optional<std::size_t> axis_count;

  while (std::getline(is, raw)) {
    ++line_no;
    const std::string_view line = detail::trim_cr(raw);
    if (!header_seen) {
      if (line.empty()) continue;
      if (line.front() == '#') {
        constexpr std::string_view key = "# nominal_rate_hz=";
        if (line.starts_with(key)) {
          rate = detail::parse_number<double>(line.substr(key.size()));
          if (!rate || !(*rate > 0.0)) throw ParseError(line_no, "bad nominal rate");
        }
        continue;
      }
      if (line != kCsvHeader) throw ParseError(line_no, "expected header '" + std::string(kCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 5) throw ParseError(line_no, "expected 5 fields, got " + std::to_string(f.size()));
    const auto ts = detail::parse_number<std::int64_t>(f[0]);
    if (!ts) throw ParseError(line_no, "bad timestamp '" + std::string(f[0]) + "'");
    const auto kind = parse_sensor_kind(f[1]);
    if (!kind) throw ParseError(line_no, "unknown sensor kind '" + std::string(f[1]) + "'");

    std::size_t present = 0;
    while (present < 3 && !f[2 + present].empty()) ++present;
    for (std::size_t a = present; a < 3; ++a) {
      if (!f[2 + a].empty()) throw ParseError(line_no, "axis values must be a prefix of x,y,z");
    }
    if (present == 0) throw ParseError(line_no, "row has no axis values");

    if (!axis_count) {
      axis_count = present;
      out.kind = *kind;
      out.axes.assign(present, {});
    } else {
      if (present != *axis_count) throw ParseError(line_no, "axis count differs from first row");
      if (*kind != out.kind) throw ParseError(line_no, "sensor kind differs from first row");
    }
    if (!out.timestamps_ns.empty() && *ts <= out.timestamps_ns.back()) {
      throw ParseError(line_no, "timestamp " + std::to_string(*ts) + " not after previous row");
    }
    out.timestamps_ns.push_back(*ts);
    for (std::size_t a = 0; a < present; ++a) {
      const auto v = detail::parse_number<double>(f[2 + a]);
      if (!v || !std::isfinite(*v)) throw ParseError(line_no, "bad value '" + std::string(f[2 + a]) + "'");
      out.axes[a].push_back(*v);
    }
  }
  if (!header_seen) throw ParseError(line_no + 1, "missing header");
  if (!axis_count) out.axes.assign(3, {});

  if (rate) {
    out.nominal_rate = *rate;
  } else if (out.size() >= 2) {
    std::vector<std::int64_t> d(out.size() - 1);
    std::adjacent_difference(out.timestamps_ns.begin() + 1, out.timestamps_ns.end(), d.begin());
    d[0] = out.timestamps_ns[1] - out.timestamps_ns[0];
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    out.nominal_rate = kNanosPerSecond / static_cast<double>(d[d.size() / 2]);
  }
  return out;
}

inline SensorStream read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open " + path.string());
  return read_csv(is);
}

// ---------------------------------------------------------------------------
// Resampling and bifurcation
// ---------------------------------------------------------------------------

/// Keeps the sample nearest each ideal tick t0 + k/target (earlier sample
/// on ties). A sample picked by two ticks is kept once.
inline SensorStream downsample(const SensorStream& stream, double target) {
  if (!(target > 0.0)) throw ArgumentError("target rate must be positive");
  if (target > stream.nominal_rate) {
    throw ArgumentError("target rate exceeds the stream's nominal rate");
  }
  if (target == stream.nominal_rate || stream.empty()) {
    SensorStream copy = stream;
    copy.nominal_rate = target;
    return copy;
  }
  const auto& ts = stream.timestamps_ns;
  const double t0 = static_cast<double>(ts.front());
  const double last = static_cast<double>(ts.back());
  const double period = kNanosPerSecond / target;

  std::vector<std::size_t> keep;
  std::size_t j = 0;
  for (std::size_t k = 0;; ++k) {
    const double tick = t0 + static_cast<double>(k) * period;
    if (tick > last) break;
    while (j + 1 < ts.size() &&
           std::abs(static_cast<double>(ts[j + 1]) - tick) < std::abs(static_cast<double>(ts[j]) - tick)) {
      ++j;
    }
    if (keep.empty() || keep.back() != j) keep.push_back(j);
  }

  SensorStream out{stream.kind, {}, std::vector<std::vector<double>>(stream.axis_count()), target};
  out.timestamps_ns.reserve(keep.size());
  for (std::size_t i : keep) {
    out.timestamps_ns.push_back(ts[i]);
    for (std::size_t a = 0; a < stream.axis_count(); ++a) out.axes[a].push_back(stream.axes[a][i]);
  }
  return out;
}

/// Positions 0, 2, 4, ... of the high-rate accelerometer become the
/// retained half-rate capture (`odd_accel`); positions 1, 3, 5, ... are the
/// withheld targets (`even_accel`). The naming follows the 1-based
/// convention: the first sample is "odd".
struct BifurcatedSet {
  SensorStream odd_accel;
  SensorStream even_accel;
  SensorStream gyro;
};

namespace detail {

inline std::pair<SensorStream, SensorStream> split_parity(const SensorStream& s) {
  const double half = s.nominal_rate / 2.0;
  SensorStream odd{s.kind, {}, std::vector<std::vector<double>>(s.axis_count()), half};
  SensorStream even = odd;
  for (std::size_t i = 0; i < s.size(); ++i) {
    SensorStream& dst = (i % 2 == 0) ? odd : even;
    dst.timestamps_ns.push_back(s.timestamps_ns[i]);
    for (std::size_t a = 0; a < s.axis_count(); ++a) dst.axes[a].push_back(s.axes[a][i]);
  }
  return {std::move(odd), std::move(even)};
}

}  // namespace detail

/// Splits a high-rate accelerometer stream into input and target halves.
/// A gyroscope recorded at the same rate contributes its positions 1, 3,
/// 5, ... (the samples at the withheld instants); a gyroscope already at
/// the half rate is kept as is.
inline BifurcatedSet bifurcate(const SensorStream& accel, const SensorStream& gyro) {
  if (accel.size() < 4) throw ArgumentError("bifurcate needs at least 4 accel samples");
  validate(accel);
  auto [odd, even] = detail::split_parity(accel);
  SensorStream g = gyro;
  if (gyro.nominal_rate == accel.nominal_rate && gyro.nominal_rate > 0.0) {
    g = detail::split_parity(gyro).second;
  }
  return {std::move(odd), std::move(even), std::move(g)};
}

/// Inverse of the parity split: odd[0], even[0], odd[1], even[1], ...
inline SensorStream interleave(const SensorStream& odd, const SensorStream& even) {
  if (odd.size() < even.size() || odd.size() - even.size() > 1) {
    throw ArgumentError("interleave needs |odd| - |even| in {0, 1}");
  }
  if (odd.axis_count() != even.axis_count()) throw ArgumentError("axis count mismatch");
  SensorStream out{odd.kind, {}, std::vector<std::vector<double>>(odd.axis_count()), odd.nominal_rate * 2.0};
  out.timestamps_ns.reserve(odd.size() + even.size());
  for (std::size_t i = 0; i < odd.size(); ++i) {
    out.timestamps_ns.push_back(odd.timestamps_ns[i]);
    for (std::size_t a = 0; a < odd.axis_count(); ++a) out.axes[a].push_back(odd.axes[a][i]);
    if (i < even.size()) {
      out.timestamps_ns.push_back(even.timestamps_ns[i]);
      for (std::size_t a = 0; a < odd.axis_count(); ++a) out.axes[a].push_back(even.axes[a][i]);
    }
  }
  validate(out);
  return out;
}

/// Cuts an aligned high-rate accelerometer recording and its gyroscope into
/// consecutive segments of `samples_per_segment` accel samples (rounded up
/// to even) and bifurcates each one. Gyro samples are assigned by time.
/// A trailing remainder shorter than 4 samples is dropped.
inline std::vector<BifurcatedSet> segment_recording(const SensorStream& accel, const SensorStream& gyro,
                                                    std::size_t samples_per_segment) {
  if (samples_per_segment < 4) throw ArgumentError("segments need at least 4 samples");
  samples_per_segment += samples_per_segment % 2;
  std::vector<BifurcatedSet> out;
  for (std::size_t first = 0; first + 4 <= accel.size(); first += samples_per_segment) {
    const std::size_t last = std::min(first + samples_per_segment, accel.size());
    const auto a = slice(accel, first, last);
    const std::int64_t lo = accel.timestamps_ns[first];
    const std::int64_t hi = last < accel.size() ? accel.timestamps_ns[last]
                                                : std::numeric_limits<std::int64_t>::max();
    const auto& gt = gyro.timestamps_ns;
    const auto gfirst = static_cast<std::size_t>(std::lower_bound(gt.begin(), gt.end(), lo) - gt.begin());
    const auto glast = static_cast<std::size_t>(std::lower_bound(gt.begin(), gt.end(), hi) - gt.begin());
    out.push_back(bifurcate(a, slice(gyro, gfirst, glast)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dataset split
// ---------------------------------------------------------------------------

struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

/// Part sizes by largest-remainder apportionment (ties go to the earlier
/// part). Parts with a positive ratio are never left empty: a part that
/// rounds to zero takes one item from the largest part.
inline std::array<std::size_t, 3> apportion(std::size_t count, const std::array<double, 3>& ratios) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw ArgumentError("split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("split ratios must sum to 1");

  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double quota = static_cast<double>(count) * ratios[i];
    // Snap quotas that are integers up to rounding (36000 * 0.7).
    const double snapped = std::round(quota);
    const double q = std::abs(quota - snapped) < 1e-6 ? snapped : quota;
    sizes[i] = static_cast<std::size_t>(std::floor(q));
    remainder[i] = q - std::floor(q);
    assigned += sizes[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < count; ++k, ++assigned) ++sizes[order[k % 3]];

  for (std::size_t i = 0; i < 3; ++i) {
    if (ratios[i] > 0.0 && sizes[i] == 0) {
      const auto donor = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
      if (sizes[donor] > 1) {
        --sizes[donor];
        ++sizes[i];
      }
    }
  }
  return sizes;
}

/// Seeded shuffle of [0, count) cut contiguously into train/validation/test.
inline DatasetSplit split_dataset(std::size_t count, const std::array<double, 3>& ratios, std::uint64_t seed) {
  if (count < 3) throw ArgumentError("need at least 3 recordings to split");
  const auto sizes = apportion(count, ratios);
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  DatasetSplit s;
  s.seed = seed;
  auto it = idx.begin();
  s.train.assign(it, it + static_cast<std::ptrdiff_t>(sizes[0]));
  it += static_cast<std::ptrdiff_t>(sizes[0]);
  s.validation.assign(it, it + static_cast<std::ptrdiff_t>(sizes[1]));
  it += static_cast<std::ptrdiff_t>(sizes[1]);
  s.test.assign(it, idx.end());
  return s;
}

template <typename T>
std::vector<T> take(const std::vector<T>& items, const std::vector<std::size_t>& indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(items.at(i));
  return out;
}

}  // namespace stag
