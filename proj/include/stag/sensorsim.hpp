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
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "stag/error.hpp"
#include "stag/stream.hpp"

namespace stag {

struct Tone {
  double frequency;  // Hz
  double amplitude;
  double phase;  // radians

  bool operator==(const Tone&) const = default;
};

/// Deterministic multi-tone vibration source with an optional white noise
/// floor. The noise floor is a pure function of (seed, timestamp) so two
/// sensors sampling the same instant observe the same source value.
struct SourceSignal {
  std::uint64_t seed = 0;
  double duration = 0.0;  // seconds
  std::vector<Tone> components;
  double noise_floor = 0.0;  // RMS

  bool operator==(const SourceSignal&) const = default;
};

enum class GyroCoupling { copy, derivative };

struct ChannelModel {
  double accel_z_gain = 1.0;
  double gyro_x_gain = 1e-3;
  double gyro_y_gain = 8e-4;
  GyroCoupling gyro_coupling = GyroCoupling::derivative;
  double accel_snr_db = 25.0;
  double gyro_snr_db = 15.0;
  double cross_axis_leak = 0.1;
};

/// Gyroscope offset relative to the accelerometer sampling grid.
struct MisalignmentProfile {
  double phase_fraction = 0.0;  // fraction of one sample period, [0, 1)
  double jitter_std = 0.0;      // seconds
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal draw keyed by (seed, key); Box-Muller over two hashes.
inline double hashed_gaussian(std::uint64_t seed, std::uint64_t key) {
  const std::uint64_t h1 = splitmix64(seed ^ splitmix64(key));
  const std::uint64_t h2 = splitmix64(h1);
  const double u1 = unit_open(h1);
  const double u2 = unit_open(h2);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline std::uint64_t stream_seed(std::uint64_t seed, SensorKind kind, double rate) {
  std::uint64_t s = splitmix64(seed ^ 0x5354414755ULL);
  s = splitmix64(s ^ static_cast<std::uint64_t>(kind));
  return splitmix64(s ^ static_cast<std::uint64_t>(std::llround(rate * 1000.0)));
}

}  // namespace detail

/// Throws ArgumentError if the source breaks its invariants.
inline void validate(const SourceSignal& src) {
  if (!(src.duration > 0.0) || !std::isfinite(src.duration)) {
    throw ArgumentError("source duration must be positive");
  }
  if (src.components.empty()) throw ArgumentError("source has no components");
  bool in_speech_band = false;
  for (const auto& c : src.components) {
    if (!(c.frequency > 0.0 && c.frequency <= 200.0)) {
      throw ArgumentError("component frequency outside (0, 200] Hz");
    }
    if (c.frequency >= 85.0 && c.frequency <= 255.0) in_speech_band = true;
  }
  if (!in_speech_band) throw ArgumentError("no component in the [85, 255] Hz speech band");
  if (!(src.noise_floor >= 0.0)) throw ArgumentError("negative noise floor");
}

inline void validate(const ChannelModel& ch) {
  for (double g : {ch.accel_z_gain, ch.gyro_x_gain, ch.gyro_y_gain}) {
    if (!std::isfinite(g) || g == 0.0) throw ArgumentError("channel gains must be finite and nonzero");
  }
  if (std::isnan(ch.accel_snr_db) || std::isnan(ch.gyro_snr_db)) {
    throw ArgumentError("snr_db is NaN");
  }
  if (ch.accel_snr_db < ch.gyro_snr_db) {
    throw ArgumentError("accelerometer SNR must be at least the gyroscope SNR");
  }
  if (!(ch.cross_axis_leak >= 0.0 && ch.cross_axis_leak < 1.0)) {
    throw ArgumentError("cross_axis_leak outside [0, 1)");
  }
}

/// Draws `n_components` tones in [85, 200] Hz with amplitudes in [0.5, 1]
/// and uniform phases. Same seed, same signal.
inline SourceSignal synth_source(std::uint64_t seed, double duration, std::size_t n_components,
                                 double noise_floor = 0.0) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ArgumentError("duration must be positive");
  }
  if (n_components == 0) throw ArgumentError("n_components must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(85.0, 200.0);
  std::uniform_real_distribution<double> amp(0.5, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SourceSignal src{seed, duration, {}, noise_floor};
  src.components.reserve(n_components);
  for (std::size_t i = 0; i < n_components; ++i) {
    const double f = freq(rng);
    const double a = amp(rng);
    const double p = phase(rng);
    src.components.push_back({f, a, p});
  }
  validate(src);
  return src;
}

/// Noise-free source value at time t (seconds).
inline double evaluate(const SourceSignal& src, double t) {
  double v = 0.0;
  for (const auto& c : src.components) {
    v += c.amplitude * std::sin(2.0 * std::numbers::pi * c.frequency * t + c.phase);
  }
  return v;
}

/// Analytic time derivative of the tonal part.
inline double evaluate_derivative(const SourceSignal& src, double t) {
  double v = 0.0;
  for (const auto& c : src.components) {
    const double w = 2.0 * std::numbers::pi * c.frequency;
    v += c.amplitude * w * std::cos(w * t + c.phase);
  }
  return v;
}

/// Source value at an integer-nanosecond instant, including the noise floor.
inline double evaluate_at(const SourceSignal& src, std::int64_t t_ns) {
  double v = evaluate(src, static_cast<double>(t_ns) / kNanosPerSecond);
  if (src.noise_floor > 0.0) {
    v += src.noise_floor * detail::hashed_gaussian(src.seed, static_cast<std::uint64_t>(t_ns));
  }
  return v;
}

/// RMS of the tonal part (or of its derivative) over a long window.
inline double tonal_rms(const SourceSignal& src, bool derivative) {
  double p = 0.0;
  for (const auto& c : src.components) {
    const double a = derivative ? c.amplitude * 2.0 * std::numbers::pi * c.frequency : c.amplitude;
    p += 0.5 * a * a;
  }
  return std::sqrt(p);
}

/// Samples `floor(duration * rate)` instants at (k + phase_fraction)/rate
/// plus Gaussian jitter and applies the channel: gain, gyro coupling,
/// cross-axis leak, then additive white noise at the configured SNR.
///
/// Axis layout: accel/mag carry the source on z with `cross_axis_leak`
/// copies on x and y. Gyro carries the coupled signal on x and y and a
/// leak of their mean gain on z. Noise on a sensor's secondary axes uses
/// the level of its primary axis, so the primary axes have the best SNR.
inline SensorStream sample_stream(const SourceSignal& src, const ChannelModel& ch, SensorKind kind,
                                  double rate, const MisalignmentProfile& profile) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ArgumentError("rate must be positive");
  validate(src);
  validate(ch);
  if (!(profile.phase_fraction >= 0.0 && profile.phase_fraction < 1.0)) {
    throw ArgumentError("phase_fraction outside [0, 1)");
  }
  if (!(profile.jitter_std >= 0.0)) throw ArgumentError("jitter_std must be non-negative");
  const auto n = static_cast<std::size_t>(std::floor(src.duration * rate + 1e-9));
  if (n < 2) throw ArgumentError("duration * rate must be at least 2");

  const std::uint64_t seed = detail::stream_seed(src.seed, kind, rate);
  std::mt19937_64 noise_rng(seed);
  std::mt19937_64 jitter_rng(detail::splitmix64(seed));
  std::normal_distribution<double> gauss(0.0, 1.0);

  SensorStream out{kind, {}, {}, rate};
  out.timestamps_ns.reserve(n);
  const double period_ns = kNanosPerSecond / rate;
  for (std::size_t k = 0; k < n; ++k) {
    const double ideal = (static_cast<double>(k) + profile.phase_fraction) * period_ns;
    std::int64_t ts = std::llround(ideal);
    if (profile.jitter_std > 0.0) {
      // Redraw until ordering holds.
      for (;;) {
        const double j = gauss(jitter_rng) * profile.jitter_std * kNanosPerSecond;
        ts = std::llround(ideal + j);
        if (out.timestamps_ns.empty() || ts > out.timestamps_ns.back()) break;
      }
    }
    out.timestamps_ns.push_back(ts);
  }

  const bool gyro = kind == SensorKind::gyro;
  const bool derivative = gyro && ch.gyro_coupling == GyroCoupling::derivative;
  std::array<double, 3> gain{};
  if (gyro) {
    gain = {ch.gyro_x_gain, ch.gyro_y_gain,
            ch.cross_axis_leak * 0.5 * (ch.gyro_x_gain + ch.gyro_y_gain)};
  } else {
    gain = {ch.cross_axis_leak * ch.accel_z_gain, ch.cross_axis_leak * ch.accel_z_gain,
            ch.accel_z_gain};
  }

  double base_rms = tonal_rms(src, derivative);
  if (!derivative) base_rms = std::hypot(base_rms, src.noise_floor);
  const double snr_db = gyro ? ch.gyro_snr_db : ch.accel_snr_db;
  const double snr_amp = std::isinf(snr_db) && snr_db > 0 ? 0.0 : std::pow(10.0, -snr_db / 20.0);
  std::array<double, 3> sigma{};
  if (gyro) {
    sigma[0] = std::abs(gain[0]) * base_rms * snr_amp;
    sigma[1] = std::abs(gain[1]) * base_rms * snr_amp;
    sigma[2] = std::max(sigma[0], sigma[1]);
  } else {
    sigma.fill(std::abs(gain[2]) * base_rms * snr_amp);
  }

  out.axes.assign(3, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const std::int64_t ts = out.timestamps_ns[k];
    const double clean = derivative
                             ? evaluate_derivative(src, static_cast<double>(ts) / kNanosPerSecond)
                             : evaluate_at(src, ts);
    for (std::size_t a = 0; a < 3; ++a) {
      double v = gain[a] * clean;
      if (sigma[a] > 0.0) v += sigma[a] * gauss(noise_rng);
      out.axes[a][k] = v;
    }
  }
  return out;
}

/// Accelerometer/gyroscope pair captured under one of three timing
/// scenarios:
///   1. two accelerometer instances (identical timestamps and data),
///   2. accelerometer + gyroscope started with a delay (timestamps still
///      identical, assigned by the same timer),
///   3. magnetometer enabled: gyroscope lands mid-period, with jitter.
/// Jitter only applies to scenario 3; the shared timer of 1 and 2 has none.
inline std::pair<SensorStream, SensorStream> simulate_scenario(int scenario, const SourceSignal& src,
                                                               const ChannelModel& ch, double rate,
                                                               double jitter_std) {
  if (!(rate > 0.0)) throw ArgumentError("rate must be positive");
  const MisalignmentProfile aligned{0.0, 0.0};
  switch (scenario) {
    case 1: {
      auto a = sample_stream(src, ch, SensorKind::accel, rate, aligned);
      auto b = a;
      return {std::move(a), std::move(b)};
    }
    case 2:
      return {sample_stream(src, ch, SensorKind::accel, rate, aligned),
              sample_stream(src, ch, SensorKind::gyro, rate, aligned)};
    case 3:
      return {sample_stream(src, ch, SensorKind::accel, rate, aligned),
              sample_stream(src, ch, SensorKind::gyro, rate, {0.5, jitter_std})};
    default:
      throw ArgumentError("unknown scenario " + std::to_string(scenario));
  }
}

/// Mean normalized distance (percent) of gyro samples from the midpoint of
/// the accelerometer interval that contains them. 0 = every gyro sample is
/// exactly mid-period, 100 = every gyro sample coincides with an accel
/// sample. Gyro samples outside the accel time range are ignored.
inline double deviation_from_center(const SensorStream& accel, const SensorStream& gyro) {
  if (accel.size() < 2) throw ArgumentError("accel stream needs at least 2 samples");
  const auto& a = accel.timestamps_ns;
  double total = 0.0;
  std::size_t count = 0;
  for (std::int64_t g : gyro.timestamps_ns) {
    if (g < a.front() || g > a.back()) continue;
    auto it = std::upper_bound(a.begin(), a.end(), g);
    const auto lo = *(it - 1);
    if (lo == g) {
      total += 100.0;
    } else {
      const double phase = static_cast<double>(g - lo) / static_cast<double>(*it - lo);
      total += std::abs(phase - 0.5) / 0.5 * 100.0;
    }
    ++count;
  }
  if (count == 0) throw EmptyInputError("no gyro sample overlaps the accel stream");
  return total / static_cast<double>(count);
}

}  // namespace stag
