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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "stag/sensorsim.hpp"

namespace stag {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ChannelModel clean_channel(GyroCoupling c = GyroCoupling::copy) {
  ChannelModel ch;
  ch.gyro_coupling = c;
  ch.accel_snr_db = kInf;
  ch.gyro_snr_db = kInf;
  return ch;
}

SourceSignal one_tone(double f, double duration = 1.0) {
  return {7, duration, {{f, 1.0, 0.0}}, 0.0};
}

TEST(SynthSource, DeterministicAndInRange) {
  const auto a = synth_source(11, 2.0, 5);
  EXPECT_EQ(a, synth_source(11, 2.0, 5));
  EXPECT_NE(a, synth_source(12, 2.0, 5));
  ASSERT_EQ(a.components.size(), 5u);
  for (const auto& c : a.components) {
    EXPECT_GE(c.frequency, 85.0);
    EXPECT_LE(c.frequency, 200.0);
    EXPECT_GE(c.amplitude, 0.5);
    EXPECT_LE(c.amplitude, 1.0);
  }
}

TEST(SynthSource, RejectsBadArguments) {
  EXPECT_THROW(synth_source(1, 0.0, 1), ArgumentError);
  EXPECT_THROW(synth_source(1, 1.0, 0), ArgumentError);
  EXPECT_THROW(synth_source(1, std::nan(""), 1), ArgumentError);
}

TEST(SourceValidate, NeedsSpeechBandComponent) {
  EXPECT_THROW(validate(one_tone(50.0)), ArgumentError);
  EXPECT_THROW(validate(one_tone(250.0)), ArgumentError);
  EXPECT_NO_THROW(validate(one_tone(85.0)));
}

TEST(ChannelValidate, Rejects) {
  ChannelModel ch;
  ch.gyro_x_gain = 0.0;
  EXPECT_THROW(validate(ch), ArgumentError);
  ch = {};
  ch.accel_snr_db = 10.0;  // below the gyro's 15
  EXPECT_THROW(validate(ch), ArgumentError);
  ch = {};
  ch.cross_axis_leak = 1.0;
  EXPECT_THROW(validate(ch), ArgumentError);
}

TEST(Evaluate, MatchesClosedForm) {
  const SourceSignal s{0, 1.0, {{100.0, 0.5, 0.3}, {150.0, 0.8, 1.1}}, 0.0};
  for (double t : {0.0, 0.00123, 0.5, 0.777}) {
    const double want = 0.5 * std::sin(2 * std::numbers::pi * 100 * t + 0.3) +
                        0.8 * std::sin(2 * std::numbers::pi * 150 * t + 1.1);
    EXPECT_NEAR(evaluate(s, t), want, 1e-12);
  }
}

TEST(Evaluate, DerivativeMatchesCentralDifference) {
  const auto s = synth_source(3, 1.0, 4);
  const double h = 1e-7;
  for (double t : {0.01, 0.2, 0.61}) {
    const double fd = (evaluate(s, t + h) - evaluate(s, t - h)) / (2 * h);
    EXPECT_NEAR(evaluate_derivative(s, t), fd, 1e-3 * std::abs(fd) + 1e-2);
  }
}

TEST(Evaluate, NoiseFloorIsAFunctionOfTime) {
  auto s = one_tone(100.0);
  s.noise_floor = 0.3;
  EXPECT_EQ(evaluate_at(s, 123456), evaluate_at(s, 123456));
  EXPECT_NE(evaluate_at(s, 123456) - evaluate(s, 123456e-9), 0.0);
}

TEST(TonalRms, MatchesNumericRms) {
  const auto s = synth_source(5, 1.0, 3);
  ASSERT_EQ(s.noise_floor, 0.0);
  double acc = 0.0, dacc = 0.0;
  const int n = 4'000'000;
  for (int i = 0; i < n; ++i) {
    const double t = 400.0 * i / n;
    acc += evaluate(s, t) * evaluate(s, t);
    dacc += evaluate_derivative(s, t) * evaluate_derivative(s, t);
  }
  EXPECT_NEAR(tonal_rms(s, false), std::sqrt(acc / n), 2e-3);
  EXPECT_NEAR(tonal_rms(s, true) / std::sqrt(dacc / n), 1.0, 2e-3);
}

TEST(SampleStream, CountAndTimestamps) {
  const auto s = sample_stream(one_tone(100.0, 1.0), clean_channel(), SensorKind::gyro, 200.0, {0.5, 0.0});
  ASSERT_EQ(s.size(), 200u);
  EXPECT_EQ(s.axis_count(), 3u);
  EXPECT_EQ(s.timestamps_ns[0], 2'500'000);
  EXPECT_EQ(s.timestamps_ns[199], 997'500'000);
  EXPECT_EQ(s.kind, SensorKind::gyro);
  EXPECT_EQ(s.nominal_rate, 200.0);
}

TEST(SampleStream, CleanAccelCarriesSourceOnZ) {
  const auto src = synth_source(9, 0.5, 3);
  const auto ch = clean_channel();
  const auto s = sample_stream(src, ch, SensorKind::accel, 400.0, {});
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double v = evaluate(src, s.time_s(k));
    EXPECT_NEAR(s.axes[2][k], v, 1e-12);
    EXPECT_NEAR(s.axes[0][k], ch.cross_axis_leak * v, 1e-12);
    EXPECT_NEAR(s.axes[1][k], ch.cross_axis_leak * v, 1e-12);
  }
}

TEST(SampleStream, CleanGyroCoupling) {
  const auto src = synth_source(9, 0.5, 3);
  for (auto c : {GyroCoupling::copy, GyroCoupling::derivative}) {
    const auto ch = clean_channel(c);
    const auto s = sample_stream(src, ch, SensorKind::gyro, 200.0, {0.5, 0.0});
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double t = s.time_s(k);
      const double v = c == GyroCoupling::copy ? evaluate(src, t) : evaluate_derivative(src, t);
      EXPECT_NEAR(s.axes[0][k], ch.gyro_x_gain * v, 1e-9);
      EXPECT_NEAR(s.axes[1][k], ch.gyro_y_gain * v, 1e-9);
      EXPECT_NEAR(s.axes[2][k], ch.cross_axis_leak * 0.5 * (ch.gyro_x_gain + ch.gyro_y_gain) * v, 1e-9);
    }
  }
}

// SNR measured against the noiseless channel output.
double measured_snr(const SensorStream& noisy, const SensorStream& clean, std::size_t axis) {
  double ps = 0.0, pn = 0.0;
  for (std::size_t k = 0; k < noisy.size(); ++k) {
    ps += clean.axes[axis][k] * clean.axes[axis][k];
    const double e = noisy.axes[axis][k] - clean.axes[axis][k];
    pn += e * e;
  }
  return 10.0 * std::log10(ps / pn);
}

TEST(SampleStream, PrimaryAxesHitConfiguredSnr) {
  const auto src = synth_source(21, 20.0, 3);
  for (auto c : {GyroCoupling::copy, GyroCoupling::derivative}) {
    ChannelModel ch;
    ch.gyro_coupling = c;
    const auto clean = clean_channel(c);
    const auto a = sample_stream(src, ch, SensorKind::accel, 400.0, {});
    const auto a0 = sample_stream(src, clean, SensorKind::accel, 400.0, {});
    EXPECT_NEAR(measured_snr(a, a0, 2), ch.accel_snr_db, 0.3);
    const auto g = sample_stream(src, ch, SensorKind::gyro, 200.0, {0.5, 0.0});
    const auto g0 = sample_stream(src, clean, SensorKind::gyro, 200.0, {0.5, 0.0});
    EXPECT_NEAR(measured_snr(g, g0, 0), ch.gyro_snr_db, 0.3);
    EXPECT_NEAR(measured_snr(g, g0, 1), ch.gyro_snr_db, 0.3);
    // secondary axes are noisier than the primary ones
    EXPECT_LT(measured_snr(a, a0, 0), measured_snr(a, a0, 2));
    EXPECT_LT(measured_snr(g, g0, 2), measured_snr(g, g0, 0));
  }
}

TEST(SampleStream, DeterministicPerSeed) {
  const auto src = synth_source(2, 1.0, 2);
  const ChannelModel ch;
  const MisalignmentProfile p{0.5, 1e-4};
  EXPECT_EQ(sample_stream(src, ch, SensorKind::gyro, 200.0, p), sample_stream(src, ch, SensorKind::gyro, 200.0, p));
  EXPECT_NE(sample_stream(src, ch, SensorKind::gyro, 200.0, p).axes,
            sample_stream(synth_source(3, 1.0, 2), ch, SensorKind::gyro, 200.0, p).axes);
}

TEST(SampleStream, HeavyJitterKeepsOrder) {
  const auto s = sample_stream(one_tone(100.0, 2.0), ChannelModel{}, SensorKind::gyro, 200.0, {0.5, 4e-3});
  EXPECT_NO_THROW(validate(s));
  EXPECT_EQ(s.size(), 400u);
}

TEST(SampleStream, RejectsBadArguments) {
  const auto src = one_tone(100.0, 1.0);
  EXPECT_THROW(sample_stream(src, {}, SensorKind::accel, 0.0, {}), ArgumentError);
  EXPECT_THROW(sample_stream(src, {}, SensorKind::accel, 1.5, {}), ArgumentError);
  EXPECT_THROW(sample_stream(src, {}, SensorKind::accel, 200.0, {1.0, 0.0}), ArgumentError);
  EXPECT_THROW(sample_stream(src, {}, SensorKind::accel, 200.0, {0.0, -1.0}), ArgumentError);
}

TEST(Scenario, OneDuplicatesTheAccelerometer) {
  const auto [a, b] = simulate_scenario(1, synth_source(1, 1.0, 3), {}, 200.0, 1e-4);
  EXPECT_EQ(a, b);
}

TEST(Scenario, TwoSharesTimestamps) {
  const auto [a, g] = simulate_scenario(2, synth_source(1, 1.0, 3), {}, 200.0, 1e-4);
  EXPECT_EQ(a.timestamps_ns, g.timestamps_ns);
  EXPECT_EQ(g.kind, SensorKind::gyro);
}

TEST(Scenario, ThreeIsHalfPeriodOffset) {
  const auto [a, g] = simulate_scenario(3, synth_source(1, 1.0, 3), {}, 200.0, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(g.timestamps_ns[k] - a.timestamps_ns[k], 2'500'000);
}

TEST(Scenario, Unknown) { EXPECT_THROW(simulate_scenario(4, synth_source(1, 1.0, 3), {}, 200.0, 0.0), ArgumentError); }

SensorStream at(std::vector<std::int64_t> ts) {
  const auto n = ts.size();
  return {SensorKind::accel, std::move(ts), {std::vector<double>(n)}, 0.0};
}

TEST(Deviation, HandComputed) {
  const auto a = at({0, 10, 20});
  EXPECT_DOUBLE_EQ(deviation_from_center(a, at({5, 15})), 0.0);
  EXPECT_DOUBLE_EQ(deviation_from_center(a, at({2})), 60.0);
  EXPECT_DOUBLE_EQ(deviation_from_center(a, at({0, 10, 20})), 100.0);
  EXPECT_DOUBLE_EQ(deviation_from_center(a, at({-5, 5, 25})), 0.0);  // outside samples ignored
  EXPECT_DOUBLE_EQ(deviation_from_center(a, at({5, 18})), 30.0);
}

TEST(Deviation, Errors) {
  EXPECT_THROW(deviation_from_center(at({0}), at({0})), ArgumentError);
  EXPECT_THROW(deviation_from_center(at({0, 10}), at({11, 12})), EmptyInputError);
}

TEST(Deviation, ScenarioValues) {
  const auto src = synth_source(42, 10.0, 3);
  for (int scn : {1, 2}) {
    const auto [a, g] = simulate_scenario(scn, src, {}, 200.0, 0.0);
    EXPECT_DOUBLE_EQ(deviation_from_center(a, g), 100.0);
  }
  const auto [a, g] = simulate_scenario(3, src, {}, 200.0, 0.0);
  EXPECT_DOUBLE_EQ(deviation_from_center(a, g), 0.0);
}

// Property: with jitter sigma the expected deviation is E|N(0, sigma)| / half
// period = sigma * sqrt(2/pi) / 2.5 ms.
TEST(Deviation, JitterMatchesHalfNormalMean) {
  const auto src = synth_source(42, 60.0, 3);
  for (double sigma_ms : {0.02, 0.05, 0.1}) {
    const auto [a, g] = simulate_scenario(3, src, {}, 200.0, sigma_ms * 1e-3);
    const double expected = sigma_ms * std::sqrt(2.0 / std::numbers::pi) / 2.5 * 100.0;
    EXPECT_NEAR(deviation_from_center(a, g), expected, 0.05 * expected + 0.01) << sigma_ms;
  }
}

}  // namespace
}  // namespace stag
