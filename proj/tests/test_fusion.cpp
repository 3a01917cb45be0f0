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
#include <random>
#include <sstream>

#include "stag/fusion.hpp"
#include "stag/fusion_io.hpp"
#include "stag/sensorsim.hpp"

namespace stag {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Aligned 400 Hz accel plus a mid-period 200 Hz gyro from one source.
struct Capture {
  SensorStream accel;
  SensorStream gyro;
};

Capture capture(std::uint64_t seed, double seconds, GyroCoupling c = GyroCoupling::copy, double gyro_snr = 30.0) {
  const auto src = synth_source(seed, seconds, 3);
  ChannelModel ch;
  ch.gyro_coupling = c;
  ch.gyro_snr_db = gyro_snr;
  ch.accel_snr_db = gyro_snr + 10.0;
  return {sample_stream(src, ch, SensorKind::accel, 400.0, {0.0, 0.0}),
          sample_stream(src, ch, SensorKind::gyro, 200.0, {0.5, 0.0})};
}

gbm::Params quick() {
  gbm::Params p;
  p.n_rounds = 40;
  p.learning_rate = 0.2;
  return p;
}

TEST(NearestIndex, EarlierOnTies) {
  const std::vector<std::int64_t> ts{0, 10, 20};
  EXPECT_EQ(detail::nearest_index(ts, -5), 0u);
  EXPECT_EQ(detail::nearest_index(ts, 5), 0u);
  EXPECT_EQ(detail::nearest_index(ts, 6), 1u);
  EXPECT_EQ(detail::nearest_index(ts, 15), 1u);
  EXPECT_EQ(detail::nearest_index(ts, 99), 2u);
}

TEST(Midpoints, IntegerHalfway) {
  EXPECT_EQ(midpoints(std::vector<std::int64_t>{0, 5'000'000, 10'000'001}),
            (std::vector<std::int64_t>{2'500'000, 7'500'000}));
  EXPECT_TRUE(midpoints(std::vector<std::int64_t>{1}).empty());
}

TEST(SplineMidpoints, ExactForCubic) {
  std::vector<std::int64_t> ts;
  std::vector<double> v;
  const auto f = [](double t) { return t * t * t - 2 * t * t + t; };
  for (int i = 0; i <= 200; ++i) {
    ts.push_back(5'000'000LL * i + 1'000'000'000LL);
    v.push_back(f(i / 200.0));
  }
  const auto mid = spline_midpoints(ts, v);
  ASSERT_EQ(mid.size(), 200u);
  for (int j = 0; j < 200; ++j) EXPECT_NEAR(mid[j], f((j + 0.5) / 200.0), 1e-9);
  EXPECT_THROW(spline_midpoints(std::vector<std::int64_t>{0, 1, 2}, std::vector<double>{0, 1, 2}), ArgumentError);
}

TEST(SelectAxes, FindsPrimaryAxes) {
  for (auto c : {GyroCoupling::copy, GyroCoupling::derivative}) {
    const auto cap = capture(3, 4.0, c, 15.0);
    const auto odd = bifurcate(cap.accel, cap.gyro).odd_accel;
    const auto sel = select_axes(odd, cap.gyro);
    EXPECT_EQ(sel.accel_axis, Axis::z);
    ASSERT_EQ(sel.gyro_axes.size(), 2u);
    // x and y share one SNR, so only the pair is determined
    EXPECT_NE(sel.gyro_axes[0], Axis::z);
    EXPECT_NE(sel.gyro_axes[1], Axis::z);
    EXPECT_NE(sel.gyro_axes[0], sel.gyro_axes[1]);
    EXPECT_GE(sel.gyro_correlation[0].score, sel.gyro_correlation[1].score);
    EXPECT_GE(sel.gyro_correlation[1].score, sel.gyro_correlation[2].score);
  }
}

TEST(NoiseEstimate, RecoversWhiteNoiseUnderTones) {
  std::mt19937_64 rng(17);
  for (double sigma : {0.01, 0.1, 1.0}) {
    std::normal_distribution<double> g(0.0, sigma);
    std::vector<double> noise(4000), mixed(4000);
    for (std::size_t i = 0; i < noise.size(); ++i) {
      noise[i] = g(rng);
      const double t = static_cast<double>(i) / 200.0;
      mixed[i] = noise[i] + std::sin(2 * std::numbers::pi * 37.0 * t) + 0.7 * std::sin(2 * std::numbers::pi * 81.0 * t);
    }
    const double var = sigma * sigma;
    EXPECT_NEAR(detail::estimate_noise_power(noise) / var, 1.0, 0.3);
    EXPECT_NEAR(detail::estimate_noise_power(mixed) / var, 1.0, 0.3);
  }
}

TEST(SelectAxes, UsesNoiseRecordingWhenGiven) {
  const auto cap = capture(4, 2.0);
  SensorStream noise = cap.accel;
  // make z the noisiest axis according to the reference recording
  for (std::size_t i = 0; i < noise.size(); ++i) {
    noise.axes[0][i] = 1e-6;
    noise.axes[1][i] = 1.0;
    noise.axes[2][i] = 100.0;
  }
  EXPECT_EQ(select_axes(cap.accel, cap.gyro, &noise).accel_axis, Axis::x);
  SensorStream dead = cap.accel;
  std::fill(dead.axes[1].begin(), dead.axes[1].end(), 0.0);
  EXPECT_THROW(select_axes(dead, cap.gyro), DegenerateInputError);
}

TEST(FeatureSpec, ValidateAndNames) {
  FeatureSpec s;
  EXPECT_EQ(base_feature_names(s), (std::vector<std::string>{"acc[-2]", "acc[-1]", "acc[0]", "acc[1]", "acc[2]",
                                                             "gyro_x[-1]", "gyro_x[0]", "gyro_x[1]", "gyro_y[-1]",
                                                             "gyro_y[0]", "gyro_y[1]"}));
  s.accel_window = 0;
  s.gyro_window = 0;
  s.gyro_axes = {Axis::z};
  EXPECT_EQ(base_feature_names(s), (std::vector<std::string>{"gyro_z[0]"}));
  s.gyro_axes.clear();
  EXPECT_THROW(validate(s), ArgumentError);
  s.gyro_axes = {Axis::x, Axis::x};
  EXPECT_THROW(validate(s), ArgumentError);
}

// 8 odd samples at 0, 10, ..., 70; gyro at the midpoints 5, 15, ...
BifurcatedSet toy() {
  BifurcatedSet b;
  b.odd_accel = {SensorKind::accel, {}, std::vector<std::vector<double>>(3), 100.0};
  b.even_accel = b.odd_accel;
  b.gyro = {SensorKind::gyro, {}, std::vector<std::vector<double>>(3), 100.0};
  for (int i = 0; i < 8; ++i) {
    b.odd_accel.timestamps_ns.push_back(10 * i);
    b.even_accel.timestamps_ns.push_back(10 * i + 5);
    b.gyro.timestamps_ns.push_back(10 * i + 5);
    for (std::size_t a = 0; a < 3; ++a) {
      b.odd_accel.axes[a].push_back(100 * a + i);
      b.even_accel.axes[a].push_back(100 * a + i + 0.5);
      b.gyro.axes[a].push_back(-(100.0 * a + i));
    }
  }
  return b;
}

TEST(BuildFeatures, RowLayout) {
  const auto fs = build_features(toy(), FeatureSpec{});
  // midpoints 0..6; accel window 2 needs j >= 2 and j + 2 <= 7
  EXPECT_EQ(fs.target_index, (std::vector<std::size_t>{2, 3, 4, 5}));
  EXPECT_EQ(fs.x.cols, 11u);
  const auto r = fs.x.row(0);
  EXPECT_EQ(std::vector<double>(r.begin(), r.end()),
            (std::vector<double>{200, 201, 202, 203, 204, -1, -2, -3, -101, -102, -103}));
  EXPECT_EQ(fs.y, (std::vector<double>{202.5, 203.5, 204.5, 205.5}));
  EXPECT_TRUE(fs.uncovered.empty());
}

TEST(BuildFeatures, StackedColumnsAndMissingValues) {
  const auto b = toy();
  std::vector<double> s1(7, 1.0), sp(7, 2.0);
  s1[3] = kNaN;
  const auto fs = build_features(b, FeatureSpec{}, s1, sp);
  EXPECT_EQ(fs.columns.back(), "spline");
  EXPECT_EQ(fs.columns[fs.columns.size() - 2], "stage1");
  EXPECT_EQ(fs.target_index, (std::vector<std::size_t>{2, 4, 5}));
  EXPECT_EQ(fs.x(0, 11), 1.0);
  EXPECT_EQ(fs.x(0, 12), 2.0);
}

TEST(BuildFeatures, GyroOnlyAndUncovered) {
  auto b = toy();
  FeatureSpec spec;
  spec.accel_window = 0;
  spec.gyro_window = 0;
  spec.gyro_axes = {Axis::z};
  auto fs = build_features(b, spec);
  EXPECT_EQ(fs.target_index.size(), 7u);
  EXPECT_EQ(fs.x(6, 0), -206.0);
  // keep gyro samples at 5 and 15 only: midpoints from 25 on are 10+ away
  b.gyro = slice(b.gyro, 0, 2);
  fs = build_features(b, spec);
  EXPECT_EQ(fs.uncovered, (std::vector<std::size_t>{2, 3, 4, 5, 6}));
  b.gyro = slice(b.gyro, 0, 0);
  EXPECT_THROW(build_features(b, spec), ArgumentError);
}

TEST(TrainStag, FitsAndReportsInSensorUnits) {
  const auto cap = capture(5, 6.0);
  const auto sets = segment_recording(cap.accel, cap.gyro, 400);
  const auto res = train_stag(sets, FeatureSpec{}, {quick()}, {3, 1, true});
  EXPECT_EQ(res.spline.stage, Stage::spline);
  EXPECT_EQ(res.combined.stage, Stage::combined);
  EXPECT_EQ(res.spline.rows, res.combined.rows);
  EXPECT_GT(res.combined.rows, 1000u);
  EXPECT_GT(res.gbm.r_squared, 0.9);
  EXPECT_GT(res.combined.r_squared, 0.9);
  EXPECT_EQ(res.stage2_columns.size(), res.stage1_columns.size() + 2);
  EXPECT_EQ(res.model.gyro_stats.size(), 2u);
  // the spline cannot follow tones above the 100 Hz odd-rate Nyquist
  EXPECT_LT(res.spline.r_squared, res.gbm.r_squared);
}

TEST(TrainStag, DeterministicModelText) {
  const auto cap = capture(6, 3.0);
  const auto sets = segment_recording(cap.accel, cap.gyro, 400);
  const auto a = train_stag(sets, FeatureSpec{}, {quick()}, {3, 9, true});
  const auto b = train_stag(sets, FeatureSpec{}, {quick()}, {3, 9, true});
  EXPECT_EQ(to_text(a.model), to_text(b.model));
}

TEST(TrainStag, NormalizationUsesTrainingRecordingsOnly) {
  const auto cap = capture(7, 4.0);
  auto sets = segment_recording(cap.accel, cap.gyro, 400);
  const std::vector<BifurcatedSet> train(sets.begin(), sets.begin() + 3);
  const auto res = train_stag(train, FeatureSpec{}, {quick()}, {3, 1, true});
  std::vector<double> pooled;
  for (const auto& s : train) {
    const auto d = noise_reduce(s.odd_accel.axis(Axis::z));
    pooled.insert(pooled.end(), d.begin(), d.end());
  }
  const auto z = znormalize(pooled);
  EXPECT_DOUBLE_EQ(res.model.accel_stats.mean, z.stats.mean);
  EXPECT_DOUBLE_EQ(res.model.accel_stats.std, z.stats.std);
}

TEST(TrainStag, Errors) {
  const auto cap = capture(8, 2.0);
  const auto sets = segment_recording(cap.accel, cap.gyro, 400);
  EXPECT_THROW(train_stag({}, FeatureSpec{}, {quick()}), ArgumentError);
  EXPECT_THROW(train_stag(sets, FeatureSpec{}, {}), ArgumentError);
  FeatureSpec bad;
  bad.accel_window = 0;
  bad.gyro_axes.clear();
  EXPECT_THROW(train_stag(sets, bad, {quick()}), ArgumentError);
}

class Trained : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto cap = capture(10, 5.0);
    sets_ = new std::vector<BifurcatedSet>(segment_recording(cap.accel, cap.gyro, 400));
    const std::vector<BifurcatedSet> train(sets_->begin(), sets_->begin() + 4);
    model_ = new StagModel(train_stag(train, FeatureSpec{}, {quick()}, {3, 2, true}).model);
  }
  static void TearDownTestSuite() {
    delete sets_;
    delete model_;
  }
  static std::vector<BifurcatedSet>* sets_;
  static StagModel* model_;
};

std::vector<BifurcatedSet>* Trained::sets_ = nullptr;
StagModel* Trained::model_ = nullptr;

TEST_F(Trained, HeldOutBeatsSpline) {
  const std::vector<BifurcatedSet> test(sets_->begin() + 4, sets_->end());
  const auto r = evaluate_stag(*model_, test);
  EXPECT_GT(r[2].r_squared, r[0].r_squared);
  EXPECT_GT(r[2].r_squared, 0.8);
}

TEST_F(Trained, ModelTextRoundTrip) {
  const auto text = to_text(*model_);
  std::istringstream is(text);
  const auto back = load_stag_model(is);
  EXPECT_EQ(to_text(back), text);
  EXPECT_EQ(back.spec, model_->spec);
  const auto& b = sets_->back();
  EXPECT_EQ(upsample(back, b.odd_accel, b.gyro), upsample(*model_, b.odd_accel, b.gyro));
}

TEST_F(Trained, ModelLoadRejectsMismatch) {
  auto text = to_text(*model_);
  text.replace(text.find("spec z 2 1 xy"), 13, "spec z 1 1 xy");
  std::istringstream is(text);
  EXPECT_THROW(load_stag_model(is), ParseError);
  std::istringstream junk("stag-model 1\nspec q 2 1 xy 1 1\n");
  EXPECT_THROW(load_stag_model(junk), ParseError);
}

TEST_F(Trained, UpsampleShapeAndRoundTrip) {
  const auto& b = sets_->back();
  const auto up = upsample(*model_, b.odd_accel, b.gyro);
  EXPECT_EQ(up.size(), 2 * b.odd_accel.size() - 1);
  EXPECT_EQ(up.nominal_rate, 400.0);
  EXPECT_NO_THROW(validate(up));
  const auto back = bifurcate(up, b.gyro);
  EXPECT_EQ(back.odd_accel.timestamps_ns, b.odd_accel.timestamps_ns);
  EXPECT_EQ(back.odd_accel.axes, b.odd_accel.axes);
  EXPECT_EQ(back.even_accel.timestamps_ns, midpoints(b.odd_accel.timestamps_ns));
}

TEST_F(Trained, UpsampleTracksWithheldSamples) {
  const auto& b = sets_->back();
  const auto up = upsample(*model_, b.odd_accel, b.gyro);
  const auto rec = bifurcate(up, b.gyro).even_accel.axis(Axis::z);
  const auto spl = spline_midpoints(b.odd_accel, Axis::z);
  const auto& truth = b.even_accel.axis(Axis::z);
  double e_rec = 0.0, e_spl = 0.0;
  for (std::size_t j = 0; j < rec.size(); ++j) {
    e_rec += (rec[j] - truth[j]) * (rec[j] - truth[j]);
    e_spl += (spl[j] - truth[j]) * (spl[j] - truth[j]);
  }
  EXPECT_LT(e_rec, 0.5 * e_spl);
}

TEST_F(Trained, UpsampleReportsUncoveredMidpoints) {
  const auto& b = sets_->back();
  const auto gyro = slice(b.gyro, 0, b.gyro.size() / 2);
  try {
    upsample(*model_, b.odd_accel, gyro);
    FAIL();
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("lack gyro coverage"), std::string::npos);
  }
}

TEST(FormatReport, Layout) {
  EXPECT_EQ(format_report({Stage::combined, 0.123456, 0.5, 42}, "test "),
            "test stage=combined r2=0.1235 mse=0.5 rows=42");
}

}  // namespace
}  // namespace stag
