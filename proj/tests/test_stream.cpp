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

#include "stag/stream.hpp"

namespace stag {
namespace {

SensorStream three(std::vector<std::int64_t> ts) {
  const auto n = ts.size();
  return {SensorKind::accel, std::move(ts), std::vector<std::vector<double>>(3, std::vector<double>(n, 1.0)), 400.0};
}

TEST(SensorKind, NamesRoundTrip) {
  for (auto k : {SensorKind::accel, SensorKind::gyro, SensorKind::mag}) {
    EXPECT_EQ(parse_sensor_kind(to_string(k)), k);
  }
  EXPECT_EQ(to_string(SensorKind::accel), "acc");
  EXPECT_FALSE(parse_sensor_kind("baro"));
}

TEST(Axis, ParseAndName) {
  for (auto a : kAllAxes) EXPECT_EQ(parse_axis(std::string(1, axis_name(a))), a);
  EXPECT_FALSE(parse_axis("w"));
}

TEST(Validate, AcceptsStrictlyIncreasing) { EXPECT_NO_THROW(validate(three({0, 1, 5}))); }

TEST(Validate, RejectsRepeatedTimestamp) { EXPECT_THROW(validate(three({0, 1, 1})), ArgumentError); }

TEST(Validate, RejectsRaggedAxes) {
  auto s = three({0, 1, 2});
  s.axes[1].pop_back();
  EXPECT_THROW(validate(s), ArgumentError);
}

TEST(Validate, RejectsAxisCount) {
  auto s = three({0, 1});
  s.axes.clear();
  EXPECT_THROW(validate(s), ArgumentError);
  s.axes.assign(4, {0.0, 0.0});
  EXPECT_THROW(validate(s), ArgumentError);
}

TEST(Stream, MissingAxisThrows) {
  SensorStream s{SensorKind::gyro, {0}, {{1.0}}, 10.0};
  EXPECT_EQ(s.axis(Axis::x).front(), 1.0);
  EXPECT_THROW((void)s.axis(Axis::z), ArgumentError);
}

TEST(Slice, ClampsBounds) {
  const auto s = three({10, 20, 30, 40});
  const auto a = slice(s, 1, 3);
  EXPECT_EQ(a.timestamps_ns, (std::vector<std::int64_t>{20, 30}));
  EXPECT_EQ(a.axis_count(), 3u);
  EXPECT_EQ(slice(s, 3, 99).size(), 1u);
  EXPECT_EQ(slice(s, 5, 2).size(), 0u);
}

TEST(Stream, TimeInSeconds) { EXPECT_DOUBLE_EQ(three({2'500'000}).time_s(0), 0.0025); }

}  // namespace
}  // namespace stag
