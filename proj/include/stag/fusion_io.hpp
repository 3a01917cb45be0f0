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

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "stag/fusion.hpp"
#include "stag/gbm_io.hpp"

namespace stag {

// Model file: a header block followed by the two GBM blocks.
//
//   stag-model 1
//   spec <accel_axis> <accel_window> <gyro_window> <gyro_axes|-> <include_spline> <noise_reduction>
//   accel_stats <mean> <std>
//   gyro_stats <count> <mean> <std> ...
//   stage1
//   <gbm block>
//   stage2
//   <gbm block>

inline void save(const StagModel& m, std::ostream& os) {
  using detail::format_double;
  os << "stag-model 1\n";
  std::string axes;
  for (Axis a : m.spec.gyro_axes) axes += axis_name(a);
  if (axes.empty()) axes = "-";
  os << "spec " << axis_name(m.spec.accel_axis) << ' ' << m.spec.accel_window << ' ' << m.spec.gyro_window << ' '
     << axes << ' ' << (m.spec.include_spline ? 1 : 0) << ' ' << (m.noise_reduction ? 1 : 0) << '\n';
  os << "accel_stats " << format_double(m.accel_stats.mean) << ' ' << format_double(m.accel_stats.std) << '\n';
  os << "gyro_stats " << m.gyro_stats.size();
  for (const auto& s : m.gyro_stats) os << ' ' << format_double(s.mean) << ' ' << format_double(s.std);
  os << "\nstage1\n";
  gbm::save(m.stage1, os);
  os << "stage2\n";
  gbm::save(m.stage2, os);
}

inline StagModel load_stag_model(std::istream& is) {
  gbm::detail::LineReader r(is);
  StagModel m;
  auto ss = r.next();
  r.expect(ss, "stag-model");
  if (r.read<int>(ss) != 1) throw ParseError(r.line(), "unsupported model version");

  ss = r.next();
  r.expect(ss, "spec");
  std::string tok;
  ss >> tok;
  const auto acc = parse_axis(tok);
  if (!acc) throw ParseError(r.line(), "bad accel axis '" + tok + "'");
  m.spec.accel_axis = *acc;
  m.spec.accel_window = r.read<std::size_t>(ss);
  m.spec.gyro_window = r.read<std::size_t>(ss);
  ss >> tok;
  m.spec.gyro_axes.clear();
  if (tok != "-") {
    for (char c : tok) {
      const auto a = parse_axis(std::string_view(&c, 1));
      if (!a) throw ParseError(r.line(), "bad gyro axes '" + tok + "'");
      m.spec.gyro_axes.push_back(*a);
    }
  }
  m.spec.include_spline = r.read<int>(ss) != 0;
  m.noise_reduction = r.read<int>(ss) != 0;

  ss = r.next();
  r.expect(ss, "accel_stats");
  m.accel_stats.mean = r.read<double>(ss);
  m.accel_stats.std = r.read<double>(ss);

  ss = r.next();
  r.expect(ss, "gyro_stats");
  const auto n = r.read<std::size_t>(ss);
  if (n != m.spec.gyro_axes.size()) throw ParseError(r.line(), "gyro_stats count differs from gyro axes");
  for (std::size_t i = 0; i < n; ++i) {
    NormStats s;
    s.mean = r.read<double>(ss);
    s.std = r.read<double>(ss);
    m.gyro_stats.push_back(s);
  }
  ss = r.next();
  r.expect(ss, "stage1");
  m.stage1 = gbm::load(is, &r);
  ss = r.next();
  r.expect(ss, "stage2");
  m.stage2 = gbm::load(is, &r);
  const std::size_t base = base_feature_names(m.spec).size();
  if (m.stage1.n_features != base || m.stage2.n_features != base + 1 + (m.spec.include_spline ? 1 : 0)) {
    throw ParseError(r.line(), "stage feature counts do not match the feature spec");
  }
  return m;
}

inline std::string to_text(const StagModel& m) {
  std::ostringstream os;
  save(m, os);
  return os.str();
}

/// `stage=<name> r2=<4 decimals> mse=<value> rows=<n>`
inline std::string format_report(const FitReport& r, std::string_view prefix = {}) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << prefix << "stage=" << to_string(r.stage) << " r2=" << r.r_squared;
  os.unsetf(std::ios::fixed);
  os.precision(9);
  os << " mse=" << r.mse << " rows=" << r.rows;
  return os.str();
}

}  // namespace stag
