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
#include <string>
#include <vector>

#include "stag/error.hpp"
#include "stag/gbm.hpp"
#include "stag/ingest.hpp"
#include "stag/signal.hpp"
#include "stag/spline.hpp"
#include "stag/stats.hpp"
#include "stag/stream.hpp"

namespace stag {

// ---------------------------------------------------------------------------
// Axis selection
// ---------------------------------------------------------------------------

struct AxisScore {
  Axis axis;
  double score;
};

struct AxisSelection {
  Axis accel_axis = Axis::z;
  std::vector<Axis> gyro_axes;
  std::vector<AxisScore> accel_snr_db;     // per accel axis, x..z
  std::vector<AxisScore> gyro_correlation;  // ranked, best first
};

namespace detail {

/// Noise power estimate for a stream without a quiet reference. Averages
/// Hann-windowed 64-sample periodograms (half overlap) and scales the lower
/// quartile bin to a white-noise variance; tones occupy only a few bins.
inline double estimate_noise_power(std::span<const double> x) {
  constexpr std::size_t kSeg = 64;
  if (x.size() < 2 * kSeg) return power(x);
  std::vector<double> avg(kSeg / 2 + 1, 0.0);
  std::size_t segs = 0;
  for (std::size_t i = 0; i + kSeg <= x.size(); i += kSeg / 2, ++segs) {
    const auto p = periodogram(x.subspan(i, kSeg), 1.0);
    for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += p.power[k];
  }
  std::vector<double> inner(avg.begin() + 1, avg.end() - 1);
  std::nth_element(inner.begin(), inner.begin() + inner.size() / 4, inner.end());
  double w2 = 0.0;
  for (std::size_t i = 0; i < kSeg; ++i) {
    const double h = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / (kSeg - 1));
    w2 += h * h;
  }
  return inner[inner.size() / 4] / static_cast<double>(segs) / (w2 / kSeg);
}

/// Index of the sample in `ts` nearest to `t` (earlier one on ties).
inline std::size_t nearest_index(std::span<const std::int64_t> ts, std::int64_t t) {
  auto it = std::lower_bound(ts.begin(), ts.end(), t);
  if (it == ts.begin()) return 0;
  if (it == ts.end()) return ts.size() - 1;
  const auto hi = static_cast<std::size_t>(it - ts.begin());
  return (*it - t) < (t - ts[hi - 1]) ? hi : hi - 1;
}

}  // namespace detail

/// Picks the accelerometer axis with the highest SNR and ranks gyroscope
/// axes by the largest |Pearson r| against it over lags of up to one gyro
/// period. The two best gyro axes are selected; exact ties keep x first.
/// `accel_noise`, when given, is a recording of the same sensor without
/// the source and provides the noise power per axis.
inline AxisSelection select_axes(const SensorStream& accel, const SensorStream& gyro,
                                 const SensorStream* accel_noise = nullptr) {
  if (accel.axis_count() != 3 || gyro.axis_count() != 3) throw ArgumentError("select_axes needs tri-axis streams");
  if (accel.size() < 4 || gyro.size() < 4) throw ArgumentError("select_axes needs at least 4 samples per stream");
  AxisSelection sel;
  double best = -std::numeric_limits<double>::infinity();
  for (Axis a : kAllAxes) {
    const auto& x = accel.axis(a);
    const double pn = accel_noise ? power(accel_noise->axis(a)) : detail::estimate_noise_power(x);
    if (power(x) == 0.0) throw DegenerateInputError(std::string("accel axis ") + axis_name(a) + " is all zero");
    const double snr = pn == 0.0 ? std::numeric_limits<double>::infinity() : to_db(power(x) / pn);
    sel.accel_snr_db.push_back({a, snr});
    if (snr > best) {
      best = snr;
      sel.accel_axis = a;
    }
  }

  // Accel value at each gyro instant (nearest sample).
  const auto& av = accel.axis(sel.accel_axis);
  std::vector<double> paired(gyro.size());
  for (std::size_t i = 0; i < gyro.size(); ++i) {
    paired[i] = av[detail::nearest_index(accel.timestamps_ns, gyro.timestamps_ns[i])];
  }
  for (Axis a : kAllAxes) sel.gyro_correlation.push_back({a, max_lag_abs_correlation(paired, gyro.axis(a), 1)});
  std::stable_sort(sel.gyro_correlation.begin(), sel.gyro_correlation.end(),
                   [](const AxisScore& l, const AxisScore& r) { return l.score > r.score; });
  sel.gyro_axes = {sel.gyro_correlation[0].axis, sel.gyro_correlation[1].axis};
  return sel;
}

// ---------------------------------------------------------------------------
// Spline interpolation at the withheld instants
// ---------------------------------------------------------------------------

/// Midpoint instants between consecutive samples (integer nanoseconds).
inline std::vector<std::int64_t> midpoints(std::span<const std::int64_t> ts) {
  std::vector<std::int64_t> out;
  if (ts.size() < 2) return out;
  out.reserve(ts.size() - 1);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) out.push_back(ts[i] + (ts[i + 1] - ts[i]) / 2);
  return out;
}

/// Not-a-knot cubic spline through (t, v) evaluated at every midpoint;
/// returns |t| - 1 values. Time is measured from the first sample.
inline std::vector<double> spline_midpoints(std::span<const std::int64_t> ts, std::span<const double> values) {
  if (ts.size() < 4) throw ArgumentError("spline_midpoints needs at least 4 samples");
  if (ts.size() != values.size()) throw ArgumentError("timestamps and values differ in length");
  const std::int64_t t0 = ts.front();
  std::vector<double> x(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) x[i] = static_cast<double>(ts[i] - t0) / kNanosPerSecond;
  const CubicSpline s(x, values);
  std::vector<double> out;
  out.reserve(ts.size() - 1);
  for (std::int64_t m : midpoints(ts)) out.push_back(s(static_cast<double>(m - t0) / kNanosPerSecond));
  return out;
}

inline std::vector<double> spline_midpoints(const SensorStream& odd, Axis axis = Axis::x) {
  return spline_midpoints(odd.timestamps_ns, odd.axis(axis));
}

// ---------------------------------------------------------------------------
// Features
// ---------------------------------------------------------------------------

struct FeatureSpec {
  Axis accel_axis = Axis::z;
  std::size_t accel_window = 2;  // 0 disables odd-accel features
  std::size_t gyro_window = 1;
  std::vector<Axis> gyro_axes = {Axis::x, Axis::y};  // empty disables gyro features
  bool include_spline = true;                       // stage 2 only

  bool operator==(const FeatureSpec&) const = default;
};

inline void validate(const FeatureSpec& spec) {
  if (spec.accel_window == 0 && spec.gyro_axes.empty()) throw ArgumentError("feature spec enables no source");
  for (std::size_t i = 0; i < spec.gyro_axes.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.gyro_axes.size(); ++j) {
      if (spec.gyro_axes[i] == spec.gyro_axes[j]) throw ArgumentError("duplicate gyro axis");
    }
  }
}

/// Columns of the base feature set, in matrix order.
inline std::vector<std::string> base_feature_names(const FeatureSpec& spec) {
  std::vector<std::string> names;
  const auto w = static_cast<long>(spec.accel_window);
  if (w > 0) {
    for (long o = -w; o <= w; ++o) names.push_back("acc[" + std::to_string(o) + "]");
  }
  const auto g = static_cast<long>(spec.gyro_window);
  for (Axis a : spec.gyro_axes) {
    for (long o = -g; o <= g; ++o) names.push_back(std::string("gyro_") + axis_name(a) + "[" + std::to_string(o) + "]");
  }
  return names;
}

struct FeatureSet {
  gbm::Matrix x;
  std::vector<double> y;                  // empty without targets
  std::vector<std::size_t> target_index;  // midpoint index j per row
  std::vector<std::string> columns;
  std::vector<std::size_t> uncovered;     // midpoints with no gyro sample nearby
};

/// One row per midpoint j between odd samples j and j+1.
///
/// Columns: odd samples j-w..j+w (centered on the nearest odd sample, the
/// earlier one), then for each gyro axis the samples nearest the midpoint
/// +-gyro_window, then the stage-1 prediction and the spline prediction
/// when those vectors are given (indexed by j; NaN marks a missing value).
/// Rows whose windows run off either end are dropped. A midpoint whose
/// nearest gyro sample is more than half an odd period away is listed in
/// `uncovered` and dropped.
inline FeatureSet build_features(const BifurcatedSet& bif, const FeatureSpec& spec,
                                 std::span<const double> stage1_pred = {}, std::span<const double> spline_pred = {}) {
  validate(spec);
  const auto& odd_t = bif.odd_accel.timestamps_ns;
  if (odd_t.size() < 2) throw ArgumentError("odd stream needs at least 2 samples");
  const std::span<const double> odd_v = bif.odd_accel.axis(spec.accel_axis);
  std::vector<std::span<const double>> gyro_v;
  for (Axis a : spec.gyro_axes) gyro_v.emplace_back(bif.gyro.axis(a));
  const bool with_targets = !bif.even_accel.empty();
  const std::span<const double> even_v =
      with_targets ? std::span<const double>(bif.even_accel.axis(spec.accel_axis)) : std::span<const double>{};

  FeatureSet fs;
  fs.columns = base_feature_names(spec);
  if (!stage1_pred.empty()) fs.columns.emplace_back("stage1");
  if (!spline_pred.empty()) fs.columns.emplace_back("spline");
  const std::size_t cols = fs.columns.size();

  const auto mids = midpoints(odd_t);
  const auto w = spec.accel_window;
  const auto g = spec.gyro_window;
  const std::size_t n_odd = odd_t.size();
  std::vector<double> row;
  for (std::size_t j = 0; j < mids.size(); ++j) {
    if (with_targets && j >= even_v.size()) break;
    row.clear();
    if (w > 0) {
      if (j < w || j + w >= n_odd) continue;
      for (std::size_t i = j - w; i <= j + w; ++i) row.push_back(odd_v[i]);
    }
    if (!gyro_v.empty()) {
      const auto& gt = bif.gyro.timestamps_ns;
      if (gt.empty()) {
        fs.uncovered.push_back(j);
        continue;
      }
      const std::size_t c = detail::nearest_index(gt, mids[j]);
      const std::int64_t half_period = (odd_t[j + 1] - odd_t[j]) / 2;
      if (std::abs(gt[c] - mids[j]) > half_period) {
        fs.uncovered.push_back(j);
        continue;
      }
      if (c < g || c + g >= gt.size()) continue;
      for (const auto& gv : gyro_v) {
        for (std::size_t i = c - g; i <= c + g; ++i) row.push_back(gv[i]);
      }
    }
    if (!stage1_pred.empty()) {
      if (j >= stage1_pred.size() || std::isnan(stage1_pred[j])) continue;
      row.push_back(stage1_pred[j]);
    }
    if (!spline_pred.empty()) {
      if (j >= spline_pred.size() || std::isnan(spline_pred[j])) continue;
      row.push_back(spline_pred[j]);
    }
    fs.x.values.insert(fs.x.values.end(), row.begin(), row.end());
    fs.target_index.push_back(j);
    if (with_targets) fs.y.push_back(even_v[j]);
  }
  fs.x.rows = fs.target_index.size();
  fs.x.cols = cols;
  if (fs.x.rows == 0) throw ArgumentError("no feature rows left after dropping edges");
  return fs;
}

// ---------------------------------------------------------------------------
// Two-stage model
// ---------------------------------------------------------------------------

enum class Stage { spline, gbm, combined };

inline std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::spline: return "spline";
    case Stage::gbm: return "gbm";
    case Stage::combined: return "combined";
  }
  return "spline";
}

struct FitReport {
  Stage stage = Stage::spline;
  double r_squared = 0.0;
  double mse = 0.0;  // squared sensor units
  std::size_t rows = 0;
};

struct StagModel {
  FeatureSpec spec;
  bool noise_reduction = true;
  NormStats accel_stats;
  std::vector<NormStats> gyro_stats;  // one per spec.gyro_axes entry
  gbm::Model stage1;
  gbm::Model stage2;
};

struct TrainOptions {
  std::size_t cv_folds = 5;
  std::uint64_t seed = 0;
  bool noise_reduction = true;
};

struct TrainResult {
  StagModel model;
  FitReport spline;
  FitReport gbm;
  FitReport combined;
  gbm::CvReport cv;
  std::vector<std::string> stage1_columns;
  std::vector<std::string> stage2_columns;
};

namespace detail {

/// Recording after baseline removal and normalization, in the units the
/// trees see, plus what is needed to map predictions back.
struct Prepared {
  BifurcatedSet norm;                 // selected axes replaced in place
  std::vector<double> mid_baseline;   // accel baseline at midpoint j
  std::vector<double> spline;         // spline prediction at midpoint j, normalized
};

struct Detrended {
  std::vector<double> odd;
  std::vector<double> odd_baseline;
  std::vector<std::vector<double>> gyro;
};

inline Detrended detrend(const BifurcatedSet& bif, const FeatureSpec& spec, bool noise_reduction) {
  Detrended d;
  const auto& odd = bif.odd_accel.axis(spec.accel_axis);
  if (noise_reduction) {
    d.odd_baseline = moving_average(odd);
    d.odd = noise_reduce(odd);
  } else {
    d.odd_baseline.assign(odd.size(), 0.0);
    d.odd = odd;
  }
  for (Axis a : spec.gyro_axes) {
    const auto& g = bif.gyro.axis(a);
    d.gyro.push_back(noise_reduction ? noise_reduce(g) : g);
  }
  return d;
}

inline Prepared prepare(const BifurcatedSet& bif, const StagModel& m) {
  const auto& spec = m.spec;
  const Detrended d = detrend(bif, spec, m.noise_reduction);
  Prepared p;
  p.norm = bif;
  const auto ai = static_cast<std::size_t>(spec.accel_axis);
  p.norm.odd_accel.axes[ai] = znormalize(d.odd, m.accel_stats).values;
  const std::size_t n_mid = d.odd.size() - 1;
  p.mid_baseline.resize(n_mid);
  for (std::size_t j = 0; j < n_mid; ++j) p.mid_baseline[j] = 0.5 * (d.odd_baseline[j] + d.odd_baseline[j + 1]);
  if (!bif.even_accel.empty()) {
    auto& ev = p.norm.even_accel.axes[ai];
    for (std::size_t j = 0; j < ev.size(); ++j) {
      const double base = j < n_mid ? p.mid_baseline[j] : d.odd_baseline.back();
      ev[j] = (ev[j] - base - m.accel_stats.mean) / m.accel_stats.std;
    }
  }
  for (std::size_t k = 0; k < spec.gyro_axes.size(); ++k) {
    const auto gi = static_cast<std::size_t>(spec.gyro_axes[k]);
    p.norm.gyro.axes[gi] = znormalize(d.gyro[k], m.gyro_stats[k]).values;
  }
  p.spline = spline_midpoints(p.norm.odd_accel.timestamps_ns, p.norm.odd_accel.axes[ai]);
  return p;
}

inline double to_sensor_units(double z, const StagModel& m, double baseline) {
  return z * m.accel_stats.std + m.accel_stats.mean + baseline;
}

inline std::vector<double> scatter(std::size_t n, std::span<const std::size_t> index, std::span<const double> v) {
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t r = 0; r < index.size(); ++r) out[index[r]] = v[r];
  return out;
}

/// Stage-1 and stage-2 feature sets for one prepared recording.
struct StagedFeatures {
  FeatureSet base;
  FeatureSet stacked;
  std::vector<double> stage1;  // per base row
};

inline StagedFeatures staged_features(const Prepared& p, const StagModel& m) {
  StagedFeatures s;
  s.base = build_features(p.norm, m.spec);
  s.stage1 = gbm::predict(m.stage1, s.base.x);
  const auto s1 = scatter(p.spline.size(), s.base.target_index, s.stage1);
  s.stacked = build_features(p.norm, m.spec, s1,
                             m.spec.include_spline ? std::span<const double>(p.spline) : std::span<const double>{});
  return s;
}

struct Scored {
  std::vector<double> truth;
  std::vector<double> spline;
  std::vector<double> gbm;
  std::vector<double> combined;
};

/// Appends raw-unit targets and the three stage predictions for every
/// stacked row of one recording.
inline void score_recording(const Prepared& p, const StagedFeatures& sf, const StagModel& m, Scored& out) {
  const auto s2 = gbm::predict(m.stage2, sf.stacked.x);
  const auto s1 = scatter(p.spline.size(), sf.base.target_index, sf.stage1);
  for (std::size_t r = 0; r < sf.stacked.x.rows; ++r) {
    const std::size_t j = sf.stacked.target_index[r];
    const double b = p.mid_baseline[j];
    out.truth.push_back(to_sensor_units(sf.stacked.y[r], m, b));
    out.spline.push_back(to_sensor_units(p.spline[j], m, b));
    out.gbm.push_back(to_sensor_units(s1[j], m, b));
    out.combined.push_back(to_sensor_units(s2[r], m, b));
  }
}

inline std::array<FitReport, 3> reports(const Scored& s) {
  const auto make = [&](Stage st, const std::vector<double>& pred) {
    return FitReport{st, r_squared(s.truth, pred), mean_squared_error(s.truth, pred), s.truth.size()};
  };
  return {make(Stage::spline, s.spline), make(Stage::gbm, s.gbm), make(Stage::combined, s.combined)};
}

}  // namespace detail

/// Two-stage fit on training recordings:
///   stage 1: GBM on the base features, hyperparameters from grid search
///            with k-fold cross-validation;
///   stage 2: GBM on base features + stage-1 prediction + spline
///            prediction, reusing stage 1's best hyperparameters.
/// Baseline removal and normalization statistics come from the training
/// recordings only. Reports are on the training rows, in sensor units.
inline TrainResult train_stag(std::span<const BifurcatedSet> train, const FeatureSpec& spec,
                              const std::vector<gbm::Params>& grid, const TrainOptions& opt = {}) {
  validate(spec);
  if (train.empty()) throw ArgumentError("no training recordings");
  TrainResult res;
  StagModel& m = res.model;
  m.spec = spec;
  m.noise_reduction = opt.noise_reduction;

  std::vector<detail::Detrended> detrended;
  std::vector<double> pooled_accel;
  std::vector<std::vector<double>> pooled_gyro(spec.gyro_axes.size());
  for (const auto& bif : train) {
    if (bif.odd_accel.size() < 4) throw ArgumentError("training recording shorter than 4 odd samples");
    detrended.push_back(detail::detrend(bif, spec, opt.noise_reduction));
    const auto& d = detrended.back();
    pooled_accel.insert(pooled_accel.end(), d.odd.begin(), d.odd.end());
    for (std::size_t k = 0; k < d.gyro.size(); ++k) pooled_gyro[k].insert(pooled_gyro[k].end(), d.gyro[k].begin(), d.gyro[k].end());
  }
  m.accel_stats = znormalize(pooled_accel).stats;
  for (const auto& g : pooled_gyro) m.gyro_stats.push_back(znormalize(g).stats);

  std::vector<detail::Prepared> prepared;
  for (const auto& bif : train) prepared.push_back(detail::prepare(bif, m));

  // Stage 1.
  gbm::Matrix x1;
  std::vector<double> y;
  std::vector<FeatureSet> base_sets;
  for (const auto& p : prepared) {
    auto fs = build_features(p.norm, spec);
    if (fs.y.empty()) throw ArgumentError("training recording has no targets");
    x1.values.insert(x1.values.end(), fs.x.values.begin(), fs.x.values.end());
    x1.rows += fs.x.rows;
    x1.cols = fs.x.cols;
    y.insert(y.end(), fs.y.begin(), fs.y.end());
    base_sets.push_back(std::move(fs));
  }
  res.stage1_columns = base_sets.front().columns;
  res.cv = gbm::grid_search_cv(x1, y, grid, opt.cv_folds, opt.seed);
  m.stage1 = gbm::fit(x1, y, res.cv.best_params);

  // Stage 2 learns from out-of-fold stage-1 predictions, which carry the
  // error level stage 1 shows on unseen data.
  const auto oof = gbm::cross_val_predict(x1, y, res.cv.best_params, opt.cv_folds, opt.seed);
  gbm::Matrix x2;
  std::vector<double> y2;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    const auto& base = base_sets[i];
    const std::span<const double> oof_i(oof.data() + offset, base.x.rows);
    offset += base.x.rows;
    const auto s1 = detail::scatter(prepared[i].spline.size(), base.target_index, oof_i);
    const auto stacked = build_features(prepared[i].norm, spec, s1,
                                        spec.include_spline ? std::span<const double>(prepared[i].spline)
                                                            : std::span<const double>{});
    x2.values.insert(x2.values.end(), stacked.x.values.begin(), stacked.x.values.end());
    x2.rows += stacked.x.rows;
    x2.cols = stacked.x.cols;
    y2.insert(y2.end(), stacked.y.begin(), stacked.y.end());
    if (i == 0) res.stage2_columns = stacked.columns;
  }
  m.stage2 = gbm::fit(x2, y2, res.cv.best_params);

  // Training reports run the fitted pipeline (final stage 1 feeding stage 2)
  // over the training rows, the same path used on unseen data.
  detail::Scored scored;
  for (const auto& p : prepared) detail::score_recording(p, detail::staged_features(p, m), m, scored);
  const auto r = detail::reports(scored);
  res.spline = r[0];
  res.gbm = r[1];
  res.combined = r[2];
  return res;
}

/// Spline / stage-1 / combined reports on recordings the model has not
/// seen, in sensor units.
inline std::array<FitReport, 3> evaluate_stag(const StagModel& m, std::span<const BifurcatedSet> sets) {
  if (sets.empty()) throw ArgumentError("no evaluation recordings");
  detail::Scored scored;
  for (const auto& bif : sets) {
    if (bif.even_accel.empty()) throw ArgumentError("evaluation recording has no targets");
    const auto p = detail::prepare(bif, m);
    const auto sf = detail::staged_features(p, m);
    detail::score_recording(p, sf, m, scored);
  }
  return detail::reports(scored);
}

/// Predicts the sample between every pair of consecutive odd samples and
/// interleaves them: odd[0], mid[0], odd[1], ... at twice the odd rate.
/// The selected accel axis is fused; midpoints whose feature windows run
/// off the ends, and any other axes, use the spline. Original samples are
/// copied unchanged.
inline SensorStream upsample(const StagModel& m, const SensorStream& odd_accel, const SensorStream& gyro) {
  if (odd_accel.size() < 4) throw ArgumentError("upsample needs at least 4 accel samples");
  validate(odd_accel);
  BifurcatedSet bif{odd_accel, SensorStream{odd_accel.kind, {}, std::vector<std::vector<double>>(odd_accel.axis_count()), 0.0},
                    gyro};
  const auto p = detail::prepare(bif, m);
  const auto sf = detail::staged_features(p, m);
  if (!sf.base.uncovered.empty()) {
    std::string list;
    for (std::size_t k = 0; k < sf.base.uncovered.size() && k < 20; ++k) {
      if (k) list += ", ";
      list += std::to_string(midpoints(odd_accel.timestamps_ns)[sf.base.uncovered[k]]);
    }
    if (sf.base.uncovered.size() > 20) list += ", ...";
    throw ArgumentError(std::to_string(sf.base.uncovered.size()) + " midpoints lack gyro coverage (ns): " + list);
  }
  const auto s2 = gbm::predict(m.stage2, sf.stacked.x);

  const std::size_t n_mid = odd_accel.size() - 1;
  const auto ai = static_cast<std::size_t>(m.spec.accel_axis);
  SensorStream even{odd_accel.kind, midpoints(odd_accel.timestamps_ns), {}, odd_accel.nominal_rate};
  for (std::size_t a = 0; a < odd_accel.axis_count(); ++a) {
    if (a == ai) {
      std::vector<double> v(n_mid);
      for (std::size_t j = 0; j < n_mid; ++j) v[j] = detail::to_sensor_units(p.spline[j], m, p.mid_baseline[j]);
      for (std::size_t r = 0; r < sf.stacked.x.rows; ++r) {
        const std::size_t j = sf.stacked.target_index[r];
        v[j] = detail::to_sensor_units(s2[r], m, p.mid_baseline[j]);
      }
      even.axes.push_back(std::move(v));
    } else {
      even.axes.push_back(spline_midpoints(odd_accel.timestamps_ns, odd_accel.axes[a]));
    }
  }
  return interleave(odd_accel, even);
}

}  // namespace stag
