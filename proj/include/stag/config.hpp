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

#include <array>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stag/error.hpp"
#include "stag/fusion.hpp"
#include "stag/gbm.hpp"
#include "stag/ingest.hpp"
#include "stag/sensorsim.hpp"

namespace stag {

/// Every pipeline parameter with its default. Loaded from a flat
/// `key = value` file (`#` starts a comment); command-line overrides are
/// applied afterwards through `set`.
struct RunConfig {
  std::uint64_t seed = 42;
  std::filesystem::path out = "out";

  // simulation
  int scenario = 3;
  double rate = 200.0;  // capture rate; ground truth is recorded at twice this
  double duration = 60.0;
  std::size_t n_components = 3;
  double noise_floor = 0.0;
  ChannelModel channel;
  double jitter_std_ms = 0.0;

  // features and preprocessing
  FeatureSpec features;
  bool noise_reduction = true;

  // boosting grid; list-valued keys expand to their cartesian product
  std::vector<std::size_t> n_rounds = {100};
  std::vector<double> learning_rate = {0.1, 0.2};
  std::vector<std::size_t> max_leaves = {31};
  std::vector<std::size_t> max_depth = {6};
  std::vector<std::size_t> min_samples_leaf = {20};
  std::size_t n_bins = 255;
  std::size_t cv_folds = 5;

  // dataset split
  std::array<double, 3> split = {0.70, 0.15, 0.15};
  double segment_seconds = 1.0;

  // files; empty means <out>/<default name>
  std::filesystem::path accel_csv;
  std::filesystem::path gyro_csv;
  std::filesystem::path capture_csv;
  std::filesystem::path model_path;
  std::filesystem::path upsampled_csv;
  std::filesystem::path transcripts;
  std::filesystem::path ref_entities;
  std::filesystem::path hyp_entities;

  std::filesystem::path resolve(const std::filesystem::path& p, const char* name) const {
    return p.empty() ? out / name : p;
  }
  std::filesystem::path accel_path() const { return resolve(accel_csv, "accel.csv"); }
  std::filesystem::path gyro_path() const { return resolve(gyro_csv, "gyro.csv"); }
  std::filesystem::path capture_path() const { return resolve(capture_csv, "accel_capture.csv"); }
  std::filesystem::path model_file() const { return resolve(model_path, "stag_model.txt"); }
  std::filesystem::path upsampled_path() const { return resolve(upsampled_csv, "upsampled.csv"); }

  std::vector<gbm::Params> grid() const {
    std::vector<gbm::Params> g;
    for (auto nr : n_rounds)
      for (auto lr : learning_rate)
        for (auto ml : max_leaves)
          for (auto md : max_depth)
            for (auto msl : min_samples_leaf) {
              gbm::Params p{nr, lr, ml, md, msl, n_bins, seed};
              gbm::validate(p);
              g.push_back(p);
            }
    return g;
  }

  /// Applies one `key = value` setting; throws ArgumentError on an unknown
  /// key or an unparsable value.
  void set(const std::string& key, const std::string& value);

  static const std::vector<std::string>& keys();
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_value(const std::string& key, const std::string& v) {
  const auto r = parse_number<T>(trim(v));
  if (!r) throw ArgumentError("bad value for " + key + ": '" + v + "'");
  return *r;
}

template <>
inline double parse_value<double>(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  const auto r = parse_number<double>(t);
  if (!r) throw ArgumentError("bad value for " + key + ": '" + v + "'");
  return *r;
}

template <>
inline bool parse_value<bool>(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ArgumentError("bad boolean for " + key + ": '" + v + "'");
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  for (auto part : split(v, ',')) out.push_back(parse_value<T>(key, std::string(part)));
  if (out.empty()) throw ArgumentError("empty list for " + key);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <typename T, typename Member>
Setter scalar(Member member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = parse_value<T>(k, v); };
}

template <typename T, typename Member>
Setter list(Member member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = parse_list<T>(k, v); };
}

template <typename Member>
Setter path(Member member) {
  return [member](RunConfig& c, const std::string&, const std::string& v) { c.*member = trim(v); };
}

template <typename T, typename Member>
Setter channel(Member member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v) { c.channel.*member = parse_value<T>(k, v); };
}

inline const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", scalar<std::uint64_t>(&RunConfig::seed)},
      {"out", path(&RunConfig::out)},
      {"scenario", scalar<int>(&RunConfig::scenario)},
      {"rate", scalar<double>(&RunConfig::rate)},
      {"duration", scalar<double>(&RunConfig::duration)},
      {"n_components", scalar<std::size_t>(&RunConfig::n_components)},
      {"noise_floor", scalar<double>(&RunConfig::noise_floor)},
      {"jitter_std_ms", scalar<double>(&RunConfig::jitter_std_ms)},
      {"accel_z_gain", channel<double>(&ChannelModel::accel_z_gain)},
      {"gyro_x_gain", channel<double>(&ChannelModel::gyro_x_gain)},
      {"gyro_y_gain", channel<double>(&ChannelModel::gyro_y_gain)},
      {"accel_snr_db", channel<double>(&ChannelModel::accel_snr_db)},
      {"gyro_snr_db", channel<double>(&ChannelModel::gyro_snr_db)},
      {"cross_axis_leak", channel<double>(&ChannelModel::cross_axis_leak)},
      {"gyro_coupling",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const auto t = trim(v);
         if (t == "copy") {
           c.channel.gyro_coupling = GyroCoupling::copy;
         } else if (t == "derivative") {
           c.channel.gyro_coupling = GyroCoupling::derivative;
         } else {
           throw ArgumentError("bad value for " + k + ": '" + v + "'");
         }
       }},
      {"accel_axis",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const auto a = parse_axis(trim(v));
         if (!a) throw ArgumentError("bad value for " + k + ": '" + v + "'");
         c.features.accel_axis = *a;
       }},
      {"accel_window",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.features.accel_window = parse_value<std::size_t>(k, v);
       }},
      {"gyro_window",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.features.gyro_window = parse_value<std::size_t>(k, v);
       }},
      {"gyro_axes",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.features.gyro_axes.clear();
         const auto t = trim(v);
         if (t == "none") return;
         for (auto part : split(t, ',')) {
           const auto a = parse_axis(trim(part));
           if (!a) throw ArgumentError("bad value for " + k + ": '" + v + "'");
           c.features.gyro_axes.push_back(*a);
         }
       }},
      {"include_spline",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.features.include_spline = parse_value<bool>(k, v);
       }},
      {"noise_reduction", scalar<bool>(&RunConfig::noise_reduction)},
      {"grid.n_rounds", list<std::size_t>(&RunConfig::n_rounds)},
      {"grid.learning_rate", list<double>(&RunConfig::learning_rate)},
      {"grid.max_leaves", list<std::size_t>(&RunConfig::max_leaves)},
      {"grid.max_depth", list<std::size_t>(&RunConfig::max_depth)},
      {"grid.min_samples_leaf", list<std::size_t>(&RunConfig::min_samples_leaf)},
      {"grid.n_bins", scalar<std::size_t>(&RunConfig::n_bins)},
      {"cv_folds", scalar<std::size_t>(&RunConfig::cv_folds)},
      {"split.train", [](RunConfig& c, const std::string& k, const std::string& v) { c.split[0] = parse_value<double>(k, v); }},
      {"split.validation", [](RunConfig& c, const std::string& k, const std::string& v) { c.split[1] = parse_value<double>(k, v); }},
      {"split.test", [](RunConfig& c, const std::string& k, const std::string& v) { c.split[2] = parse_value<double>(k, v); }},
      {"segment_seconds", scalar<double>(&RunConfig::segment_seconds)},
      {"accel_csv", path(&RunConfig::accel_csv)},
      {"gyro_csv", path(&RunConfig::gyro_csv)},
      {"capture_csv", path(&RunConfig::capture_csv)},
      {"model", path(&RunConfig::model_path)},
      {"upsampled_csv", path(&RunConfig::upsampled_csv)},
      {"transcripts", path(&RunConfig::transcripts)},
      {"ref_entities", path(&RunConfig::ref_entities)},
      {"hyp_entities", path(&RunConfig::hyp_entities)},
  };
  return table;
}

}  // namespace detail

inline void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& table = detail::setters();
  const auto it = table.find(detail::trim(key));
  if (it == table.end()) throw ArgumentError("unknown config key '" + key + "'");
  it->second(*this, it->first, value);
}

inline const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : detail::setters()) out.push_back(name);
    return out;
  }();
  return k;
}

/// Applies a config file on top of `cfg`. Errors carry the line number.
inline void load_config(std::istream& is, RunConfig& cfg) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    try {
      cfg.set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    } catch (const ArgumentError& e) {
      throw ParseError(line_no, e.what());
    }
  }
}

inline void load_config(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open config " + path.string());
  load_config(is, cfg);
}

}  // namespace stag
