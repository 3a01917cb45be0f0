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

// stag: simulate misaligned IMU captures, train the fusion model, upsample
// and score.
//
//   stag [--config PATH] [--seed N] [--out DIR] [--set key=value]... <command>
//
// Exit status: 0 success, 1 internal failure, 2 bad input.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stag/stag.hpp"

namespace {

namespace fs = std::filesystem;
using namespace stag;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitBadInput = 2;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot create directory " + dir.string());
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open " + path.string() + " for writing");
  return os;
}

std::size_t segment_samples(const RunConfig& cfg) {
  const double n = std::round(cfg.segment_seconds * 2.0 * cfg.rate);
  if (!(n >= 4.0)) throw ArgumentError("segment_seconds too short for the configured rate");
  return static_cast<std::size_t>(n);
}

// Ground truth at twice the capture rate, cut into segments and split the
// same way by train and eval.
struct Dataset {
  std::vector<BifurcatedSet> sets;
  DatasetSplit split;
};

Dataset load_dataset(const RunConfig& cfg) {
  const auto truth = downsample(read_csv(cfg.accel_path()), 2.0 * cfg.rate);
  const auto gyro = read_csv(cfg.gyro_path());
  Dataset d;
  d.sets = segment_recording(truth, gyro, segment_samples(cfg));
  d.split = split_dataset(d.sets.size(), cfg.split, cfg.seed);
  return d;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto src = synth_source(cfg.seed, cfg.duration, cfg.n_components, cfg.noise_floor);
  const auto truth = sample_stream(src, cfg.channel, SensorKind::accel, 2.0 * cfg.rate, {0.0, 0.0});
  const auto [capture, gyro] = simulate_scenario(cfg.scenario, src, cfg.channel, cfg.rate,
                                                 cfg.jitter_std_ms * 1e-3);
  ensure_dir(cfg.out);
  write_csv(truth, cfg.accel_path());
  write_csv(gyro, cfg.gyro_path());
  write_csv(capture, cfg.capture_path());
  std::printf("deviation_pct=%.4f\n", deviation_from_center(capture, gyro));
  return kExitOk;
}

int cmd_train(const RunConfig& cfg) {
  const auto data = load_dataset(cfg);
  const auto train = take(data.sets, data.split.train);
  const auto res = train_stag(train, cfg.features, cfg.grid(),
                              {cfg.cv_folds, cfg.seed, cfg.noise_reduction});
  {
    auto os = open_output(cfg.model_file());
    save(res.model, os);
    if (!os) throw InputError("write failed: " + cfg.model_file().string());
  }
  std::ostringstream report;
  for (const auto& r : {res.spline, res.gbm, res.combined}) report << format_report(r, "train ") << '\n';
  if (!data.split.validation.empty()) {
    for (const auto& r : evaluate_stag(res.model, take(data.sets, data.split.validation))) {
      report << format_report(r, "validation ") << '\n';
    }
  }
  const auto& best = res.cv.best_params;
  report << "best n_rounds=" << best.n_rounds << " learning_rate=" << best.learning_rate
         << " max_leaves=" << best.max_leaves << " max_depth=" << best.max_depth
         << " min_samples_leaf=" << best.min_samples_leaf << '\n';
  auto os = open_output(cfg.out / "train_report.txt");
  os << report.str();
  std::cout << report.str();
  return kExitOk;
}

int cmd_upsample(const RunConfig& cfg) {
  auto is = std::ifstream(cfg.model_file(), std::ios::binary);
  if (!is) throw InputError("cannot open " + cfg.model_file().string());
  const auto model = load_stag_model(is);
  const auto capture = read_csv(cfg.capture_path());
  const auto gyro = read_csv(cfg.gyro_path());
  const auto up = upsample(model, capture, gyro);
  if (cfg.upsampled_path().has_parent_path()) ensure_dir(cfg.upsampled_path().parent_path());
  write_csv(up, cfg.upsampled_path());
  std::printf("samples=%zu rate_hz=%g\n", up.size(), up.nominal_rate);
  return kExitOk;
}

CorpusReport score_transcripts(const RunConfig& cfg) {
  if (cfg.transcripts.empty()) throw ArgumentError("transcripts path not configured");
  const auto pairs = read_transcripts(cfg.transcripts);
  std::optional<std::vector<EntityRecord>> ref;
  std::optional<std::vector<EntityRecord>> hyp;
  if (!cfg.ref_entities.empty()) ref = read_entities(cfg.ref_entities);
  if (!cfg.hyp_entities.empty()) hyp = read_entities(cfg.hyp_entities);
  if (ref.has_value() != hyp.has_value()) {
    throw ArgumentError("ref_entities and hyp_entities must be given together");
  }
  return corpus_report(pairs, ref, hyp);
}

int cmd_metrics(const RunConfig& cfg) {
  const auto rep = score_transcripts(cfg);
  {
    auto os = open_output(cfg.out / "metrics.txt");
    write_report(rep, os);
  }
  {
    auto os = open_output(cfg.out / "metrics_details.tsv");
    write_details(rep, os);
  }
  write_report(rep, std::cout);
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg) {
  std::ostringstream report;
  const bool have_model = fs::exists(cfg.model_file());
  if (!have_model && cfg.transcripts.empty()) {
    throw InputError("nothing to evaluate: no model at " + cfg.model_file().string() +
                     " and no transcripts configured");
  }
  if (have_model) {
    auto is = std::ifstream(cfg.model_file(), std::ios::binary);
    if (!is) throw InputError("cannot open " + cfg.model_file().string());
    const auto model = load_stag_model(is);
    const auto data = load_dataset(cfg);
    if (data.split.test.empty()) throw InputError("test split is empty");
    for (const auto& r : evaluate_stag(model, take(data.sets, data.split.test))) {
      report << format_report(r, "test ") << '\n';
    }
  }
  if (!cfg.transcripts.empty()) write_report(score_transcripts(cfg), report);
  auto os = open_output(cfg.out / "eval_report.txt");
  os << report.str();
  std::cout << report.str();
  return kExitOk;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ArgumentError& e) {
    std::cerr << "stag: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const InputError& e) {
    std::cerr << "stag: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const ParseError& e) {
    std::cerr << "stag: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const EmptyInputError& e) {
    std::cerr << "stag: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const DegenerateInputError& e) {
    std::cerr << "stag: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "stag: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "stag: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Misaligned IMU capture, fusion upsampling and transcript scoring"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--seed", seed, "seed for simulation, splits and boosting");
  app.add_option("--out", out, "output directory");
  app.add_option("--set", overrides, "override one config key (key=value); repeatable");

  auto* simulate = app.add_subcommand("simulate", "write accel/gyro CSVs and report misalignment");
  auto* train = app.add_subcommand("train", "fit the fusion model on the training split");
  auto* up = app.add_subcommand("upsample", "reconstruct the double-rate accelerometer");
  auto* eval = app.add_subcommand("eval", "score the model on the test split and/or transcripts");
  auto* metrics = app.add_subcommand("metrics", "WER/SER/SEER over transcript and entity files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitBadInput;
  }

  RunConfig cfg;
  const int rc = guarded([&] {
    if (!config_path.empty()) load_config(fs::path(config_path), cfg);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ArgumentError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.seed = *seed;
    if (out) cfg.out = *out;
    return kExitOk;
  });
  if (rc != kExitOk) return rc;

  if (*simulate) return guarded([&] { return cmd_simulate(cfg); });
  if (*train) return guarded([&] { return cmd_train(cfg); });
  if (*up) return guarded([&] { return cmd_upsample(cfg); });
  if (*eval) return guarded([&] { return cmd_eval(cfg); });
  if (*metrics) return guarded([&] { return cmd_metrics(cfg); });
  return kExitInternal;
}
