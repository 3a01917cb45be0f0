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
#include <vector>

#include "stag/gbm.hpp"
#include "stag/ingest.hpp"

namespace stag::gbm {

// Flat text model format, one record per line:
//
//   stag-gbm 1
//   params <n_rounds> <learning_rate> <max_leaves> <max_depth> <min_samples_leaf> <n_bins> <seed>
//   base_score <v>
//   features <F>
//   edges <feature> <count> <e0> <e1> ...
//   trees <T>
//   node <tree> <id> split <feature> <bin> <left> <right>
//   node <tree> <id> leaf <value>
//   train_mse <count> <m0> <m1> ...
//   end
//
// Doubles use the shortest round-trip representation, so save/load is
// exact and reruns produce identical bytes.

inline constexpr std::string_view kModelMagic = "stag-gbm";
inline constexpr int kModelVersion = 1;

inline void save(const Model& m, std::ostream& os) {
  using stag::detail::format_double;
  const auto& p = m.params;
  os << kModelMagic << ' ' << kModelVersion << '\n';
  os << "params " << p.n_rounds << ' ' << format_double(p.learning_rate) << ' ' << p.max_leaves << ' '
     << p.max_depth << ' ' << p.min_samples_leaf << ' ' << p.n_bins << ' ' << p.seed << '\n';
  os << "base_score " << format_double(m.base_score) << '\n';
  os << "features " << m.n_features << '\n';
  for (std::size_t f = 0; f < m.bins.edges.size(); ++f) {
    os << "edges " << f << ' ' << m.bins.edges[f].size();
    for (double e : m.bins.edges[f]) os << ' ' << format_double(e);
    os << '\n';
  }
  os << "trees " << m.trees.size() << '\n';
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    const auto& nodes = m.trees[t].nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& n = nodes[i];
      os << "node " << t << ' ' << i << ' ';
      if (n.is_leaf) {
        os << "leaf " << format_double(n.value) << '\n';
      } else {
        os << "split " << n.feature << ' ' << n.threshold_bin << ' ' << n.left << ' ' << n.right << '\n';
      }
    }
  }
  os << "train_mse " << m.train_mse.size();
  for (double v : m.train_mse) os << ' ' << format_double(v);
  os << "\nend\n";
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& is, std::size_t line_offset = 0) : is_(is), line_(line_offset) {}

  std::istringstream next() {
    std::string raw;
    if (!std::getline(is_, raw)) throw ParseError(line_ + 1, "unexpected end of model");
    ++line_;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    return std::istringstream(raw);
  }

  std::size_t line() const { return line_; }

  void expect(std::istringstream& ss, std::string_view word) {
    std::string w;
    ss >> w;
    if (w != word) throw ParseError(line_, "expected '" + std::string(word) + "', got '" + w + "'");
  }

  template <typename T>
  T read(std::istringstream& ss) {
    std::string tok;
    if (!(ss >> tok)) throw ParseError(line_, "missing field");
    auto v = stag::detail::parse_number<T>(tok);
    if (!v) throw ParseError(line_, "bad number '" + tok + "'");
    return *v;
  }

 private:
  std::istream& is_;
  std::size_t line_;
};

}  // namespace detail

inline Model load(std::istream& is, detail::LineReader* shared = nullptr) {
  detail::LineReader own(is);
  detail::LineReader& r = shared ? *shared : own;
  Model m;
  auto ss = r.next();
  r.expect(ss, kModelMagic);
  if (r.read<int>(ss) != kModelVersion) throw ParseError(r.line(), "unsupported model version");

  ss = r.next();
  r.expect(ss, "params");
  m.params.n_rounds = r.read<std::size_t>(ss);
  m.params.learning_rate = r.read<double>(ss);
  m.params.max_leaves = r.read<std::size_t>(ss);
  m.params.max_depth = r.read<std::size_t>(ss);
  m.params.min_samples_leaf = r.read<std::size_t>(ss);
  m.params.n_bins = r.read<std::size_t>(ss);
  m.params.seed = r.read<std::uint64_t>(ss);

  ss = r.next();
  r.expect(ss, "base_score");
  m.base_score = r.read<double>(ss);

  ss = r.next();
  r.expect(ss, "features");
  m.n_features = r.read<std::size_t>(ss);
  m.bins.edges.resize(m.n_features);
  for (std::size_t f = 0; f < m.n_features; ++f) {
    ss = r.next();
    r.expect(ss, "edges");
    if (r.read<std::size_t>(ss) != f) throw ParseError(r.line(), "edges out of order");
    const auto count = r.read<std::size_t>(ss);
    if (count > 254) throw ParseError(r.line(), "too many bin edges");
    for (std::size_t i = 0; i < count; ++i) m.bins.edges[f].push_back(r.read<double>(ss));
  }

  ss = r.next();
  r.expect(ss, "trees");
  m.trees.resize(r.read<std::size_t>(ss));
  for (;;) {
    ss = r.next();
    std::string kind;
    ss >> kind;
    if (kind == "train_mse") {
      const auto count = r.read<std::size_t>(ss);
      for (std::size_t i = 0; i < count; ++i) m.train_mse.push_back(r.read<double>(ss));
      break;
    }
    if (kind != "node") throw ParseError(r.line(), "expected node record");
    const auto t = r.read<std::size_t>(ss);
    const auto id = r.read<std::size_t>(ss);
    if (t >= m.trees.size()) throw ParseError(r.line(), "tree id out of range");
    auto& nodes = m.trees[t].nodes;
    if (id != nodes.size()) throw ParseError(r.line(), "node ids must be consecutive");
    Node n;
    std::string nk;
    ss >> nk;
    if (nk == "leaf") {
      n.value = r.read<double>(ss);
    } else if (nk == "split") {
      n.is_leaf = false;
      n.feature = r.read<std::size_t>(ss);
      n.threshold_bin = r.read<std::size_t>(ss);
      n.left = r.read<std::size_t>(ss);
      n.right = r.read<std::size_t>(ss);
      if (n.feature >= m.n_features || n.threshold_bin >= m.bins.edges[n.feature].size()) {
        throw ParseError(r.line(), "split refers to a missing bin edge");
      }
      n.threshold = m.bins.edges[n.feature][n.threshold_bin];
    } else {
      throw ParseError(r.line(), "unknown node kind '" + nk + "'");
    }
    nodes.push_back(n);
  }
  ss = r.next();
  r.expect(ss, "end");

  for (const auto& t : m.trees) {
    if (t.nodes.empty()) throw ParseError(r.line(), "tree without nodes");
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      const auto& n = t.nodes[i];
      // children come after their parent, which also rules out cycles
      if (!n.is_leaf && (n.left <= i || n.right <= i || n.left >= t.nodes.size() || n.right >= t.nodes.size())) {
        throw ParseError(r.line(), "child index out of range");
      }
    }
  }
  return m;
}

inline std::string to_text(const Model& m) {
  std::ostringstream os;
  save(m, os);
  return os.str();
}

}  // namespace stag::gbm
