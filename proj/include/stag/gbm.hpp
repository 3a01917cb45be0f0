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
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stag/error.hpp"
#include "stag/stats.hpp"

namespace stag::gbm {

/// Dense row-major feature matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }

  Matrix select_rows(std::span<const std::size_t> idx) const {
    Matrix out(idx.size(), cols);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(idx[i] * cols), cols,
                  out.values.begin() + static_cast<std::ptrdiff_t>(i * cols));
    }
    return out;
  }
};

struct Params {
  std::size_t n_rounds = 100;
  double learning_rate = 0.1;
  std::size_t max_leaves = 31;
  std::size_t max_depth = 6;
  std::size_t min_samples_leaf = 20;
  std::size_t n_bins = 255;
  std::uint64_t seed = 0;

  bool operator==(const Params&) const = default;
};

inline void validate(const Params& p) {
  if (p.n_rounds < 1) throw ArgumentError("n_rounds must be >= 1");
  if (!(p.learning_rate > 0.0 && p.learning_rate <= 1.0)) throw ArgumentError("learning_rate must be in (0, 1]");
  if (p.max_leaves < 2) throw ArgumentError("max_leaves must be >= 2");
  if (p.n_bins < 2 || p.n_bins > 255) throw ArgumentError("n_bins must be in [2, 255]");
  if (p.min_samples_leaf < 1) throw ArgumentError("min_samples_leaf must be >= 1");
}

/// Per-feature bin upper edges. A value x falls in bin b = #{edges < x}, so
/// "bin <= b" is the same test as "x <= edges[b]".
struct BinMapper {
  std::vector<std::vector<double>> edges;

  std::size_t bin_count(std::size_t f) const { return edges[f].size() + 1; }

  std::uint8_t bin(std::size_t f, double x) const {
    const auto& e = edges[f];
    return static_cast<std::uint8_t>(std::lower_bound(e.begin(), e.end(), x) - e.begin());
  }

  /// Quantile edges placed halfway between neighbouring sorted values. When
  /// a feature has at most `n_bins` distinct values every value gets its own
  /// bin.
  static BinMapper fit(const Matrix& x, std::size_t n_bins) {
    BinMapper m;
    m.edges.resize(x.cols);
    std::vector<double> col(x.rows);
    for (std::size_t f = 0; f < x.cols; ++f) {
      for (std::size_t i = 0; i < x.rows; ++i) col[i] = x(i, f);
      std::sort(col.begin(), col.end());
      std::vector<double> distinct = col;
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      auto& e = m.edges[f];
      if (distinct.size() <= n_bins) {
        for (std::size_t i = 0; i + 1 < distinct.size(); ++i) e.push_back(0.5 * (distinct[i] + distinct[i + 1]));
      } else {
        const std::size_t n = col.size();
        for (std::size_t b = 1; b < n_bins; ++b) {
          const std::size_t pos = b * n / n_bins;
          if (pos == 0 || pos >= n || col[pos - 1] == col[pos]) continue;
          const double edge = 0.5 * (col[pos - 1] + col[pos]);
          if (e.empty() || edge > e.back()) e.push_back(edge);
        }
      }
    }
    return m;
  }
};

struct Node {
  bool is_leaf = true;
  std::size_t feature = 0;
  std::size_t threshold_bin = 0;
  double threshold = 0.0;  // edges[feature][threshold_bin]; go left when x <= threshold
  std::size_t left = 0;
  std::size_t right = 0;
  double value = 0.0;  // leaf output

  bool operator==(const Node&) const = default;
};

/// Regression tree; node 0 is the root.
struct Tree {
  std::vector<Node> nodes;

  double predict(std::span<const double> row) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf) {
      const Node& n = nodes[i];
      i = row[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes[i].value;
  }

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.is_leaf; }));
  }

  bool operator==(const Tree&) const = default;
};

struct Model {
  double base_score = 0.0;
  std::vector<Tree> trees;
  BinMapper bins;
  Params params;
  std::size_t n_features = 0;
  std::vector<double> train_mse;  // after base score, then after each round

  double predict_row(std::span<const double> row) const {
    double sum = 0.0;
    for (const auto& t : trees) sum += t.predict(row);
    return base_score + params.learning_rate * sum;
  }
};

/// Best split of one node found over histogram bins.
struct Split {
  double gain = 0.0;
  std::size_t feature = 0;
  std::size_t bin = 0;
  bool valid = false;
};

namespace detail {

/// Column-major bin codes of the training matrix.
struct BinnedMatrix {
  std::size_t rows = 0;
  std::vector<std::uint8_t> codes;

  std::uint8_t at(std::size_t r, std::size_t f) const { return codes[f * rows + r]; }
};

inline BinnedMatrix bin_matrix(const Matrix& x, const BinMapper& bins) {
  BinnedMatrix b{x.rows, std::vector<std::uint8_t>(x.rows * x.cols)};
  for (std::size_t f = 0; f < x.cols; ++f) {
    for (std::size_t r = 0; r < x.rows; ++r) b.codes[f * x.rows + r] = bins.bin(f, x(r, f));
  }
  return b;
}

/// Variance-reduction gain (unit hessian): L^2/nL + R^2/nR - G^2/n.
inline double split_gain(double left_sum, double left_n, double total_sum, double total_n) {
  const double right_sum = total_sum - left_sum;
  const double right_n = total_n - left_n;
  return left_sum * left_sum / left_n + right_sum * right_sum / right_n - total_sum * total_sum / total_n;
}

inline Split best_split(const BinnedMatrix& xb, const BinMapper& bins, std::span<const std::size_t> rows,
                        std::span<const double> residual, std::size_t min_leaf) {
  Split best;
  const std::size_t n = rows.size();
  if (n < 2 * min_leaf) return best;
  double total = 0.0;
  for (std::size_t r : rows) total += residual[r];
  const double total_n = static_cast<double>(n);

  std::vector<double> sum;
  std::vector<std::size_t> cnt;
  for (std::size_t f = 0; f < bins.edges.size(); ++f) {
    const std::size_t nb = bins.bin_count(f);
    if (nb < 2) continue;
    sum.assign(nb, 0.0);
    cnt.assign(nb, 0);
    const std::uint8_t* col = xb.codes.data() + f * xb.rows;
    for (std::size_t r : rows) {
      sum[col[r]] += residual[r];
      ++cnt[col[r]];
    }
    double left_sum = 0.0;
    std::size_t left_n = 0;
    for (std::size_t b = 0; b + 1 < nb; ++b) {
      left_sum += sum[b];
      left_n += cnt[b];
      if (left_n < min_leaf) continue;
      if (n - left_n < min_leaf) break;
      const double g = split_gain(left_sum, static_cast<double>(left_n), total, total_n);
      if (g > best.gain) best = {g, f, b, true};
    }
  }
  return best;
}

struct Leaf {
  std::size_t node = 0;
  std::size_t depth = 0;
  std::vector<std::size_t> rows;
  Split split;
};

}  // namespace detail

/// Grows one tree leaf-wise on `residual`. The leaf with the largest gain
/// is split next (earliest-created leaf on ties) until `max_leaves` is
/// reached, no split has positive gain, or every leaf sits at `max_depth`.
/// `leaf_rows` receives the training rows of each leaf node.
inline Tree grow_tree(const detail::BinnedMatrix& xb, const BinMapper& bins, std::span<const double> residual,
                      const Params& p, std::vector<std::pair<std::size_t, std::vector<std::size_t>>>* leaf_rows) {
  Tree tree;
  tree.nodes.push_back(Node{});
  std::vector<detail::Leaf> leaves;
  {
    detail::Leaf root;
    root.rows.resize(xb.rows);
    std::iota(root.rows.begin(), root.rows.end(), std::size_t{0});
    if (p.max_depth > 0) root.split = detail::best_split(xb, bins, root.rows, residual, p.min_samples_leaf);
    leaves.push_back(std::move(root));
  }

  while (leaves.size() < p.max_leaves) {
    std::size_t pick = leaves.size();
    double best_gain = 0.0;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (leaves[i].split.valid && leaves[i].split.gain > best_gain) {
        best_gain = leaves[i].split.gain;
        pick = i;
      }
    }
    if (pick == leaves.size()) break;

    detail::Leaf parent = std::move(leaves[pick]);
    leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(pick));
    const Split s = parent.split;

    detail::Leaf left;
    detail::Leaf right;
    left.depth = right.depth = parent.depth + 1;
    const std::uint8_t* col = xb.codes.data() + s.feature * xb.rows;
    for (std::size_t r : parent.rows) (col[r] <= s.bin ? left.rows : right.rows).push_back(r);

    left.node = tree.nodes.size();
    right.node = left.node + 1;
    Node& pn = tree.nodes[parent.node];
    pn.is_leaf = false;
    pn.feature = s.feature;
    pn.threshold_bin = s.bin;
    pn.threshold = bins.edges[s.feature][s.bin];
    pn.left = left.node;
    pn.right = right.node;
    tree.nodes.push_back(Node{});
    tree.nodes.push_back(Node{});

    for (auto* child : {&left, &right}) {
      if (child->depth < p.max_depth) {
        child->split = detail::best_split(xb, bins, child->rows, residual, p.min_samples_leaf);
      }
    }
    // Children keep creation order behind older leaves.
    leaves.push_back(std::move(left));
    leaves.push_back(std::move(right));
  }

  const bool single_leaf = tree.nodes.size() == 1;
  for (auto& leaf : leaves) {
    // A lone root would fit the mean residual, which is zero in exact
    // arithmetic under squared loss; store the exact value.
    double v = 0.0;
    if (!single_leaf) {
      double s = 0.0;
      for (std::size_t r : leaf.rows) s += residual[r];
      v = s / static_cast<double>(leaf.rows.size());
    }
    tree.nodes[leaf.node].value = v;
    if (leaf_rows) leaf_rows->emplace_back(leaf.node, std::move(leaf.rows));
  }
  return tree;
}

inline void check_inputs(const Matrix& x, std::span<const double> y) {
  if (x.rows != y.size()) throw ArgumentError("feature rows and target count differ");
  if (x.values.size() != x.rows * x.cols) throw ArgumentError("matrix storage does not match its shape");
  for (double v : x.values) {
    if (!std::isfinite(v)) throw ArgumentError("non-finite feature value");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw ArgumentError("non-finite target value");
  }
}

/// Squared-loss gradient boosting over histogram-binned features. Bins are
/// computed once from the training matrix. Each round fits a tree to the
/// current residuals with leaf value = mean residual.
inline Model fit(const Matrix& x, std::span<const double> y, const Params& params) {
  validate(params);
  check_inputs(x, y);
  if (x.rows < 2 * params.min_samples_leaf || x.rows == 0) {
    throw ArgumentError("need at least 2 * min_samples_leaf rows");
  }
  if (x.cols == 0) throw ArgumentError("no feature columns");

  Model m;
  m.params = params;
  m.n_features = x.cols;
  m.bins = BinMapper::fit(x, params.n_bins);
  m.base_score = mean(y);
  const auto xb = detail::bin_matrix(x, m.bins);

  const std::size_t n = x.rows;
  std::vector<double> tree_sum(n, 0.0);
  std::vector<double> residual(n);
  std::vector<double> pred(n, m.base_score);
  m.train_mse.push_back(mean_squared_error(y, pred));

  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> leaf_rows;
  for (std::size_t t = 0; t < params.n_rounds; ++t) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - pred[i];
    leaf_rows.clear();
    Tree tree = grow_tree(xb, m.bins, residual, params, &leaf_rows);
    for (const auto& [node, rows] : leaf_rows) {
      const double v = tree.nodes[node].value;
      for (std::size_t r : rows) {
        tree_sum[r] += v;
        pred[r] = m.base_score + params.learning_rate * tree_sum[r];
      }
    }
    m.trees.push_back(std::move(tree));
    const double mse = mean_squared_error(y, pred);
    const double prev = m.train_mse.back();
    if (mse > prev + 1e-12 * prev) {
      throw std::logic_error("training loss increased at round " + std::to_string(t + 1));
    }
    m.train_mse.push_back(mse);
  }
  return m;
}

inline std::vector<double> predict(const Model& m, const Matrix& x) {
  if (x.cols != m.n_features) {
    throw ArgumentError("model expects " + std::to_string(m.n_features) + " features, got " + std::to_string(x.cols));
  }
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = m.predict_row(x.row(r));
  return out;
}

// ---------------------------------------------------------------------------
// Grid search with k-fold cross-validation
// ---------------------------------------------------------------------------

struct CvReport {
  std::vector<Params> grid;
  std::vector<std::vector<double>> fold_mse;  // [grid point][fold]
  std::vector<std::vector<double>> fold_r2;
  std::vector<double> mean_mse;
  std::size_t best_index = 0;
  Params best_params;

  bool operator==(const CvReport&) const = default;
};

/// Seeded fold id per row: shuffled positions dealt round-robin.
inline std::vector<std::size_t> assign_folds(std::size_t rows, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> fold(rows);
  for (std::size_t p = 0; p < rows; ++p) fold[order[p]] = p % k;
  return fold;
}

/// Out-of-fold predictions: each row is predicted by the model fitted on
/// the other k - 1 folds (same fold assignment as grid_search_cv).
inline std::vector<double> cross_val_predict(const Matrix& x, std::span<const double> y, const Params& p,
                                             std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ArgumentError("k must be >= 2");
  check_inputs(x, y);
  if (x.rows < k) throw ArgumentError("fewer rows than folds");
  const auto fold = assign_folds(x.rows, k, seed);
  std::vector<double> out(x.rows);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> tr;
    std::vector<std::size_t> va;
    for (std::size_t r = 0; r < x.rows; ++r) (fold[r] == f ? va : tr).push_back(r);
    std::vector<double> yt;
    for (std::size_t r : tr) yt.push_back(y[r]);
    const Model m = fit(x.select_rows(tr), yt, p);
    const auto pv = predict(m, x.select_rows(va));
    for (std::size_t i = 0; i < va.size(); ++i) out[va[i]] = pv[i];
  }
  return out;
}

/// Mean validation MSE over k folds for every grid point; the argmin wins,
/// first grid point on ties.
inline CvReport grid_search_cv(const Matrix& x, std::span<const double> y, const std::vector<Params>& grid,
                               std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ArgumentError("k must be >= 2");
  if (grid.empty()) throw ArgumentError("empty parameter grid");
  check_inputs(x, y);
  if (x.rows < k) throw ArgumentError("fewer rows than folds");

  const auto fold = assign_folds(x.rows, k, seed);
  std::vector<std::vector<std::size_t>> train_idx(k);
  std::vector<std::vector<std::size_t>> valid_idx(k);
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t f = 0; f < k; ++f) (f == fold[r] ? valid_idx : train_idx)[f].push_back(r);
  }

  CvReport rep;
  rep.grid = grid;
  for (const auto& p : grid) {
    std::vector<double> mses;
    std::vector<double> r2s;
    for (std::size_t f = 0; f < k; ++f) {
      const Matrix xt = x.select_rows(train_idx[f]);
      std::vector<double> yt;
      for (std::size_t r : train_idx[f]) yt.push_back(y[r]);
      const Model m = fit(xt, yt, p);
      const Matrix xv = x.select_rows(valid_idx[f]);
      std::vector<double> yv;
      for (std::size_t r : valid_idx[f]) yv.push_back(y[r]);
      const auto pv = predict(m, xv);
      mses.push_back(mean_squared_error(yv, pv));
      double r2 = std::numeric_limits<double>::quiet_NaN();
      if (yv.size() >= 2 && std::any_of(yv.begin(), yv.end(), [&](double v) { return v != yv.front(); })) {
        r2 = r_squared(yv, pv);
      }
      r2s.push_back(r2);
    }
    rep.mean_mse.push_back(std::accumulate(mses.begin(), mses.end(), 0.0) / static_cast<double>(k));
    rep.fold_mse.push_back(std::move(mses));
    rep.fold_r2.push_back(std::move(r2s));
  }
  rep.best_index = static_cast<std::size_t>(std::min_element(rep.mean_mse.begin(), rep.mean_mse.end()) -
                                            rep.mean_mse.begin());
  rep.best_params = grid[rep.best_index];
  return rep;
}

}  // namespace stag::gbm
