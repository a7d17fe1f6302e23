#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

#include "regscope/ml/common.hpp"
#include "regscope/ml/model.hpp"

namespace regscope {

inline constexpr std::size_t kDefaultBoostRounds = 100;
inline constexpr double kDefaultBoostLearningRate = 0.1;
inline constexpr int kDefaultBoostMaxDepth = 3;

namespace boost_detail {

// Regression tree over binary features for one boosting step. Structure is
// chosen by least-squares gain on the gradients,
//     G_L^2/n_L + G_R^2/n_R   (maximized; ties -> lowest feature index),
// and leaves apply the second-order update  -G/H  (here y-p residuals flip
// the sign: leaf = sum(g) / (sum(h) + eps)). A split is taken whenever both
// children are non-empty, mirroring the classification builder's stance on
// zero-gain structure.
struct GradientTreeBuilder {
  const DesignMatrix& m;
  const std::vector<double>& g;  // residual y - p, per row
  const std::vector<double>& h;  // p(1-p), per row
  int max_depth;

  Tree build(const std::vector<std::size_t>& rows) {
    Tree t;
    build_node(t, rows, 0);
    return t;
  }

  void make_leaf(Tree& t, std::size_t node, double gs, double hs) {
    t.nodes[node].value = {gs / (hs + 1e-12)};
  }

  int build_node(Tree& t, const std::vector<std::size_t>& rows, int depth) {
    const std::size_t node = t.nodes.size();
    t.nodes.emplace_back();

    double gs = 0, hs = 0, gmin = 0, gmax = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double gi = g[rows[i]];
      gs += gi;
      hs += h[rows[i]];
      if (i == 0) {
        gmin = gmax = gi;
      } else {
        if (gi < gmin) gmin = gi;
        if (gi > gmax) gmax = gi;
      }
    }

    if (depth >= max_depth || rows.size() < 2 || gmax - gmin < 1e-15) {
      make_leaf(t, node, gs, hs);
      return static_cast<int>(node);
    }

    bool found = false;
    std::size_t best_f = 0;
    double best_score = 0;
    for (std::size_t f = 0; f < m.d; ++f) {
      double gl = 0;
      std::size_t nl = 0;
      for (std::size_t r : rows)
        if (!m.at(r, f)) {
          gl += g[r];
          ++nl;
        }
      std::size_t nr = rows.size() - nl;
      if (nl == 0 || nr == 0) continue;
      double gr = gs - gl;
      double score = gl * gl / static_cast<double>(nl) +
                     gr * gr / static_cast<double>(nr);
      if (!found || score > best_score) {
        found = true;
        best_f = f;
        best_score = score;
      }
    }

    if (!found) {
      make_leaf(t, node, gs, hs);
      return static_cast<int>(node);
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows)
      (m.at(r, best_f) ? right_rows : left_rows).push_back(r);
    int left = build_node(t, left_rows, depth + 1);
    int right = build_node(t, right_rows, depth + 1);
    t.nodes[node].feature = static_cast<int>(best_f);
    t.nodes[node].left = left;
    t.nodes[node].right = right;
    return static_cast<int>(node);
  }
};

inline double leaf_value_for_row(const Tree& t, const DesignMatrix& m,
                                 std::size_t i) {
  int idx = 0;
  while (!t.nodes[static_cast<std::size_t>(idx)].is_leaf()) {
    const TreeNode& n = t.nodes[static_cast<std::size_t>(idx)];
    idx = m.at(i, static_cast<std::size_t>(n.feature)) ? n.right : n.left;
  }
  return t.nodes[static_cast<std::size_t>(idx)].value[0];
}

inline double multiclass_log_loss(const std::vector<double>& scores,
                                  const std::vector<int>& y, std::size_t n,
                                  std::size_t k) {
  double loss = 0;
  std::vector<double> p(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) p[c] = scores[i * k + c];
    softmax(p);
    double py = p[static_cast<std::size_t>(y[i])];
    loss -= std::log(py < 1e-300 ? 1e-300 : py);
  }
  return loss / static_cast<double>(n);
}

}  // namespace boost_detail

// Multiclass gradient-boosted trees with softmax coupling: K per-class
// regression trees per round, all fit against the probabilities from the
// round start, scores initialized to zero. Training is fully deterministic;
// the seed is recorded for provenance but never drawn from.
//
// When loss_trace is given it receives the training log-loss before any
// round and after each round (n_rounds + 1 entries).
inline TriageModel train_boosted(
    const Dataset& ds, std::size_t n_rounds = kDefaultBoostRounds,
    double learning_rate = kDefaultBoostLearningRate,
    int max_depth = kDefaultBoostMaxDepth, std::uint64_t seed = 0,
    std::vector<double>* loss_trace = nullptr) {
  if (n_rounds == 0)
    fail(ErrorCode::InvalidArgument, "n_rounds must be positive");
  if (!(learning_rate > 0.0))
    fail(ErrorCode::InvalidArgument, "learning_rate must be positive");
  if (max_depth < 1)
    fail(ErrorCode::InvalidArgument, "max_depth must be >= 1");
  DesignMatrix m = make_design(ds);
  const std::size_t k = m.k();

  std::vector<double> scores(m.n * k, 0.0);
  std::vector<std::size_t> all_rows(m.n);
  std::iota(all_rows.begin(), all_rows.end(), 0);

  if (loss_trace) {
    loss_trace->clear();
    loss_trace->push_back(
        boost_detail::multiclass_log_loss(scores, m.y, m.n, k));
  }

  BoostParams bp;
  bp.learning_rate = learning_rate;
  std::vector<double> p(m.n * k), g(m.n), h(m.n);
  for (std::size_t round = 0; round < n_rounds; ++round) {
    // probabilities at round start
    std::vector<double> row(k);
    for (std::size_t i = 0; i < m.n; ++i) {
      for (std::size_t c = 0; c < k; ++c) row[c] = scores[i * k + c];
      softmax(row);
      for (std::size_t c = 0; c < k; ++c) p[i * k + c] = row[c];
    }

    std::vector<Tree> per_class;
    per_class.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < m.n; ++i) {
        double pic = p[i * k + c];
        g[i] = (m.y[i] == static_cast<int>(c) ? 1.0 : 0.0) - pic;
        h[i] = pic * (1.0 - pic);
      }
      boost_detail::GradientTreeBuilder builder{m, g, h, max_depth};
      per_class.push_back(builder.build(all_rows));
    }

    for (std::size_t c = 0; c < k; ++c) {
      const Tree& t = per_class[c];
      for (std::size_t i = 0; i < m.n; ++i)
        scores[i * k + c] +=
            learning_rate * boost_detail::leaf_value_for_row(t, m, i);
    }
    bp.rounds.push_back(std::move(per_class));

    if (loss_trace)
      loss_trace->push_back(
          boost_detail::multiclass_log_loss(scores, m.y, m.n, k));
  }

  TriageModel model;
  model.kind = ModelKind::BoostedTree;
  model.classes = m.classes;
  model.n_features = m.d;
  model.hyperparameters = {{"n_rounds", n_rounds},
                           {"learning_rate", learning_rate},
                           {"max_depth", max_depth},
                           {"seed", seed}};
  model.params = std::move(bp);
  return model;
}

}  // namespace regscope
