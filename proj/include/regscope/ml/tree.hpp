#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

#include "regscope/ml/common.hpp"
#include "regscope/ml/model.hpp"
#include "regscope/rng.hpp"

namespace regscope {

inline constexpr int kDefaultTreeMaxDepth = 6;
inline constexpr std::size_t kDefaultTreeMinLeaf = 1;

namespace tree_detail {

// CART-style builder over binary features. The split criterion is the usual
// Gini impurity decrease, evaluated in exact integer arithmetic: for a
// candidate split the score
//
//     S_L/n_L + S_R/n_R       with  S = sum_c count_c^2
//
// is monotone in the impurity decrease, so maximizing it as an exact
// fraction (cross-multiplied in 128-bit) picks the same split as a float
// evaluation would, minus the platform-dependent ties. Ties break to the
// lowest feature index. Zero-gain splits are taken when no strictly better
// one exists: stopping instead would leave structured nodes (XOR-like
// parity patterns) permanently impure.
class GiniTreeBuilder {
 public:
  GiniTreeBuilder(const DesignMatrix& m, int max_depth, std::size_t min_leaf,
                  std::size_t feature_subset = 0, SplitMix64* rng = nullptr)
      : m_(m),
        max_depth_(max_depth),
        min_leaf_(min_leaf < 1 ? 1 : min_leaf),
        subset_(feature_subset),
        rng_(rng) {
    if (subset_ >= m_.d) subset_ = 0;  // full scan, no draws
    feature_scratch_.resize(m_.d);
    std::iota(feature_scratch_.begin(), feature_scratch_.end(), 0);
  }

  Tree build(const std::vector<std::size_t>& rows) {
    Tree t;
    build_node(t, rows, 0);
    return t;
  }

 private:
  struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    unsigned long long num = 0;  // score numerator
    unsigned long long den = 1;  // score denominator
  };

  void leaf_from_counts(Tree& t, std::size_t node,
                        const std::vector<std::size_t>& counts,
                        std::size_t n) {
    std::vector<double>& v = t.nodes[node].value;
    v.resize(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c)
      v[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
  }

  // Candidate features for one split attempt. With subsetting active, draws
  // happen in preorder node order (the documented stream layout) and the
  // chosen subset is scanned in ascending index order so tie-breaks stay
  // index-based.
  std::vector<std::size_t> candidate_features() {
    if (subset_ == 0) return feature_scratch_;
    std::vector<std::size_t>& pool = feature_scratch_;
    for (std::size_t i = 0; i < subset_; ++i) {
      std::size_t j = i + static_cast<std::size_t>(
                              rng_->next_below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> chosen(pool.begin(),
                                    pool.begin() + static_cast<std::ptrdiff_t>(subset_));
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  int build_node(Tree& t, const std::vector<std::size_t>& rows, int depth) {
    const std::size_t node = t.nodes.size();
    t.nodes.emplace_back();

    std::vector<std::size_t> counts(m_.k(), 0);
    for (std::size_t r : rows) ++counts[static_cast<std::size_t>(m_.y[r])];
    const std::size_t n = rows.size();

    bool pure = false;
    for (std::size_t c : counts)
      if (c == n) pure = true;

    if (pure || depth >= max_depth_ || n < 2 * min_leaf_) {
      leaf_from_counts(t, node, counts, n);
      return static_cast<int>(node);
    }

    SplitChoice best;
    std::vector<std::size_t> left_counts(m_.k());
    for (std::size_t f : candidate_features()) {
      std::fill(left_counts.begin(), left_counts.end(), 0);
      std::size_t n_left = 0;
      for (std::size_t r : rows)
        if (!m_.at(r, f)) {
          ++left_counts[static_cast<std::size_t>(m_.y[r])];
          ++n_left;
        }
      std::size_t n_right = n - n_left;
      if (n_left < min_leaf_ || n_right < min_leaf_) continue;

      unsigned long long sl = 0, sr = 0;
      for (std::size_t c = 0; c < counts.size(); ++c) {
        unsigned long long lc = left_counts[c];
        unsigned long long rc = counts[c] - left_counts[c];
        sl += lc * lc;
        sr += rc * rc;
      }
      unsigned long long num = sl * n_right + sr * n_left;
      unsigned long long den =
          static_cast<unsigned long long>(n_left) * n_right;
      // strict improvement only: first (lowest) feature wins ties
      if (!best.found ||
          static_cast<unsigned __int128>(num) * best.den >
              static_cast<unsigned __int128>(best.num) * den) {
        best = SplitChoice{true, f, num, den};
      }
    }

    if (!best.found) {
      leaf_from_counts(t, node, counts, n);
      return static_cast<int>(node);
    }

    std::vector<std::size_t> left_rows, right_rows;
    left_rows.reserve(n);
    right_rows.reserve(n);
    for (std::size_t r : rows)
      (m_.at(r, best.feature) ? right_rows : left_rows).push_back(r);

    int left = build_node(t, left_rows, depth + 1);
    int right = build_node(t, right_rows, depth + 1);
    t.nodes[node].feature = static_cast<int>(best.feature);
    t.nodes[node].left = left;
    t.nodes[node].right = right;
    return static_cast<int>(node);
  }

  const DesignMatrix& m_;
  int max_depth_;
  std::size_t min_leaf_;
  std::size_t subset_;
  SplitMix64* rng_;
  std::vector<std::size_t> feature_scratch_;
};

}  // namespace tree_detail

inline TriageModel train_decision_tree(
    const Dataset& ds, int max_depth = kDefaultTreeMaxDepth,
    std::size_t min_leaf = kDefaultTreeMinLeaf) {
  if (max_depth < 0)
    fail(ErrorCode::InvalidArgument, "max_depth must be >= 0");
  DesignMatrix m = make_design(ds);

  std::vector<std::size_t> rows(m.n);
  std::iota(rows.begin(), rows.end(), 0);
  tree_detail::GiniTreeBuilder builder(m, max_depth, min_leaf);

  TriageModel model;
  model.kind = ModelKind::DecisionTree;
  model.classes = m.classes;
  model.n_features = m.d;
  model.hyperparameters = {{"max_depth", max_depth}, {"min_leaf", min_leaf}};
  model.params = TreeParams{builder.build(rows)};
  return model;
}

}  // namespace regscope
