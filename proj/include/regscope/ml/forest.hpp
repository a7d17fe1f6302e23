#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

#include "regscope/ml/tree.hpp"
#include "regscope/rng.hpp"

namespace regscope {

inline constexpr std::size_t kDefaultForestTrees = 100;
inline constexpr double kDefaultForestFeatureFrac = 0.33;

// Bagged Gini trees with per-split feature subsampling. Determinism layout:
// tree t draws from SplitMix64(derive_seed(seed, t)); within a tree the
// bootstrap indices are drawn first (n draws), then split-time feature
// subsets in preorder node order. Trees are built sequentially, so the
// model is reproducible byte-for-byte from (dataset, hyperparameters, seed).
//
// With n_trees=1, feature_frac=1.0 and bootstrap=false this degenerates to
// exactly the plain decision tree.
inline TriageModel train_random_forest(
    const Dataset& ds, std::size_t n_trees = kDefaultForestTrees,
    double feature_frac = kDefaultForestFeatureFrac, std::uint64_t seed = 0,
    int max_depth = kDefaultTreeMaxDepth,
    std::size_t min_leaf = kDefaultTreeMinLeaf, bool bootstrap = true) {
  if (n_trees == 0)
    fail(ErrorCode::InvalidArgument, "n_trees must be positive");
  if (!(feature_frac > 0.0) || feature_frac > 1.0)
    fail(ErrorCode::InvalidArgument, "feature_frac must be in (0, 1]");
  DesignMatrix m = make_design(ds);

  std::size_t subset =
      static_cast<std::size_t>(std::ceil(feature_frac * static_cast<double>(m.d)));
  if (subset < 1) subset = 1;
  if (subset > m.d) subset = m.d;

  ForestParams fp;
  fp.trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    std::vector<std::size_t> rows(m.n);
    if (bootstrap) {
      for (std::size_t i = 0; i < m.n; ++i)
        rows[i] = static_cast<std::size_t>(rng.next_below(m.n));
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    tree_detail::GiniTreeBuilder builder(m, max_depth, min_leaf,
                                         subset == m.d ? 0 : subset, &rng);
    fp.trees.push_back(builder.build(rows));
  }

  TriageModel model;
  model.kind = ModelKind::RandomForest;
  model.classes = m.classes;
  model.n_features = m.d;
  model.hyperparameters = {{"n_trees", n_trees},
                           {"feature_frac", feature_frac},
                           {"max_depth", max_depth},
                           {"min_leaf", min_leaf},
                           {"bootstrap", bootstrap},
                           {"seed", seed}};
  model.params = std::move(fp);
  return model;
}

}  // namespace regscope
