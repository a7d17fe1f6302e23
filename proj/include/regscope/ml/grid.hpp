#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regscope/ml/boosted.hpp"
#include "regscope/ml/forest.hpp"
#include "regscope/ml/linear.hpp"
#include "regscope/ml/metrics.hpp"
#include "regscope/ml/mlp.hpp"
#include "regscope/ml/split.hpp"
#include "regscope/ml/tree.hpp"

namespace regscope {

// Hyperparameters used by the experiment grid (and the CLI defaults).
struct TrainDefaults {
  int tree_max_depth = kDefaultTreeMaxDepth;
  std::size_t tree_min_leaf = kDefaultTreeMinLeaf;
  std::size_t forest_trees = kDefaultForestTrees;
  double forest_feature_frac = kDefaultForestFeatureFrac;
  bool forest_bootstrap = true;
  std::size_t boost_rounds = kDefaultBoostRounds;
  double boost_learning_rate = kDefaultBoostLearningRate;
  int boost_max_depth = kDefaultBoostMaxDepth;
  std::size_t logistic_epochs = kDefaultLogisticEpochs;
  double logistic_step = kDefaultLogisticStep;
  double logistic_l2 = kDefaultLogisticL2;
  std::size_t mlp_hidden = kDefaultMlpHidden;
  std::size_t mlp_epochs = kDefaultMlpEpochs;
  double mlp_step = kDefaultMlpStep;
};

inline TriageModel train_model(ModelKind kind, const Dataset& train,
                               std::uint64_t seed,
                               const TrainDefaults& hp = {}) {
  switch (kind) {
    case ModelKind::Logistic:
      return train_logistic(train, hp.logistic_epochs, hp.logistic_step,
                            hp.logistic_l2, seed);
    case ModelKind::NeuralNet:
      return train_neural_net(train, hp.mlp_hidden, hp.mlp_epochs,
                              hp.mlp_step, seed);
    case ModelKind::DecisionTree:
      return train_decision_tree(train, hp.tree_max_depth, hp.tree_min_leaf);
    case ModelKind::RandomForest:
      return train_random_forest(train, hp.forest_trees,
                                 hp.forest_feature_frac, seed,
                                 hp.tree_max_depth, hp.tree_min_leaf,
                                 hp.forest_bootstrap);
    case ModelKind::BoostedTree:
      return train_boosted(train, hp.boost_rounds, hp.boost_learning_rate,
                           hp.boost_max_depth, seed);
  }
  fail(ErrorCode::InvalidArgument, "unknown model kind");
}

struct GridCell {
  SplitRatio ratio;
  ModelKind kind = ModelKind::Logistic;
  Metrics metrics;
  std::vector<Class> classes;  // axes of the confusion matrix
};

struct GridResult {
  std::vector<GridCell> cells;  // ratios outer, classifiers inner
  std::uint64_t seed = 0;
};

// Runs every classifier over every split ratio. Seed layout:
//   split seed for ratio i       = derive_seed(seed, i)
//   training seed for (i, kind j) = derive_seed(derive_seed(seed, i), j)
// Splits are stratified. Cells are evaluated in row-major order (ratios
// outer, classifier order as in kModelKindOrder), but every cell's stream is
// derived independently, so reordering could not change any result.
inline GridResult run_grid(const Dataset& ds,
                           const std::vector<SplitRatio>& ratios,
                           std::uint64_t seed,
                           const TrainDefaults& hp = {}) {
  if (ratios.empty())
    fail(ErrorCode::InvalidArgument, "grid needs at least one ratio");
  GridResult out;
  out.seed = seed;
  for (std::size_t ri = 0; ri < ratios.size(); ++ri) {
    std::uint64_t ratio_seed = derive_seed(seed, ri);
    SplitResult split = split_dataset(ds, ratios[ri], ratio_seed, true);
    for (std::size_t ki = 0; ki < kModelKindOrder.size(); ++ki) {
      ModelKind kind = kModelKindOrder[ki];
      TriageModel model =
          train_model(kind, split.train, derive_seed(ratio_seed, ki), hp);
      GridCell cell;
      cell.ratio = ratios[ri];
      cell.kind = kind;
      cell.metrics = evaluate(model, split.test);
      cell.classes = model.classes;
      out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

// CSV rendering: header + one row per cell, accuracies with fixed six
// decimal places so output is byte-stable.
inline std::string grid_to_csv(const GridResult& grid) {
  std::string out = "ratio,classifier,accuracy\n";
  char buf[32];
  for (const GridCell& cell : grid.cells) {
    std::snprintf(buf, sizeof(buf), "%.6f", cell.metrics.accuracy);
    out += cell.ratio.to_string();
    out.push_back(',');
    out += model_kind_name(cell.kind);
    out.push_back(',');
    out += buf;
    out.push_back('\n');
  }
  return out;
}

// Confusion matrices for every cell, keyed by ratio then classifier.
inline nlohmann::json grid_confusions_json(const GridResult& grid) {
  nlohmann::json out;
  for (const GridCell& cell : grid.cells) {
    nlohmann::json entry;
    std::vector<int> codes;
    for (Class c : cell.classes) codes.push_back(class_code(c));
    entry["classes"] = codes;
    entry["confusion"] = cell.metrics.confusion;
    entry["accuracy"] = cell.metrics.accuracy;
    entry["n_test"] = cell.metrics.n_test;
    out[cell.ratio.to_string()][model_kind_name(cell.kind)] =
        std::move(entry);
  }
  return out;
}

}  // namespace regscope
