#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "regscope/catalog.hpp"  // FeatureVector, fnv1a64/hex64
#include "regscope/classes.hpp"
#include "regscope/errors.hpp"

namespace regscope {

enum class ModelKind {
  Logistic,
  NeuralNet,
  DecisionTree,
  RandomForest,
  BoostedTree,
};

// Canonical classifier order; grid rows and derived per-cell seeds follow it.
inline constexpr std::array<ModelKind, 5> kModelKindOrder = {
    ModelKind::Logistic, ModelKind::NeuralNet, ModelKind::DecisionTree,
    ModelKind::RandomForest, ModelKind::BoostedTree};

inline const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Logistic: return "logistic";
    case ModelKind::NeuralNet: return "neural_net";
    case ModelKind::DecisionTree: return "decision_tree";
    case ModelKind::RandomForest: return "random_forest";
    case ModelKind::BoostedTree: return "boosted_tree";
  }
  return "?";
}

inline std::optional<ModelKind> model_kind_from_name(std::string_view name) {
  for (ModelKind k : kModelKindOrder)
    if (name == model_kind_name(k)) return k;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Trees. Nodes live in a flat preorder vector; feature < 0 marks a leaf.
// Split semantics: bit clear -> left child, bit set -> right child.
// Classification leaves store a distribution over the model's classes;
// boosted regression leaves store a single value.
// ---------------------------------------------------------------------------

struct TreeNode {
  int feature = -1;
  int left = -1;
  int right = -1;
  std::vector<double> value;  // leaf payload

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;

  const TreeNode& leaf_for(const FeatureVector& f) const {
    int idx = 0;
    while (!nodes[static_cast<std::size_t>(idx)].is_leaf()) {
      const TreeNode& n = nodes[static_cast<std::size_t>(idx)];
      idx = f.test(static_cast<std::size_t>(n.feature)) ? n.right : n.left;
    }
    return nodes[static_cast<std::size_t>(idx)];
  }

  std::size_t depth() const { return depth_below(0); }

 private:
  std::size_t depth_below(int idx) const {
    const TreeNode& n = nodes[static_cast<std::size_t>(idx)];
    if (n.is_leaf()) return 0;
    return 1 + std::max(depth_below(n.left), depth_below(n.right));
  }
};

struct LogisticParams {
  std::vector<std::vector<double>> weights;  // [class][feature]
  std::vector<double> bias;                  // [class]
};

struct MlpParams {
  std::size_t hidden = 0;
  std::vector<std::vector<double>> w1;  // [hidden][feature]
  std::vector<double> b1;               // [hidden]
  std::vector<std::vector<double>> w2;  // [class][hidden]
  std::vector<double> b2;               // [class]
};

struct TreeParams {
  Tree tree;
};

struct ForestParams {
  std::vector<Tree> trees;
};

struct BoostParams {
  double learning_rate = 0.1;
  std::vector<std::vector<Tree>> rounds;  // rounds[r][class]
};

struct Prediction {
  Class label = Class::Cleanware;
  std::vector<double> distribution;  // aligned with model classes
};

struct TriageModel {
  ModelKind kind = ModelKind::DecisionTree;
  std::vector<Class> classes;  // canonical order, as seen in training data
  std::size_t n_features = kStandardFeatureWidth;
  nlohmann::json hyperparameters;  // includes the training seed
  std::variant<LogisticParams, MlpParams, TreeParams, ForestParams,
               BoostParams>
      params;
};

// Numerically safe in-place softmax.
inline void softmax(std::vector<double>& v) {
  double mx = v[0];
  for (double x : v) mx = std::max(mx, x);
  double sum = 0;
  for (double& x : v) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (double& x : v) x /= sum;
}

// Index of the maximum, first on ties. Classes are stored in canonical
// order, so "first" is the canonical tie-break.
inline std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

inline Prediction predict(const TriageModel& m, const FeatureVector& f) {
  if (f.size() != m.n_features)
    fail(ErrorCode::DimensionMismatch,
         "feature vector has " + std::to_string(f.size()) +
             " bits, model expects " + std::to_string(m.n_features));
  const std::size_t k = m.classes.size();
  std::vector<double> dist(k, 0.0);

  if (const auto* lp = std::get_if<LogisticParams>(&m.params)) {
    for (std::size_t c = 0; c < k; ++c) {
      double z = lp->bias[c];
      for (std::size_t j = 0; j < m.n_features; ++j)
        if (f.test(j)) z += lp->weights[c][j];
      dist[c] = z;
    }
    softmax(dist);
  } else if (const auto* mp = std::get_if<MlpParams>(&m.params)) {
    std::vector<double> h(mp->hidden);
    for (std::size_t i = 0; i < mp->hidden; ++i) {
      double z = mp->b1[i];
      for (std::size_t j = 0; j < m.n_features; ++j)
        if (f.test(j)) z += mp->w1[i][j];
      h[i] = 1.0 / (1.0 + std::exp(-z));
    }
    for (std::size_t c = 0; c < k; ++c) {
      double z = mp->b2[c];
      for (std::size_t i = 0; i < mp->hidden; ++i) z += mp->w2[c][i] * h[i];
      dist[c] = z;
    }
    softmax(dist);
  } else if (const auto* tp = std::get_if<TreeParams>(&m.params)) {
    dist = tp->tree.leaf_for(f).value;
  } else if (const auto* fp = std::get_if<ForestParams>(&m.params)) {
    // Majority vote; the distribution reports vote fractions.
    for (const Tree& t : fp->trees) {
      const std::vector<double>& leaf = t.leaf_for(f).value;
      dist[argmax(leaf)] += 1.0;
    }
    for (double& d : dist) d /= static_cast<double>(fp->trees.size());
  } else if (const auto* bp = std::get_if<BoostParams>(&m.params)) {
    for (const auto& round : bp->rounds)
      for (std::size_t c = 0; c < k; ++c)
        dist[c] += bp->learning_rate * round[c].leaf_for(f).value[0];
    softmax(dist);
  }

  Prediction p;
  p.distribution = dist;
  p.label = m.classes[argmax(dist)];
  return p;
}

// ---------------------------------------------------------------------------
// JSON (de)serialization. Key order is nlohmann's sorted order, and doubles
// round-trip exactly, so equal models produce byte-identical files.
// ---------------------------------------------------------------------------

namespace model_detail {

using json = nlohmann::json;

inline json tree_to_json(const Tree& t, int idx = 0) {
  const TreeNode& n = t.nodes[static_cast<std::size_t>(idx)];
  if (n.is_leaf()) return json{{"leaf", n.value}};
  return json{{"feature", n.feature},
              {"left", tree_to_json(t, n.left)},
              {"right", tree_to_json(t, n.right)}};
}

[[noreturn]] inline void bad_model(const std::string& why) {
  fail(ErrorCode::InvalidArgument, "model json: " + why);
}

inline int tree_from_json(const json& j, Tree& t) {
  if (!j.is_object()) bad_model("tree node must be an object");
  int idx = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  if (j.contains("leaf")) {
    if (!j["leaf"].is_array() || j["leaf"].empty())
      bad_model("leaf payload must be a non-empty array");
    t.nodes[static_cast<std::size_t>(idx)].value =
        j["leaf"].get<std::vector<double>>();
    return idx;
  }
  if (!j.contains("feature") || !j.contains("left") || !j.contains("right"))
    bad_model("interior node needs feature/left/right");
  int feature = j["feature"].get<int>();
  if (feature < 0) bad_model("feature index must be >= 0");
  int left = tree_from_json(j["left"], t);
  int right = tree_from_json(j["right"], t);
  TreeNode& n = t.nodes[static_cast<std::size_t>(idx)];
  n.feature = feature;
  n.left = left;
  n.right = right;
  return idx;
}

inline json matrix_to_json(const std::vector<std::vector<double>>& m) {
  return json(m);
}

inline std::vector<std::vector<double>> matrix_from_json(const json& j,
                                                         const char* what) {
  if (!j.is_array()) bad_model(std::string(what) + " must be an array");
  auto m = j.get<std::vector<std::vector<double>>>();
  return m;
}

}  // namespace model_detail

inline std::string save_model(const TriageModel& m) {
  using model_detail::json;
  json out;
  out["version"] = 1;
  out["kind"] = model_kind_name(m.kind);
  std::vector<int> codes;
  for (Class c : m.classes) codes.push_back(class_code(c));
  out["classes"] = codes;
  out["n_features"] = m.n_features;
  out["hyperparameters"] =
      m.hyperparameters.is_null() ? json::object() : m.hyperparameters;

  json p;
  if (const auto* lp = std::get_if<LogisticParams>(&m.params)) {
    p["weights"] = model_detail::matrix_to_json(lp->weights);
    p["bias"] = lp->bias;
  } else if (const auto* mp = std::get_if<MlpParams>(&m.params)) {
    p["hidden"] = mp->hidden;
    p["w1"] = model_detail::matrix_to_json(mp->w1);
    p["b1"] = mp->b1;
    p["w2"] = model_detail::matrix_to_json(mp->w2);
    p["b2"] = mp->b2;
  } else if (const auto* tp = std::get_if<TreeParams>(&m.params)) {
    p["tree"] = model_detail::tree_to_json(tp->tree);
  } else if (const auto* fp = std::get_if<ForestParams>(&m.params)) {
    json trees = json::array();
    for (const Tree& t : fp->trees) trees.push_back(model_detail::tree_to_json(t));
    p["trees"] = std::move(trees);
  } else if (const auto* bp = std::get_if<BoostParams>(&m.params)) {
    p["learning_rate"] = bp->learning_rate;
    json rounds = json::array();
    for (const auto& round : bp->rounds) {
      json per_class = json::array();
      for (const Tree& t : round)
        per_class.push_back(model_detail::tree_to_json(t));
      rounds.push_back(std::move(per_class));
    }
    p["rounds"] = std::move(rounds);
  }
  out["parameters"] = std::move(p);
  return out.dump(2) + "\n";
}

inline TriageModel load_model(std::string_view text) {
  using model_detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    model_detail::bad_model("parse error at byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) model_detail::bad_model("document must be an object");
  if (doc.value("version", 0) != 1)
    model_detail::bad_model("unsupported version");

  TriageModel m;
  auto kind = model_kind_from_name(doc.value("kind", std::string()));
  if (!kind) model_detail::bad_model("unknown kind");
  m.kind = *kind;

  if (!doc.contains("classes") || !doc["classes"].is_array() ||
      doc["classes"].empty())
    model_detail::bad_model("classes must be a non-empty array");
  for (const auto& c : doc["classes"]) {
    auto cls = class_from_code(c.get<int>());
    if (!cls) model_detail::bad_model("unknown class code");
    m.classes.push_back(*cls);
  }
  const std::size_t k = m.classes.size();

  if (!doc.contains("n_features") || !doc["n_features"].is_number_unsigned())
    model_detail::bad_model("n_features must be a non-negative integer");
  m.n_features = doc["n_features"].get<std::size_t>();
  m.hyperparameters = doc.value("hyperparameters", json::object());

  if (!doc.contains("parameters") || !doc["parameters"].is_object())
    model_detail::bad_model("parameters must be an object");
  const json& p = doc["parameters"];

  auto check_matrix = [&](const std::vector<std::vector<double>>& mat,
                          std::size_t rows, std::size_t cols,
                          const char* what) {
    if (mat.size() != rows)
      model_detail::bad_model(std::string(what) + ": wrong row count");
    for (const auto& row : mat)
      if (row.size() != cols)
        model_detail::bad_model(std::string(what) + ": wrong column count");
  };

  switch (m.kind) {
    case ModelKind::Logistic: {
      LogisticParams lp;
      lp.weights = model_detail::matrix_from_json(p.value("weights", json()),
                                                  "weights");
      lp.bias = p.value("bias", std::vector<double>{});
      check_matrix(lp.weights, k, m.n_features, "weights");
      if (lp.bias.size() != k) model_detail::bad_model("bias: wrong size");
      m.params = std::move(lp);
      break;
    }
    case ModelKind::NeuralNet: {
      MlpParams mp;
      mp.hidden = p.value("hidden", std::size_t{0});
      mp.w1 = model_detail::matrix_from_json(p.value("w1", json()), "w1");
      mp.b1 = p.value("b1", std::vector<double>{});
      mp.w2 = model_detail::matrix_from_json(p.value("w2", json()), "w2");
      mp.b2 = p.value("b2", std::vector<double>{});
      if (mp.hidden == 0) model_detail::bad_model("hidden must be positive");
      check_matrix(mp.w1, mp.hidden, m.n_features, "w1");
      check_matrix(mp.w2, k, mp.hidden, "w2");
      if (mp.b1.size() != mp.hidden || mp.b2.size() != k)
        model_detail::bad_model("bias vectors: wrong size");
      m.params = std::move(mp);
      break;
    }
    case ModelKind::DecisionTree: {
      TreeParams tp;
      if (!p.contains("tree")) model_detail::bad_model("missing tree");
      model_detail::tree_from_json(p["tree"], tp.tree);
      m.params = std::move(tp);
      break;
    }
    case ModelKind::RandomForest: {
      ForestParams fp;
      if (!p.contains("trees") || !p["trees"].is_array() ||
          p["trees"].empty())
        model_detail::bad_model("trees must be a non-empty array");
      for (const auto& tj : p["trees"]) {
        Tree t;
        model_detail::tree_from_json(tj, t);
        fp.trees.push_back(std::move(t));
      }
      m.params = std::move(fp);
      break;
    }
    case ModelKind::BoostedTree: {
      BoostParams bp;
      if (!p.contains("learning_rate") || !p["learning_rate"].is_number())
        model_detail::bad_model("missing learning_rate");
      bp.learning_rate = p["learning_rate"].get<double>();
      if (!p.contains("rounds") || !p["rounds"].is_array())
        model_detail::bad_model("rounds must be an array");
      for (const auto& rj : p["rounds"]) {
        if (!rj.is_array() || rj.size() != k)
          model_detail::bad_model("each round needs one tree per class");
        std::vector<Tree> round;
        for (const auto& tj : rj) {
          Tree t;
          model_detail::tree_from_json(tj, t);
          round.push_back(std::move(t));
        }
        bp.rounds.push_back(std::move(round));
      }
      m.params = std::move(bp);
      break;
    }
  }
  return m;
}

// Stable content fingerprint for reports.
inline std::string model_id(const TriageModel& m) {
  return hex64(fnv1a64(save_model(m)));
}

}  // namespace regscope
