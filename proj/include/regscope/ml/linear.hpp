#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "regscope/ml/common.hpp"
#include "regscope/ml/model.hpp"

namespace regscope {

inline constexpr std::size_t kDefaultLogisticEpochs = 500;
inline constexpr double kDefaultLogisticStep = 0.5;
inline constexpr double kDefaultLogisticL2 = 1e-4;

// Multinomial logistic regression, full-batch gradient descent.
// Loss: mean cross-entropy + (l2/2) * ||W||^2; the bias is not penalized.
// LogisticParams doubles as the gradient container (same shape).

namespace linear_detail {

inline std::vector<double> class_scores(const LogisticParams& p,
                                        const DesignMatrix& m,
                                        std::size_t i) {
  const std::size_t k = p.bias.size();
  std::vector<double> z(k);
  for (std::size_t c = 0; c < k; ++c) {
    double s = p.bias[c];
    const std::vector<double>& w = p.weights[c];
    for (std::size_t j = 0; j < m.d; ++j)
      if (m.at(i, j)) s += w[j];
    z[c] = s;
  }
  return z;
}

}  // namespace linear_detail

inline double logistic_loss(const LogisticParams& p, const DesignMatrix& m,
                            double l2) {
  double loss = 0;
  for (std::size_t i = 0; i < m.n; ++i) {
    std::vector<double> z = linear_detail::class_scores(p, m, i);
    softmax(z);
    double py = z[static_cast<std::size_t>(m.y[i])];
    loss -= std::log(py < 1e-300 ? 1e-300 : py);
  }
  loss /= static_cast<double>(m.n);
  double reg = 0;
  for (const auto& row : p.weights)
    for (double w : row) reg += w * w;
  return loss + 0.5 * l2 * reg;
}

inline LogisticParams logistic_grad(const LogisticParams& p,
                                    const DesignMatrix& m, double l2) {
  const std::size_t k = p.bias.size();
  LogisticParams g;
  g.weights.assign(k, std::vector<double>(m.d, 0.0));
  g.bias.assign(k, 0.0);

  for (std::size_t i = 0; i < m.n; ++i) {
    std::vector<double> z = linear_detail::class_scores(p, m, i);
    softmax(z);
    for (std::size_t c = 0; c < k; ++c) {
      double delta = z[c] - (m.y[i] == static_cast<int>(c) ? 1.0 : 0.0);
      g.bias[c] += delta;
      std::vector<double>& gw = g.weights[c];
      for (std::size_t j = 0; j < m.d; ++j)
        if (m.at(i, j)) gw[j] += delta;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(m.n);
  for (std::size_t c = 0; c < k; ++c) {
    g.bias[c] *= inv_n;
    for (std::size_t j = 0; j < m.d; ++j)
      g.weights[c][j] = g.weights[c][j] * inv_n + l2 * p.weights[c][j];
  }
  return g;
}

// Weights start at zero, so training is deterministic with no random draws;
// the seed is recorded in the hyperparameters for provenance only.
inline TriageModel train_logistic(const Dataset& ds,
                                  std::size_t epochs = kDefaultLogisticEpochs,
                                  double step = kDefaultLogisticStep,
                                  double l2 = kDefaultLogisticL2,
                                  std::uint64_t seed = 0) {
  if (!(step > 0.0)) fail(ErrorCode::InvalidArgument, "step must be positive");
  if (l2 < 0.0) fail(ErrorCode::InvalidArgument, "l2 must be >= 0");
  DesignMatrix m = make_design(ds);
  const std::size_t k = m.k();

  LogisticParams p;
  p.weights.assign(k, std::vector<double>(m.d, 0.0));
  p.bias.assign(k, 0.0);

  for (std::size_t e = 0; e < epochs; ++e) {
    LogisticParams g = logistic_grad(p, m, l2);
    for (std::size_t c = 0; c < k; ++c) {
      p.bias[c] -= step * g.bias[c];
      for (std::size_t j = 0; j < m.d; ++j)
        p.weights[c][j] -= step * g.weights[c][j];
    }
  }

  TriageModel model;
  model.kind = ModelKind::Logistic;
  model.classes = m.classes;
  model.n_features = m.d;
  model.hyperparameters = {
      {"epochs", epochs}, {"step", step}, {"l2", l2}, {"seed", seed}};
  model.params = std::move(p);
  return model;
}

}  // namespace regscope
