#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "regscope/ml/common.hpp"
#include "regscope/ml/model.hpp"
#include "regscope/rng.hpp"

namespace regscope {

inline constexpr std::size_t kDefaultMlpHidden = 16;
inline constexpr std::size_t kDefaultMlpEpochs = 2000;
inline constexpr double kDefaultMlpStep = 0.5;

// One-hidden-layer network: sigmoid hidden units, softmax output, mean
// cross-entropy loss, no regularization. MlpParams doubles as the gradient
// container.

namespace mlp_detail {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Forward {
  std::vector<double> h;  // hidden activations
  std::vector<double> p;  // output probabilities
};

inline Forward forward(const MlpParams& w, const DesignMatrix& m,
                       std::size_t i) {
  Forward f;
  f.h.resize(w.hidden);
  for (std::size_t u = 0; u < w.hidden; ++u) {
    double z = w.b1[u];
    const std::vector<double>& row = w.w1[u];
    for (std::size_t j = 0; j < m.d; ++j)
      if (m.at(i, j)) z += row[j];
    f.h[u] = sigmoid(z);
  }
  const std::size_t k = w.b2.size();
  f.p.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    double z = w.b2[c];
    for (std::size_t u = 0; u < w.hidden; ++u) z += w.w2[c][u] * f.h[u];
    f.p[c] = z;
  }
  softmax(f.p);
  return f;
}

}  // namespace mlp_detail

inline double mlp_loss(const MlpParams& w, const DesignMatrix& m) {
  double loss = 0;
  for (std::size_t i = 0; i < m.n; ++i) {
    mlp_detail::Forward f = mlp_detail::forward(w, m, i);
    double py = f.p[static_cast<std::size_t>(m.y[i])];
    loss -= std::log(py < 1e-300 ? 1e-300 : py);
  }
  return loss / static_cast<double>(m.n);
}

inline MlpParams mlp_grad(const MlpParams& w, const DesignMatrix& m) {
  const std::size_t k = w.b2.size();
  MlpParams g;
  g.hidden = w.hidden;
  g.w1.assign(w.hidden, std::vector<double>(m.d, 0.0));
  g.b1.assign(w.hidden, 0.0);
  g.w2.assign(k, std::vector<double>(w.hidden, 0.0));
  g.b2.assign(k, 0.0);

  const double inv_n = 1.0 / static_cast<double>(m.n);
  std::vector<double> dz2(k), dh(w.hidden);
  for (std::size_t i = 0; i < m.n; ++i) {
    mlp_detail::Forward f = mlp_detail::forward(w, m, i);
    for (std::size_t c = 0; c < k; ++c)
      dz2[c] = (f.p[c] - (m.y[i] == static_cast<int>(c) ? 1.0 : 0.0)) * inv_n;
    for (std::size_t c = 0; c < k; ++c) {
      g.b2[c] += dz2[c];
      for (std::size_t u = 0; u < w.hidden; ++u)
        g.w2[c][u] += dz2[c] * f.h[u];
    }
    for (std::size_t u = 0; u < w.hidden; ++u) {
      double acc = 0;
      for (std::size_t c = 0; c < k; ++c) acc += w.w2[c][u] * dz2[c];
      dh[u] = acc * f.h[u] * (1.0 - f.h[u]);  // sigmoid'(z) = h(1-h)
    }
    for (std::size_t u = 0; u < w.hidden; ++u) {
      g.b1[u] += dh[u];
      std::vector<double>& gw = g.w1[u];
      for (std::size_t j = 0; j < m.d; ++j)
        if (m.at(i, j)) gw[j] += dh[u];
    }
  }
  return g;
}

// Weight init: uniform draws in [-0.5, 0.5) from SplitMix64(seed), consumed
// in a fixed documented order -- w1 row-major, then b1, then w2 row-major,
// then b2 -- so the same seed always yields the same network.
inline MlpParams mlp_init(std::size_t hidden, std::size_t d, std::size_t k,
                          std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto draw = [&rng]() { return rng.next_double() - 0.5; };
  MlpParams w;
  w.hidden = hidden;
  w.w1.assign(hidden, std::vector<double>(d));
  for (auto& row : w.w1)
    for (double& v : row) v = draw();
  w.b1.resize(hidden);
  for (double& v : w.b1) v = draw();
  w.w2.assign(k, std::vector<double>(hidden));
  for (auto& row : w.w2)
    for (double& v : row) v = draw();
  w.b2.resize(k);
  for (double& v : w.b2) v = draw();
  return w;
}

inline TriageModel train_neural_net(const Dataset& ds,
                                    std::size_t hidden = kDefaultMlpHidden,
                                    std::size_t epochs = kDefaultMlpEpochs,
                                    double step = kDefaultMlpStep,
                                    std::uint64_t seed = 0) {
  if (hidden == 0) fail(ErrorCode::InvalidArgument, "hidden must be positive");
  if (!(step > 0.0)) fail(ErrorCode::InvalidArgument, "step must be positive");
  DesignMatrix m = make_design(ds);
  const std::size_t k = m.k();

  MlpParams w = mlp_init(hidden, m.d, k, seed);
  for (std::size_t e = 0; e < epochs; ++e) {
    MlpParams g = mlp_grad(w, m);
    for (std::size_t u = 0; u < hidden; ++u) {
      w.b1[u] -= step * g.b1[u];
      for (std::size_t j = 0; j < m.d; ++j) w.w1[u][j] -= step * g.w1[u][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      w.b2[c] -= step * g.b2[c];
      for (std::size_t u = 0; u < hidden; ++u) w.w2[c][u] -= step * g.w2[c][u];
    }
  }

  TriageModel model;
  model.kind = ModelKind::NeuralNet;
  model.classes = m.classes;
  model.n_features = m.d;
  model.hyperparameters = {{"hidden", hidden},
                           {"epochs", epochs},
                           {"step", step},
                           {"seed", seed}};
  model.params = std::move(w);
  return model;
}

}  // namespace regscope
