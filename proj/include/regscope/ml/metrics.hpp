#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "regscope/dataset.hpp"
#include "regscope/errors.hpp"
#include "regscope/ml/model.hpp"

namespace regscope {

struct Metrics {
  double accuracy = 0.0;
  // confusion[true][pred], both axes in the model's class order
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t n_test = 0;
};

inline std::size_t class_rank_in(const std::vector<Class>& classes, Class c) {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i] == c) return i;
  return classes.size();
}

// Scores a model on labeled data. Every test label must be one of the
// model's classes; anything else would silently distort the confusion
// matrix, so it throws instead.
inline Metrics evaluate(const TriageModel& m, const Dataset& test) {
  if (test.samples.empty())
    fail(ErrorCode::EmptyDataset, "cannot evaluate on an empty dataset");
  const std::size_t k = m.classes.size();
  Metrics out;
  out.confusion.assign(k, std::vector<std::size_t>(k, 0));
  out.n_test = test.samples.size();

  std::size_t correct = 0;
  for (const LabeledSample& s : test.samples) {
    std::size_t truth = k;
    for (std::size_t c = 0; c < k; ++c)
      if (m.classes[c] == s.label) {
        truth = c;
        break;
      }
    if (truth == k)
      fail(ErrorCode::InvalidArgument,
           std::string("test label '") + class_name(s.label) +
               "' is not among the model's classes");
    Prediction p = predict(m, s.features);
    std::size_t pred = class_rank_in(m.classes, p.label);
    ++out.confusion[truth][pred];
    if (p.label == s.label) ++correct;
  }
  out.accuracy =
      static_cast<double>(correct) / static_cast<double>(out.n_test);
  return out;
}

}  // namespace regscope
