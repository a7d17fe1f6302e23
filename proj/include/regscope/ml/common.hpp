#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "regscope/dataset.hpp"
#include "regscope/errors.hpp"
#include "regscope/ml/model.hpp"

namespace regscope {

// Dense row-major view of a dataset used by all trainers: bits as bytes,
// labels as indices into the canonical class list.
struct DesignMatrix {
  std::size_t n = 0;  // samples
  std::size_t d = 0;  // features
  std::vector<std::uint8_t> x;  // n * d
  std::vector<int> y;           // class index, 0..k-1
  std::vector<Class> classes;   // canonical order

  std::uint8_t at(std::size_t i, std::size_t j) const { return x[i * d + j]; }
  std::size_t k() const { return classes.size(); }
};

inline DesignMatrix make_design(const Dataset& ds) {
  if (ds.samples.empty())
    fail(ErrorCode::EmptyDataset, "cannot train on an empty dataset");
  DesignMatrix m;
  m.n = ds.samples.size();
  m.d = ds.feature_width();
  m.classes = ds.class_list();
  m.x.resize(m.n * m.d);
  m.y.resize(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    const LabeledSample& s = ds.samples[i];
    if (s.features.size() != m.d)
      fail(ErrorCode::DimensionMismatch,
           "inconsistent feature widths in dataset");
    for (std::size_t j = 0; j < m.d; ++j)
      m.x[i * m.d + j] = s.features.test(j) ? 1 : 0;
    for (std::size_t c = 0; c < m.classes.size(); ++c)
      if (m.classes[c] == s.label) {
        m.y[i] = static_cast<int>(c);
        break;
      }
  }
  return m;
}

}  // namespace regscope
