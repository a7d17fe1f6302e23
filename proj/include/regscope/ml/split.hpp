#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "regscope/dataset.hpp"
#include "regscope/errors.hpp"
#include "regscope/rng.hpp"

namespace regscope {

// Train/test proportions, e.g. 80/20. Units are arbitrary positive integers.
struct SplitRatio {
  int train_units = 80;
  int test_units = 20;

  static SplitRatio parse(std::string_view text) {
    std::size_t slash = text.find('/');
    if (slash == std::string_view::npos || slash == 0 ||
        slash + 1 >= text.size())
      fail(ErrorCode::InvalidArgument,
           "ratio must look like 80/20, got '" + std::string(text) + "'");
    auto to_int = [&](std::string_view part) {
      int v = 0;
      if (part.empty() || part.size() > 6)
        fail(ErrorCode::InvalidArgument,
             "bad ratio '" + std::string(text) + "'");
      for (char c : part) {
        if (c < '0' || c > '9')
          fail(ErrorCode::InvalidArgument,
               "bad ratio '" + std::string(text) + "'");
        v = v * 10 + (c - '0');
      }
      return v;
    };
    SplitRatio r;
    r.train_units = to_int(text.substr(0, slash));
    r.test_units = to_int(text.substr(slash + 1));
    if (r.train_units <= 0 || r.test_units <= 0)
      fail(ErrorCode::InvalidArgument,
           "ratio parts must be positive: '" + std::string(text) + "'");
    return r;
  }

  std::string to_string() const {
    return std::to_string(train_units) + "/" + std::to_string(test_units);
  }

  friend bool operator==(const SplitRatio& a, const SplitRatio& b) {
    return a.train_units == b.train_units && a.test_units == b.test_units;
  }
};

struct SplitResult {
  Dataset train;
  Dataset test;
  SplitRatio ratio;
  std::uint64_t seed = 0;
};

// Deterministic train/test split. The train size is
//     round(n * train_units / (train_units + test_units))
// computed in integer arithmetic (half-up). Stratified mode assigns each
// class its proportional share via the largest-remainder method (remainder
// ties -> lower class rank), so class balance survives uneven ratios.
// Both partitions keep the samples in their original dataset order; the
// shuffle only decides membership.
inline SplitResult split_dataset(const Dataset& ds, SplitRatio ratio,
                                 std::uint64_t seed, bool stratified = true) {
  const std::size_t n = ds.samples.size();
  if (n == 0) fail(ErrorCode::EmptyDataset, "cannot split an empty dataset");
  const std::uint64_t units =
      static_cast<std::uint64_t>(ratio.train_units) +
      static_cast<std::uint64_t>(ratio.test_units);
  const std::size_t n_train = static_cast<std::size_t>(
      (n * static_cast<std::uint64_t>(ratio.train_units) + units / 2) / units);

  std::vector<char> in_train(n, 0);
  SplitMix64 rng(seed);

  if (!stratified) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    deterministic_shuffle(idx, rng);
    for (std::size_t i = 0; i < n_train; ++i) in_train[idx[i]] = 1;
  } else {
    // Group sample indices by class, in canonical class order.
    std::vector<Class> classes = ds.class_list();
    std::vector<std::vector<std::size_t>> groups(classes.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (ds.samples[i].label == classes[c]) {
          groups[c].push_back(i);
          break;
        }

    // Largest-remainder apportionment of the train quota.
    std::vector<std::size_t> quota(classes.size());
    std::vector<std::uint64_t> remainder(classes.size());
    std::size_t base_total = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      std::uint64_t num = static_cast<std::uint64_t>(groups[c].size()) *
                          static_cast<std::uint64_t>(ratio.train_units);
      quota[c] = static_cast<std::size_t>(num / units);
      remainder[c] = num % units;
      base_total += quota[c];
    }
    std::size_t extras = n_train > base_total ? n_train - base_total : 0;
    for (std::size_t e = 0; e < extras; ++e) {
      std::size_t best = classes.size();
      for (std::size_t c = 0; c < classes.size(); ++c) {
        if (quota[c] >= groups[c].size()) continue;  // class exhausted
        if (best == classes.size() || remainder[c] > remainder[best])
          best = c;
      }
      if (best == classes.size()) break;
      ++quota[best];
      remainder[best] = 0;
    }

    // One shuffle per class, consumed in canonical class order.
    for (std::size_t c = 0; c < classes.size(); ++c) {
      deterministic_shuffle(groups[c], rng);
      for (std::size_t i = 0; i < quota[c] && i < groups[c].size(); ++i)
        in_train[groups[c][i]] = 1;
    }
  }

  SplitResult out;
  out.ratio = ratio;
  out.seed = seed;
  out.train.class_set = ds.class_set;
  out.test.class_set = ds.class_set;
  for (std::size_t i = 0; i < n; ++i)
    (in_train[i] ? out.train : out.test).samples.push_back(ds.samples[i]);
  return out;
}

}  // namespace regscope
