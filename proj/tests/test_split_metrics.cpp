#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "regscope/ml/metrics.hpp"
#include "regscope/ml/split.hpp"
#include "regscope/ml/tree.hpp"

using namespace regscope;

namespace {

Dataset tiny_dataset(std::size_t per_class) {
  Dataset ds;
  const Class classes[] = {Class::Cleanware, Class::Worm, Class::Botnet,
                           Class::Trojan};
  int bit = 0;
  for (Class c : classes)
    for (std::size_t i = 0; i < per_class; ++i) {
      LabeledSample s;
      s.label = c;
      s.os = Os::Win7;
      s.sample_name = std::string(class_name(c)) + "-" + std::to_string(i);
      s.features = FeatureVector(8);
      s.features.set_location(1 + (bit++ % 8));
      ds.samples.push_back(std::move(s));
    }
  return ds;
}

}  // namespace

TEST_CASE("ratio strings parse and render") {
  SplitRatio r = SplitRatio::parse("80/20");
  CHECK(r.train_units == 80);
  CHECK(r.test_units == 20);
  CHECK(r.to_string() == "80/20");
  CHECK(SplitRatio::parse("7/3") == SplitRatio{7, 3});
  for (const char* bad : {"", "80", "/20", "80/", "80/x", "0/100", "80/0",
                          "-1/2", "80//20"})
    CHECK_THROWS_AS(SplitRatio::parse(bad), Error);
}

TEST_CASE("train size is the rounded share of the dataset") {
  Dataset ds = tiny_dataset(5);  // 20 samples
  auto n_train = [&](const char* ratio) {
    return split_dataset(ds, SplitRatio::parse(ratio), 1).train.size();
  };
  CHECK(n_train("80/20") == 16);
  CHECK(n_train("70/30") == 14);
  CHECK(n_train("60/40") == 12);
  CHECK(n_train("50/50") == 10);
  // 20 * 2/3 = 13.33 -> 13;  20 * 1/3 = 6.67 -> 7
  CHECK(n_train("2/1") == 13);
  CHECK(n_train("1/2") == 7);
}

TEST_CASE("splits partition the dataset and preserve order") {
  Dataset ds = tiny_dataset(7);
  SplitResult sr = split_dataset(ds, SplitRatio{70, 30}, 99);
  CHECK(sr.train.size() + sr.test.size() == ds.size());
  CHECK(sr.train.class_set == ds.class_set);

  // order preserved: walking train and test merges back to the original
  std::size_t ti = 0, ei = 0;
  for (const LabeledSample& s : ds.samples) {
    if (ti < sr.train.size() && sr.train.samples[ti] == s) {
      ++ti;
    } else {
      REQUIRE(ei < sr.test.size());
      REQUIRE(sr.test.samples[ei] == s);
      ++ei;
    }
  }
  CHECK(ti == sr.train.size());
  CHECK(ei == sr.test.size());
}

TEST_CASE("stratified split keeps per-class proportions") {
  Dataset ds = tiny_dataset(10);  // 4 classes x 10
  SplitResult sr = split_dataset(ds, SplitRatio{80, 20}, 7, true);
  std::map<Class, std::size_t> train_counts;
  for (const LabeledSample& s : sr.train.samples) ++train_counts[s.label];
  for (const auto& [cls, count] : train_counts) CHECK(count == 8);
  CHECK(sr.train.size() == 32);
}

TEST_CASE("largest remainder fills odd quotas deterministically") {
  // 3 cleanware + 2 trojan at 50/50 -> n_train = round(2.5) = 3.
  // Base quotas: floor(1.5)=1, floor(1.0)=1; the remainder goes to
  // cleanware (larger fractional part).
  Dataset ds;
  for (int i = 0; i < 3; ++i) {
    LabeledSample s;
    s.label = Class::Cleanware;
    s.features = FeatureVector(2);
    ds.samples.push_back(s);
  }
  for (int i = 0; i < 2; ++i) {
    LabeledSample s;
    s.label = Class::Trojan;
    s.features = FeatureVector(2);
    ds.samples.push_back(s);
  }
  SplitResult sr = split_dataset(ds, SplitRatio{50, 50}, 3, true);
  std::size_t clean = 0, troj = 0;
  for (const LabeledSample& s : sr.train.samples)
    (s.label == Class::Cleanware ? clean : troj)++;
  CHECK(clean == 2);
  CHECK(troj == 1);
}

TEST_CASE("splits are reproducible and seed-sensitive") {
  Dataset ds = tiny_dataset(25);
  SplitResult a = split_dataset(ds, SplitRatio{70, 30}, 11);
  SplitResult b = split_dataset(ds, SplitRatio{70, 30}, 11);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  SplitResult c = split_dataset(ds, SplitRatio{70, 30}, 12);
  CHECK(a.train.size() == c.train.size());
  bool same = true;
  for (std::size_t i = 0; i < a.train.size(); ++i)
    if (!(a.train.samples[i] == c.train.samples[i])) same = false;
  CHECK_FALSE(same);
}

TEST_CASE("unstratified split still hits the exact train size") {
  Dataset ds = tiny_dataset(13);
  SplitResult sr = split_dataset(ds, SplitRatio{80, 20}, 5, false);
  CHECK(sr.train.size() == 42);  // round(52 * 0.8) = 41.6 -> 42
  CHECK(sr.test.size() == 10);
}

TEST_CASE("splitting an empty dataset fails") {
  Dataset empty;
  CHECK_THROWS_AS(split_dataset(empty, SplitRatio{80, 20}, 0), Error);
}

TEST_CASE("evaluate produces accuracy and a consistent confusion matrix") {
  Dataset ds = tiny_dataset(8);
  TriageModel model = train_decision_tree(ds, 6, 1);
  Metrics m = evaluate(model, ds);
  CHECK(m.n_test == ds.size());
  REQUIRE(m.confusion.size() == model.classes.size());
  std::size_t total = 0, diag = 0;
  for (std::size_t i = 0; i < m.confusion.size(); ++i)
    for (std::size_t j = 0; j < m.confusion[i].size(); ++j) {
      total += m.confusion[i][j];
      if (i == j) diag += m.confusion[i][j];
    }
  CHECK(total == m.n_test);
  CHECK(m.accuracy ==
        Catch::Approx(static_cast<double>(diag) / static_cast<double>(total)));
}

TEST_CASE("evaluate rejects labels outside the model's classes") {
  Dataset two;
  for (Class c : {Class::Cleanware, Class::Trojan}) {
    LabeledSample s;
    s.label = c;
    s.features = FeatureVector(2);
    if (c == Class::Trojan) s.features.set_location(1);
    two.samples.push_back(s);
  }
  TriageModel model = train_decision_tree(two, 2, 1);

  Dataset other;
  LabeledSample s;
  s.label = Class::Worm;
  s.features = FeatureVector(2);
  other.samples.push_back(s);
  CHECK_THROWS_MATCHES(
      evaluate(model, other), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code() == ErrorCode::InvalidArgument;
      }));
  Dataset empty;
  CHECK_THROWS_AS(evaluate(model, empty), Error);
}
