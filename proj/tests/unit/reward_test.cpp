#include <gtest/gtest.h>

#include <cmath>

#include "seqabs/domains/linear_classifier.hpp"
#include "seqabs/domains/synthetic.hpp"
#include "seqabs/error.hpp"
#include "seqabs/reward/reward.hpp"
#include "test_support.hpp"

namespace seqabs {
namespace {

TEST(DeltaTest, EndpointsAndLinearity) {
  EXPECT_EQ(delta_at(0, 5000), 0.0);
  EXPECT_EQ(delta_at(5000, 5000), 1.0);
  EXPECT_EQ(delta_at(2500, 5000), 0.5);
  EXPECT_EQ(delta_at(9000, 5000), 1.0);
  EXPECT_THROW(delta_at(0, 0), InvalidInput);
  double prev = -1.0;
  for (std::size_t k = 0; k <= 37; ++k) {
    const double d = delta_at(k, 37);
    EXPECT_GE(d, prev);
    prev = d;
  }
}

TEST(RewardTest, Examples) {
  EXPECT_NEAR(reward(0.9, 0.5, 0.7, 0.5, 100), 30.0, 1e-12);
  EXPECT_EQ(reward(0.4, 0.5, 0.123, 1.0, 100), (0.4 - 0.5) * 100);
  EXPECT_NEAR(reward(0.4, 0.5, 0.9, 1.0, 100), -10.0, 1e-12);
  for (double d : {0.0, 0.3, 1.0}) {
    for (double b : {1.0, 100.0}) EXPECT_EQ(reward(0.6, 0.6, 0.6, d, b), 0.0);
  }
}

TEST(RewardTest, LinearInScaleAndMonotoneInMixture) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const double a = uniform01(rng), h = uniform01(rng), g = uniform01(rng), d = uniform01(rng);
    EXPECT_NEAR(reward(a, h, g, d, 200), 2 * reward(a, h, g, d, 100), 1e-9);
    EXPECT_GE(reward(a, h * 0.5, g * 0.5, d, 100), reward(a, h, g, d, 100));
  }
  // delta = 0 ignores h, delta = 1 ignores g.
  EXPECT_EQ(reward(0.5, 0.1, 0.3, 0.0, 100), reward(0.5, 0.9, 0.3, 0.0, 100));
  EXPECT_EQ(reward(0.5, 0.1, 0.3, 1.0, 100), reward(0.5, 0.1, 0.8, 1.0, 100));
}

TEST(PerformanceTest, UniformClassifier) {
  SyntheticDomain dom;
  testing::UniformClassifier clf(9, 3);
  Rng rng(1);
  auto s = to_sequence(gen_synthetic(1, 0.25, rng)[0], SyntheticGoal::Category);
  EXPECT_NEAR(performance(clf, dom, s.units, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(performance(clf, dom, {}, 2), 1.0 / 3.0, 1e-15);
}

TEST(PerformanceTest, EmptySelectionIsBackgroundPrediction) {
  SyntheticDomain dom;
  Rng rng(2);
  const auto data = to_sequences(gen_synthetic(30, 0.25, rng), SyntheticGoal::Category);
  const auto clf = train_linear_classifier(dom, data, 3, {}, rng);
  // On an all-zero rendering only the bias contributes.
  const auto& b = clf.bias();
  const double z = std::exp(b[0]) + std::exp(b[1]) + std::exp(b[2]);
  for (std::size_t label = 0; label < 3; ++label) {
    EXPECT_NEAR(performance(clf, dom, {}, label), std::exp(b[label]) / z, 1e-12);
  }
}

TEST(PerformanceTest, DimensionMismatchRejected) {
  SyntheticDomain dom;
  testing::UniformClassifier clf(4, 3);
  EXPECT_THROW(performance(clf, dom, {}, 0), InvalidInput);
}

TEST(BaselinesTest, FullLengthTracesAgree) {
  SyntheticDomain dom;
  Rng rng(3);
  const auto data = to_sequences(gen_synthetic(20, 0.25, rng), SyntheticGoal::Category);
  const auto clf = train_linear_classifier(dom, data, 3, {}, rng);
  for (const auto& s : data) {
    const auto t = build_baselines(s, clf, dom, rng, 9);
    ASSERT_EQ(t.original.size(), 9u);
    ASSERT_EQ(t.random.size(), 9u);
    EXPECT_EQ(t.original.back(), t.random.back());
    EXPECT_EQ(t.permutation.size(), 9u);
  }
}

TEST(BaselinesTest, OriginalTraceIndependentOfRng) {
  SyntheticDomain dom;
  Rng gen(4);
  const auto data = to_sequences(gen_synthetic(10, 0.25, gen), SyntheticGoal::Category);
  const auto clf = train_linear_classifier(dom, data, 3, {}, gen);
  Rng a(1), b(999);
  const auto ta = build_baselines(data[0], clf, dom, a, 4);
  const auto tb = build_baselines(data[0], clf, dom, b, 4);
  EXPECT_EQ(ta.original, tb.original);
  EXPECT_NE(ta.permutation, tb.permutation);
}

TEST(BaselinesTest, AveragesSeveralPermutations) {
  SyntheticDomain dom;
  testing::SumClassifier clf(9);
  Rng gen(5);
  const auto s = to_sequence(gen_synthetic(1, 0.25, gen)[2], SyntheticGoal::Attribute);
  Rng a(77);
  const auto avg = build_baselines(s, clf, dom, a, 3, 4);
  // Recompute the four permutations with the same stream.
  Rng b(77);
  std::vector<double> want(3, 0.0);
  for (int r = 0; r < 4; ++r) {
    const auto single = build_baselines(s, clf, dom, b, 3, 1);
    for (int t = 0; t < 3; ++t) want[t] += single.random[t] / 4;
  }
  for (int t = 0; t < 3; ++t) EXPECT_NEAR(avg.random[t], want[t], 1e-12);
}

TEST(BaselinesTest, StepsOutOfRangeRejected) {
  SyntheticDomain dom;
  testing::UniformClassifier clf(9, 3);
  Rng rng(1);
  const auto s = to_sequence(gen_synthetic(1, 0.0, rng)[0], SyntheticGoal::Category);
  EXPECT_THROW(build_baselines(s, clf, dom, rng, 10), InvalidInput);
  EXPECT_THROW(build_baselines(s, clf, dom, rng, 0), InvalidInput);
}

}  // namespace
}  // namespace seqabs
