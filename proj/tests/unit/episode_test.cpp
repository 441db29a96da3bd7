#include <gtest/gtest.h>

#include <algorithm>

#include "seqabs/env/episode.hpp"
#include "seqabs/error.hpp"
#include "test_support.hpp"

namespace seqabs {
namespace {

std::vector<AtomicUnit> units(std::size_t n) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back({static_cast<double>(i)});
  return make_units(rows);
}

std::vector<std::size_t> indices(const std::vector<AtomicUnit>& v) {
  std::vector<std::size_t> out;
  for (const auto& u : v) out.push_back(u.original_index);
  return out;
}

TEST(TimestampBucketTest, Examples) {
  EXPECT_EQ(timestamp_bucket(1, 10), 1);
  EXPECT_EQ(timestamp_bucket(10, 10), 10);
  EXPECT_EQ(timestamp_bucket(3, 4), 8);
  EXPECT_THROW(timestamp_bucket(0, 4), InvalidInput);
  EXPECT_THROW(timestamp_bucket(5, 4), InvalidInput);
}

TEST(TimestampBucketTest, MonotoneAndInRange) {
  for (std::size_t n = 1; n <= 60; ++n) {
    int prev = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      const int b = timestamp_bucket(i, n);
      EXPECT_GE(b, 1);
      EXPECT_LE(b, 10);
      EXPECT_GE(b, prev);
      prev = b;
    }
    EXPECT_EQ(timestamp_bucket(n, n), 10);
  }
}

TEST(MakeUnitsTest, RejectsRaggedAndEmpty) {
  EXPECT_THROW(make_units({}), InvalidInput);
  EXPECT_THROW(make_units({{1.0, 2.0}, {1.0}}), InvalidInput);
}

TEST(EpisodeTest, ApplyActionMovesOneUnit) {
  EpisodeState s(units(9), 9, OrderingMode::Picked);
  s.apply_action(4);
  EXPECT_EQ(s.candidates().size(), 8u);
  EXPECT_EQ(s.chosen().size(), 1u);
  EXPECT_EQ(s.chosen()[0].original_index, 5u);
}

TEST(EpisodeTest, RepeatedIndexAddressesDifferentUnits) {
  EpisodeState s(units(5), 5, OrderingMode::Picked);
  s.apply_action(1);
  s.apply_action(1);
  EXPECT_EQ(indices(s.chosen()), (std::vector<std::size_t>{2, 3}));
}

TEST(EpisodeTest, BudgetTwoRunsExactlyTwoSteps) {
  EpisodeState s(units(9), 2, OrderingMode::Picked);
  std::size_t steps = 0;
  while (!s.is_done()) {
    s.apply_action(0);
    ++steps;
  }
  EXPECT_EQ(steps, 2u);
  EXPECT_THROW(s.apply_action(0), UsageError);
}

TEST(EpisodeTest, IsDoneCases) {
  EpisodeState a(units(4), 2, OrderingMode::Picked);
  a.apply_action(0);
  EXPECT_FALSE(a.is_done());
  a.apply_action(0);
  EXPECT_TRUE(a.is_done());

  EpisodeState b(units(3), 5, OrderingMode::Picked);
  for (int i = 0; i < 3; ++i) b.apply_action(0);
  EXPECT_TRUE(b.is_done());
  EXPECT_EQ(b.chosen().size(), 3u);
}

TEST(EpisodeTest, InvalidIndexRejected) {
  EpisodeState s(units(3), 2, OrderingMode::Picked);
  EXPECT_THROW(s.apply_action(3), InvalidInput);
  EXPECT_THROW(EpisodeState(units(3), 0, OrderingMode::Picked), InvalidInput);
}

TEST(EpisodeTest, FinalOutputOrdering) {
  for (auto mode : {OrderingMode::Picked, OrderingMode::Original}) {
    EpisodeState s(units(3), 3, mode);
    EXPECT_THROW(s.final_output(), UsageError);
    s.apply_action(2);
    s.apply_action(0);
    s.apply_action(0);
    const auto want = mode == OrderingMode::Picked ? std::vector<std::size_t>{3, 1, 2} : std::vector<std::size_t>{1, 2, 3};
    EXPECT_EQ(indices(s.final_output()), want);
  }
  for (auto mode : {OrderingMode::Picked, OrderingMode::Original}) {
    EpisodeState s(units(4), 1, mode);
    s.apply_action(2);
    EXPECT_EQ(indices(s.final_output()), std::vector<std::size_t>{3});
  }
}

TEST(EpisodeTest, ConservationAndShrinkProperty) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + static_cast<std::size_t>(uniform01(rng) * 15);
    const auto b = 1 + static_cast<std::size_t>(uniform01(rng) * 20);
    const auto mode = uniform01(rng) < 0.5 ? OrderingMode::Picked : OrderingMode::Original;
    EpisodeState s(units(n), b, mode);
    std::size_t steps = 0;
    while (!s.is_done()) {
      const auto pool = s.candidates().size();
      s.apply_action(static_cast<std::size_t>(uniform01(rng) * pool));
      EXPECT_EQ(s.candidates().size(), pool - 1);
      EXPECT_EQ(s.candidates().size() + s.chosen().size(), n);
      ++steps;
    }
    EXPECT_EQ(steps, std::min(n, b));
    auto ids = indices(s.chosen());
    std::sort(ids.begin(), ids.end());
    EXPECT_TRUE(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    const auto out = indices(s.final_output());
    if (mode == OrderingMode::Picked) {
      EXPECT_EQ(out, indices(s.chosen()));
    } else {
      EXPECT_EQ(out, ids);
    }
  }
}

TEST(BudgetTest, PercentOfAverageRoundsPerCategory) {
  Rng rng(1);
  std::vector<Sequence> seqs;
  // Category 0 averages 10 units, category 1 averages 3.
  for (std::size_t n : {9, 11}) seqs.push_back(testing::random_sequence(n, 1, 0, 0, rng));
  for (std::size_t n : {2, 4}) seqs.push_back(testing::random_sequence(n, 1, 1, 0, rng));
  const auto b25 = Budget::percent_of_average(25, seqs, 2);
  EXPECT_EQ(b25.for_category(0), 3u);  // round(2.5)
  EXPECT_EQ(b25.for_category(1), 1u);  // round(0.75)
  const auto b10 = Budget::percent_of_average(10, seqs, 2);
  EXPECT_EQ(b10.for_category(1), 1u);  // minimum 1
  EXPECT_EQ(Budget::fixed(5).resolve(0, 3), 3u);
  EXPECT_THROW(Budget::fixed(0), InvalidInput);
}

}  // namespace
}  // namespace seqabs
