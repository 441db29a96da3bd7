#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqabs/env/episode.hpp"
#include "seqabs/numeric/random.hpp"
#include "seqabs/reward/goal.hpp"

namespace seqabs {

/// First B units in input order. B == 0 is rejected; B > n clamps to n.
std::vector<AtomicUnit> baseline_first(std::span<const AtomicUnit> input, std::size_t budget);

/// Uniform random B-subset, returned in draw order.
std::vector<AtomicUnit> baseline_random(std::span<const AtomicUnit> input, std::size_t budget, Rng& rng);

inline constexpr std::size_t kOracleSubsetLimit = 1'000'000;

struct OracleResult {
  std::vector<AtomicUnit> selection;  // ascending input order
  double performance = 0.0;           // goal-label probability of the rendering
  std::size_t subsets_evaluated = 0;
};

/// n choose k, saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k) noexcept;

/// Exhaustive search over all B-subsets for the one whose rendering has the
/// highest goal-label probability; ties keep the lexicographically first
/// subset. Throws InvalidInput when C(n, B) exceeds `limit`.
OracleResult oracle_best_subset(std::span<const AtomicUnit> input, std::size_t budget, const GoalClassifier& clf,
                                const Domain& domain, std::size_t label,
                                std::size_t limit = kOracleSubsetLimit);

}  // namespace seqabs
