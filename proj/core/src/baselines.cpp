#include "seqabs/domains/baselines.hpp"

#include <limits>
#include <numeric>
#include <string>

#include "seqabs/error.hpp"
#include "seqabs/reward/reward.hpp"

namespace seqabs {

std::vector<AtomicUnit> baseline_first(std::span<const AtomicUnit> input, std::size_t budget) {
  if (budget == 0) throw InvalidInput("baseline_first: budget must be positive");
  const auto n = std::min(budget, input.size());
  return {input.begin(), input.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<AtomicUnit> baseline_random(std::span<const AtomicUnit> input, std::size_t budget, Rng& rng) {
  if (budget == 0) throw InvalidInput("baseline_random: budget must be positive");
  std::vector<std::size_t> pool(input.size());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  const auto n = std::min(budget, input.size());
  std::vector<AtomicUnit> out;
  out.reserve(n);
  // Partial Fisher-Yates: draw without replacement.
  for (std::size_t i = 0; i < n; ++i) {
    const auto remaining = pool.size() - i;
    const auto j = i + std::min(remaining - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(remaining)));
    std::swap(pool[i], pool[j]);
    out.push_back(input[pool[i]]);
  }
  return out;
}

std::size_t binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const auto num = n - k + i;
    // result * num / i is exact at every step; guard the multiplication.
    if (result > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
    result = result * num / i;
  }
  return result;
}

OracleResult oracle_best_subset(std::span<const AtomicUnit> input, std::size_t budget, const GoalClassifier& clf,
                                const Domain& domain, std::size_t label, std::size_t limit) {
  if (budget == 0) throw InvalidInput("oracle: budget must be positive");
  if (input.empty()) throw InvalidInput("oracle: empty input");
  const auto n = input.size();
  const auto k = std::min(budget, n);
  const auto total = binomial(n, k);
  if (total > limit) {
    throw InvalidInput("oracle: C(" + std::to_string(n) + ", " + std::to_string(k) + ") subsets exceed the limit of " +
                       std::to_string(limit));
  }

  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<AtomicUnit> subset(k);
  OracleResult best;
  best.performance = -1.0;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = input[idx[i]];
    const double p = performance(clf, domain, subset, label);
    ++best.subsets_evaluated;
    if (p > best.performance) {
      best.performance = p;
      best.selection = subset;
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

}  // namespace seqabs
