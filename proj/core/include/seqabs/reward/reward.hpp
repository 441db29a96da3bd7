#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqabs/env/episode.hpp"
#include "seqabs/numeric/random.hpp"
#include "seqabs/reward/goal.hpp"

namespace seqabs {

inline constexpr double kDefaultRewardScale = 100.0;

struct RewardConfig {
  double scale = kDefaultRewardScale;  // b
  std::size_t episodes = 1;            // K, length of the annealing schedule
  std::size_t random_baselines = 1;    // permutations averaged into g_t

  void validate() const;
};

/// Annealing weight k / K clamped to [0, 1]. Throws InvalidInput when K == 0.
double delta_at(std::size_t k, std::size_t total_episodes);

/// Probability the classifier assigns to `label` for the rendered selection.
/// Throws InvalidInput if the classifier and domain disagree on dimensions.
double performance(const GoalClassifier& clf, const Domain& domain, std::span<const AtomicUnit> selection,
                   std::size_t label);

/// Per-step reference performances for one play.
struct BaselineTraces {
  std::vector<double> original;  // h_t: first t AUs in input order
  std::vector<double> random;    // g_t: first t AUs of the random permutation(s)
  std::vector<std::size_t> permutation;  // first permutation drawn, as 0-based input positions
};

/// Builds h_1..h_T and g_1..g_T. With `random_baselines` > 1, g_t averages
/// over that many independent permutations. Requires 1 <= T <= |units|.
BaselineTraces build_baselines(const Sequence& input, const GoalClassifier& clf, const Domain& domain,
                               Rng& rng, std::size_t steps, std::size_t random_baselines = 1);

/// (agent - (delta * original + (1 - delta) * random)) * scale
double reward(double agent, double original, double random, double delta, double scale) noexcept;

}  // namespace seqabs
