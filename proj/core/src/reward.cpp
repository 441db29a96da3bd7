#include "seqabs/reward/reward.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "seqabs/error.hpp"

namespace seqabs {

void RewardConfig::validate() const {
  if (!(scale > 0.0)) throw InvalidInput("reward scale must be positive");
  if (episodes == 0) throw InvalidInput("annealing schedule needs at least one episode");
  if (random_baselines == 0) throw InvalidInput("need at least one random baseline");
}

double delta_at(std::size_t k, std::size_t total_episodes) {
  if (total_episodes == 0) throw InvalidInput("delta_at: K must be positive");
  if (k >= total_episodes) return 1.0;
  return static_cast<double>(k) / static_cast<double>(total_episodes);
}

double performance(const GoalClassifier& clf, const Domain& domain, std::span<const AtomicUnit> selection,
                   std::size_t label) {
  if (clf.input_dim() != domain.render_dim()) {
    throw InvalidInput("classifier expects input of length " + std::to_string(clf.input_dim()) +
                       ", domain renders " + std::to_string(domain.render_dim()));
  }
  if (label >= clf.num_labels()) throw InvalidInput("performance: label outside classifier range");
  const auto rendered = domain.render(selection);
  return clf.predict(rendered.values())[label];
}

BaselineTraces build_baselines(const Sequence& input, const GoalClassifier& clf, const Domain& domain,
                               Rng& rng, std::size_t steps, std::size_t random_baselines) {
  const auto n = input.units.size();
  if (steps == 0 || steps > n) throw InvalidInput("build_baselines: steps must be in [1, n]");
  if (random_baselines == 0) throw InvalidInput("build_baselines: need at least one permutation");

  BaselineTraces out;
  out.original.reserve(steps);
  std::span<const AtomicUnit> all(input.units);
  for (std::size_t t = 1; t <= steps; ++t) {
    out.original.push_back(performance(clf, domain, all.first(t), input.label));
  }

  out.random.assign(steps, 0.0);
  std::vector<AtomicUnit> prefix;
  prefix.reserve(steps);
  for (std::size_t r = 0; r < random_baselines; ++r) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    if (r == 0) out.permutation = perm;
    prefix.clear();
    for (std::size_t t = 0; t < steps; ++t) {
      prefix.push_back(input.units[perm[t]]);
      out.random[t] += performance(clf, domain, prefix, input.label);
    }
  }
  for (double& g : out.random) g /= static_cast<double>(random_baselines);
  return out;
}

double reward(double agent, double original, double random, double delta, double scale) noexcept {
  return (agent - (delta * original + (1.0 - delta) * random)) * scale;
}

}  // namespace seqabs
