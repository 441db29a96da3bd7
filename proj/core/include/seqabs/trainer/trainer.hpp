#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "seqabs/env/episode.hpp"
#include "seqabs/numeric/parameter_set.hpp"
#include "seqabs/numeric/random.hpp"
#include "seqabs/policy/policy_net.hpp"
#include "seqabs/reward/goal.hpp"
#include "seqabs/reward/reward.hpp"

namespace seqabs {

inline constexpr double kDefaultDiscount = 0.9;
inline constexpr std::size_t kDefaultPlays = 2;

struct TrainerConfig {
  std::size_t episodes = 5000;                 // K
  std::size_t plays = kDefaultPlays;           // N
  double discount = kDefaultDiscount;          // gamma
  double learning_rate = kDefaultLearningRate;  // eta
  double reward_scale = kDefaultRewardScale;   // b
  std::size_t random_baselines = 1;
  std::size_t eval_every = 100;  // 0 disables periodic evaluation
  std::size_t workers = 1;       // threads running the plays of an episode
  std::uint64_t seed = 1;

  void validate() const;
};

/// Record of one play.
struct Trajectory {
  std::vector<std::size_t> actions;     // index into the pool at each step
  std::vector<ParameterSet> gradients;  // d log pi(a_t | s_t) / d theta; empty in eval mode
  std::vector<double> rewards;          // r_t; empty without reward inputs
  std::vector<double> agent_performance;  // a_t; empty without a classifier
  std::vector<AtomicUnit> chosen;       // picked order

  std::size_t length() const noexcept { return actions.size(); }
};

/// What a play needs to score itself. Leave `classifier` null to skip
/// performance tracking; leave `baselines` null to skip rewards.
struct PlayContext {
  const Domain* domain = nullptr;
  const GoalClassifier* classifier = nullptr;
  const BaselineTraces* baselines = nullptr;
  double delta = 0.0;
  double reward_scale = kDefaultRewardScale;
};

/// Runs score -> select -> move -> reward for min(budget, n) steps. Train
/// mode samples actions and records per-step log-probability gradients;
/// eval mode takes the argmax and records none.
Trajectory run_play(const PolicyNet& policy, const Sequence& input, std::size_t budget, SelectMode mode,
                    Rng& rng, const PlayContext& ctx = {});

/// R_t = sum_{t' >= t} gamma^(t' - t) r_t'
std::vector<double> discounted_returns(std::span<const double> rewards, double discount);

/// (1/N) sum_i sum_t grad log pi(a_it | s_it) R_it. Throws InvalidInput for
/// an empty set or a trajectory without recorded gradients/rewards.
ParameterSet policy_gradient(std::span<const Trajectory> plays, double discount);

struct MetricsRow {
  std::size_t episode = 0;  // 1-based
  double mean_reward = 0.0;  // mean over plays of the summed per-step reward
  double delta = 0.0;
  std::optional<double> eval_accuracy;
};

struct EvalSummary {
  double accuracy = 0.0;          // argmax of classifier == goal label
  double mean_probability = 0.0;  // mean goal-label probability
  std::size_t count = 0;
};

/// Classifies the B-AU abstraction of every test sequence. Eval mode is
/// deterministic; train mode samples with `rng`.
EvalSummary evaluate(const PolicyNet& policy, std::span<const Sequence> test, const GoalClassifier& clf,
                     const Domain& domain, const Budget& budget, SelectMode mode = SelectMode::Eval,
                     Rng* rng = nullptr);

struct TrainResult {
  std::vector<MetricsRow> log;  // one row per episode
  std::optional<EvalSummary> initial;
  std::optional<EvalSummary> final;
};

/// REINFORCE with the annealed comparative reward: per episode, sample one
/// input, run N plays, then take one ascent step on the play-averaged
/// gradient. Updates `policy` in place. Throws NumericError if the
/// parameters become non-finite.
TrainResult train(PolicyNet& policy, std::span<const Sequence> dataset, std::span<const Sequence> eval_set,
                  const GoalClassifier& clf, const Domain& domain, const Budget& budget,
                  const TrainerConfig& config);

/// "episode,mean_reward,delta,eval_accuracy" with an empty last field on
/// episodes without evaluation.
void write_metrics(std::ostream& out, std::span<const MetricsRow> log);

}  // namespace seqabs
