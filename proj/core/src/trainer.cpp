#include "seqabs/trainer/trainer.hpp"

#include <algorithm>
#include <exception>
#include <ostream>
#include <string>
#include <thread>

#include "seqabs/error.hpp"

namespace seqabs {

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kPlayStream = 2;
constexpr std::uint64_t kBaselineStream = 3;

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void check_compatible(const PolicyNet& policy, std::span<const Sequence> data, const GoalClassifier& clf,
                      const Domain& domain, const Budget& budget) {
  const auto& pc = policy.config();
  if (pc.feature_dim != domain.feature_dim()) {
    throw InvalidInput("policy feature dim " + std::to_string(pc.feature_dim) + " does not match domain '" +
                       domain.name() + "' feature dim " + std::to_string(domain.feature_dim()));
  }
  if (clf.input_dim() != domain.render_dim()) {
    throw InvalidInput("classifier input dim does not match the domain rendering");
  }
  for (const auto& s : data) {
    if (s.units.empty()) throw InvalidInput("sequence '" + s.id + "' has no atomic units");
    if (s.category >= pc.num_categories) {
      throw InvalidInput("sequence '" + s.id + "' category outside the policy's category table");
    }
    if (s.label >= clf.num_labels()) {
      throw InvalidInput("sequence '" + s.id + "' label outside the classifier's label set");
    }
    if (s.units.front().features.size() != pc.feature_dim) {
      throw InvalidInput("sequence '" + s.id + "' feature dim does not match the policy");
    }
    (void)budget.for_category(s.category);
  }
}

}  // namespace

void TrainerConfig::validate() const {
  if (plays == 0) throw InvalidInput("trainer: plays per episode must be at least 1");
  if (!(discount >= 0.0 && discount <= 1.0)) throw InvalidInput("trainer: discount must be in [0, 1]");
  if (!(learning_rate > 0.0)) throw InvalidInput("trainer: learning rate must be positive");
  if (!(reward_scale > 0.0)) throw InvalidInput("trainer: reward scale must be positive");
  if (random_baselines == 0) throw InvalidInput("trainer: need at least one random baseline");
  if (workers == 0) throw InvalidInput("trainer: workers must be at least 1");
}

Trajectory run_play(const PolicyNet& policy, const Sequence& input, std::size_t budget, SelectMode mode,
                    Rng& rng, const PlayContext& ctx) {
  if (ctx.baselines && !ctx.classifier) throw InvalidInput("run_play: rewards need a classifier");
  if (ctx.classifier && !ctx.domain) throw InvalidInput("run_play: classifier needs a domain");

  EpisodeState state(input.units, budget, ctx.domain ? ctx.domain->default_ordering() : OrderingMode::Picked);
  const auto steps = std::min(budget, input.units.size());
  if (ctx.baselines && (ctx.baselines->original.size() < steps || ctx.baselines->random.size() < steps)) {
    throw InvalidInput("run_play: baseline traces shorter than the episode");
  }

  Trajectory traj;
  traj.actions.reserve(steps);
  for (std::size_t t = 0; !state.is_done(); ++t) {
    std::size_t action = 0;
    if (mode == SelectMode::Train) {
      auto scored = policy.score_on_tape(state.candidates(), state.chosen(), input.category);
      action = select_action(scored.dist, mode, rng);
      traj.gradients.push_back(policy.log_prob_gradient(scored, action));
    } else {
      const auto dist = policy.score_actions(state.candidates(), state.chosen(), input.category);
      action = select_action(dist, mode, rng);
    }
    state.apply_action(action);
    traj.actions.push_back(action);

    if (ctx.classifier) {
      const double a = performance(*ctx.classifier, *ctx.domain, state.chosen(), input.label);
      traj.agent_performance.push_back(a);
      if (ctx.baselines) {
        traj.rewards.push_back(
            reward(a, ctx.baselines->original[t], ctx.baselines->random[t], ctx.delta, ctx.reward_scale));
      }
    }
  }
  traj.chosen = state.chosen();
  return traj;
}

std::vector<double> discounted_returns(std::span<const double> rewards, double discount) {
  std::vector<double> out(rewards.size());
  double running = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    running = rewards[t] + discount * running;
    out[t] = running;
  }
  return out;
}

ParameterSet policy_gradient(std::span<const Trajectory> plays, double discount) {
  if (plays.empty()) throw InvalidInput("policy_gradient: no trajectories");
  std::optional<ParameterSet> total;
  for (const auto& play : plays) {
    if (play.gradients.size() != play.length() || play.rewards.size() != play.length() || play.length() == 0) {
      throw InvalidInput("policy_gradient: trajectory lacks per-step gradients or rewards");
    }
    if (!total) total = play.gradients.front().zeros_like();
    const auto returns = discounted_returns(play.rewards, discount);
    for (std::size_t t = 0; t < play.length(); ++t) total->add_scaled(play.gradients[t], returns[t]);
  }
  total->scale(1.0 / static_cast<double>(plays.size()));
  return std::move(*total);
}

EvalSummary evaluate(const PolicyNet& policy, std::span<const Sequence> test, const GoalClassifier& clf,
                     const Domain& domain, const Budget& budget, SelectMode mode, Rng* rng) {
  if (test.empty()) throw InvalidInput("evaluate: empty test set");
  if (mode == SelectMode::Train && rng == nullptr) throw InvalidInput("evaluate: sampling needs an rng");
  Rng unused(0);
  Rng& r = rng ? *rng : unused;
  EvalSummary out;
  for (const auto& s : test) {
    const auto traj = run_play(policy, s, budget.resolve(s.category, s.units.size()), mode, r,
                               PlayContext{&domain, nullptr, nullptr});
    const auto probs = clf.predict(domain.render(traj.chosen).values());
    if (s.label >= probs.size()) throw InvalidInput("evaluate: label outside classifier range");
    out.mean_probability += probs[s.label];
    if (argmax(probs) == s.label) out.accuracy += 1.0;
  }
  out.count = test.size();
  out.accuracy /= static_cast<double>(out.count);
  out.mean_probability /= static_cast<double>(out.count);
  return out;
}

TrainResult train(PolicyNet& policy, std::span<const Sequence> dataset, std::span<const Sequence> eval_set,
                  const GoalClassifier& clf, const Domain& domain, const Budget& budget,
                  const TrainerConfig& config) {
  config.validate();
  if (dataset.empty()) throw InvalidInput("train: empty dataset");
  check_compatible(policy, dataset, clf, domain, budget);
  check_compatible(policy, eval_set, clf, domain, budget);

  TrainResult result;
  const bool periodic_eval = config.eval_every > 0 && !eval_set.empty();
  if (periodic_eval) result.initial = evaluate(policy, eval_set, clf, domain, budget);
  result.log.reserve(config.episodes);

  const auto K = config.episodes;
  const auto N = config.plays;
  for (std::size_t k = 0; k < K; ++k) {
    Rng data_rng = make_rng(config.seed, {kDataStream, k});
    const auto pick = std::min(dataset.size() - 1,
                               static_cast<std::size_t>(uniform01(data_rng) * static_cast<double>(dataset.size())));
    const Sequence& input = dataset[pick];
    const auto steps = budget.resolve(input.category, input.units.size());
    const double delta = delta_at(k, K);

    std::vector<Trajectory> plays(N);
    auto run = [&](std::size_t i) {
      Rng baseline_rng = make_rng(config.seed, {kBaselineStream, k, i});
      Rng play_rng = make_rng(config.seed, {kPlayStream, k, i});
      const auto traces = build_baselines(input, clf, domain, baseline_rng, steps, config.random_baselines);
      plays[i] = run_play(policy, input, steps, SelectMode::Train, play_rng,
                          PlayContext{&domain, &clf, &traces, delta, config.reward_scale});
    };
    if (config.workers > 1 && N > 1) {
      std::vector<std::jthread> pool;
      std::vector<std::exception_ptr> errors(N);
      for (std::size_t w = 0; w < std::min(config.workers, N); ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < N; i += config.workers) {
            try {
              run(i);
            } catch (...) {
              errors[i] = std::current_exception();
            }
          }
        });
      }
      pool.clear();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    } else {
      for (std::size_t i = 0; i < N; ++i) run(i);
    }

    const auto grad = policy_gradient(plays, config.discount);
    ascent_step(policy.params(), grad, config.learning_rate);
    if (!policy.params().all_finite()) {
      throw NumericError("training diverged at episode " + std::to_string(k + 1) +
                         ": parameters became non-finite");
    }

    MetricsRow row;
    row.episode = k + 1;
    row.delta = delta;
    for (const auto& p : plays) {
      double sum = 0.0;
      for (double r : p.rewards) sum += r;
      row.mean_reward += sum;
    }
    row.mean_reward /= static_cast<double>(N);
    if (periodic_eval && (k + 1) % config.eval_every == 0) {
      row.eval_accuracy = evaluate(policy, eval_set, clf, domain, budget).accuracy;
    }
    result.log.push_back(row);
  }
  if (!eval_set.empty()) result.final = evaluate(policy, eval_set, clf, domain, budget);
  return result;
}

void write_metrics(std::ostream& out, std::span<const MetricsRow> log) {
  const auto old_precision = out.precision(17);
  out << "episode,mean_reward,delta,eval_accuracy\n";
  for (const auto& row : log) {
    out << row.episode << ',' << row.mean_reward << ',' << row.delta << ',';
    if (row.eval_accuracy) out << *row.eval_accuracy;
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace seqabs
