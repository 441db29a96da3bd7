#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "seqabs/env/episode.hpp"
#include "seqabs/numeric/dense_array.hpp"
#include "seqabs/numeric/parameter_set.hpp"
#include "seqabs/numeric/random.hpp"
#include "seqabs/numeric/tape.hpp"

namespace seqabs {

/// Layer sizes of the selection agent.
struct PolicyConfig {
  std::size_t feature_dim = 1;     // per-AU domain feature length
  std::size_t num_categories = 1;  // rows of the category table
  std::size_t gru_hidden = 128;
  std::size_t candidate_dim = 9;
  std::size_t chosen_dim = 18;
  std::size_t category_dim = 3;
  std::size_t joint_dim = 15;

  /// Throws InvalidInput on any zero size.
  void validate() const;
  friend bool operator==(const PolicyConfig&, const PolicyConfig&) = default;
};

inline constexpr double kInitLimit = 0.08;

/// Softmax over one logit per candidate.
struct ActionDistribution {
  std::vector<double> logits;
  std::vector<double> probabilities;
};

enum class SelectMode { Train, Eval };

/// Train: multinomial sample. Eval: argmax of the logits, lowest index on ties.
std::size_t select_action(const ActionDistribution& dist, SelectMode mode, Rng& rng);

/// The selection agent.
///
///   candidate emb = tanh(FC([features | one-hot(timestamp)]))        [9]
///   chosen emb    = tanh(FC(GRU over chosen features, or 0 if none)) [18]
///   category emb  = row of the category table                        [3]
///   logit         = FC(tanh(FC([candidate | chosen | category])))    [1]
///
/// The chosen-list embedding and category embedding are shared by all
/// candidates of a step.
class PolicyNet {
 public:
  /// Weights uniform in [-0.08, 0.08], biases zero.
  PolicyNet(PolicyConfig config, std::uint64_t seed);
  /// Adopts existing parameters. Throws InvalidInput if the layout does not
  /// match `config`.
  PolicyNet(PolicyConfig config, ParameterSet params, std::uint64_t seed = 0);

  const PolicyConfig& config() const noexcept { return config_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const ParameterSet& params() const noexcept { return params_; }
  ParameterSet& params() noexcept { return params_; }

  DenseArray embed_candidate(const AtomicUnit& au) const;
  DenseArray embed_chosen(std::span<const AtomicUnit> chosen) const;
  DenseArray embed_category(std::size_t label) const;

  ActionDistribution score_actions(std::span<const AtomicUnit> candidates,
                                   std::span<const AtomicUnit> chosen, std::size_t category) const;

  /// Forward pass recorded on a tape, for gradient computation.
  struct Scored {
    Tape tape;
    Tape::Var logits;
    ActionDistribution dist;
  };
  Scored score_on_tape(std::span<const AtomicUnit> candidates, std::span<const AtomicUnit> chosen,
                       std::size_t category) const;

  /// d log pi(action) / d theta for a tape produced by score_on_tape.
  /// Consumes the tape.
  ParameterSet log_prob_gradient(Scored& scored, std::size_t action) const;

  /// Same layout as params(), all zeros.
  ParameterSet zero_gradients() const { return params_.zeros_like(); }

  /// Layout of a freshly initialised net, used to validate loaded weights.
  static ParameterSet layout(const PolicyConfig& config);

 private:
  struct Indices {
    std::size_t cand_w, cand_b;
    std::size_t gru_wz, gru_uz, gru_bz, gru_wr, gru_ur, gru_br, gru_wc, gru_uc, gru_bc;
    std::size_t chosen_w, chosen_b;
    std::size_t category;
    std::size_t joint_w, joint_b;
    std::size_t logit_w, logit_b;
  };
  static Indices resolve_indices(const ParameterSet& p);

  Tape::Var candidate_on(Tape& tape, const AtomicUnit& au) const;
  Tape::Var chosen_on(Tape& tape, std::span<const AtomicUnit> chosen) const;
  Tape::Var category_on(Tape& tape, std::size_t label) const;
  Tape::Var logits_on(Tape& tape, std::span<const AtomicUnit> candidates,
                      std::span<const AtomicUnit> chosen, std::size_t category) const;
  void check_features(const AtomicUnit& au) const;

  PolicyConfig config_;
  ParameterSet params_;
  Indices idx_;
  std::uint64_t seed_;
};

}  // namespace seqabs
