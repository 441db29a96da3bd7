#include "seqabs/policy/policy_net.hpp"

#include <string>

#include "seqabs/error.hpp"
#include "seqabs/numeric/layers.hpp"

namespace seqabs {

void PolicyConfig::validate() const {
  if (feature_dim == 0 || num_categories == 0 || gru_hidden == 0 || candidate_dim == 0 ||
      chosen_dim == 0 || category_dim == 0 || joint_dim == 0) {
    throw InvalidInput("policy config: every dimension must be positive");
  }
}

std::size_t select_action(const ActionDistribution& dist, SelectMode mode, Rng& rng) {
  if (dist.probabilities.empty()) throw InvalidInput("select_action: empty distribution");
  if (mode == SelectMode::Eval) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < dist.logits.size(); ++i) {
      if (dist.logits[i] > dist.logits[best]) best = i;
    }
    return best;
  }
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    cumulative += dist.probabilities[i];
    if (u < cumulative) return i;
  }
  // Rounding left u above the final cumulative sum.
  for (std::size_t i = dist.probabilities.size(); i-- > 0;) {
    if (dist.probabilities[i] > 0.0) return i;
  }
  return dist.probabilities.size() - 1;
}

ParameterSet PolicyNet::layout(const PolicyConfig& c) {
  c.validate();
  const auto h = c.gru_hidden;
  const auto d = c.feature_dim;
  ParameterSet p;
  p.add("candidate.weight", DenseArray::zeros({d + kTimestampBuckets, c.candidate_dim}));
  p.add("candidate.bias", DenseArray::zeros({c.candidate_dim}));
  p.add("gru.w_update", DenseArray::zeros({d, h}));
  p.add("gru.u_update", DenseArray::zeros({h, h}));
  p.add("gru.b_update", DenseArray::zeros({h}));
  p.add("gru.w_reset", DenseArray::zeros({d, h}));
  p.add("gru.u_reset", DenseArray::zeros({h, h}));
  p.add("gru.b_reset", DenseArray::zeros({h}));
  p.add("gru.w_cand", DenseArray::zeros({d, h}));
  p.add("gru.u_cand", DenseArray::zeros({h, h}));
  p.add("gru.b_cand", DenseArray::zeros({h}));
  p.add("chosen.weight", DenseArray::zeros({h, c.chosen_dim}));
  p.add("chosen.bias", DenseArray::zeros({c.chosen_dim}));
  p.add("category.table", DenseArray::zeros({c.num_categories, c.category_dim}));
  p.add("joint.weight",
        DenseArray::zeros({c.candidate_dim + c.chosen_dim + c.category_dim, c.joint_dim}));
  p.add("joint.bias", DenseArray::zeros({c.joint_dim}));
  p.add("logit.weight", DenseArray::zeros({c.joint_dim, 1}));
  p.add("logit.bias", DenseArray::zeros({1}));
  return p;
}

PolicyNet::Indices PolicyNet::resolve_indices(const ParameterSet& p) {
  Indices i{};
  i.cand_w = p.index_of("candidate.weight");
  i.cand_b = p.index_of("candidate.bias");
  i.gru_wz = p.index_of("gru.w_update");
  i.gru_uz = p.index_of("gru.u_update");
  i.gru_bz = p.index_of("gru.b_update");
  i.gru_wr = p.index_of("gru.w_reset");
  i.gru_ur = p.index_of("gru.u_reset");
  i.gru_br = p.index_of("gru.b_reset");
  i.gru_wc = p.index_of("gru.w_cand");
  i.gru_uc = p.index_of("gru.u_cand");
  i.gru_bc = p.index_of("gru.b_cand");
  i.chosen_w = p.index_of("chosen.weight");
  i.chosen_b = p.index_of("chosen.bias");
  i.category = p.index_of("category.table");
  i.joint_w = p.index_of("joint.weight");
  i.joint_b = p.index_of("joint.bias");
  i.logit_w = p.index_of("logit.weight");
  i.logit_b = p.index_of("logit.bias");
  return i;
}

PolicyNet::PolicyNet(PolicyConfig config, std::uint64_t seed)
    : config_(config), params_(layout(config)), idx_(resolve_indices(params_)), seed_(seed) {
  Rng rng(seed);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto& name = params_.name(i);
    const bool is_bias = name.ends_with(".bias") || name.starts_with("gru.b_");
    if (!is_bias) uniform_fill(params_[i], kInitLimit, rng);
  }
}

PolicyNet::PolicyNet(PolicyConfig config, ParameterSet params, std::uint64_t seed)
    : config_(config), params_(std::move(params)), seed_(seed) {
  if (!params_.same_layout(layout(config_))) {
    throw InvalidInput("policy parameters do not match the configured layer sizes");
  }
  if (!params_.all_finite()) throw InvalidInput("policy parameters contain non-finite values");
  idx_ = resolve_indices(params_);
}

void PolicyNet::check_features(const AtomicUnit& au) const {
  if (au.features.size() != config_.feature_dim) {
    throw InvalidInput("atomic unit has " + std::to_string(au.features.size()) +
                       " features, policy expects " + std::to_string(config_.feature_dim));
  }
  if (au.timestamp < 1 || au.timestamp > kTimestampBuckets) {
    throw InvalidInput("atomic unit timestamp bucket outside [1, 10]");
  }
}

Tape::Var PolicyNet::candidate_on(Tape& tape, const AtomicUnit& au) const {
  check_features(au);
  DenseArray input({config_.feature_dim + kTimestampBuckets});
  for (std::size_t i = 0; i < config_.feature_dim; ++i) input[i] = au.features[i];
  input[config_.feature_dim + static_cast<std::size_t>(au.timestamp - 1)] = 1.0;
  const auto x = tape.constant(std::move(input));
  const auto pre = tape.add(tape.matvec(x, tape.parameter(idx_.cand_w)), tape.parameter(idx_.cand_b));
  return tape.tanh(pre);
}

Tape::Var PolicyNet::chosen_on(Tape& tape, std::span<const AtomicUnit> chosen) const {
  auto h = tape.constant(DenseArray::zeros({config_.gru_hidden}));
  auto gate = [&](Tape::Var x, Tape::Var state, std::size_t w, std::size_t u, std::size_t b) {
    return tape.add(tape.add(tape.matvec(x, tape.parameter(w)), tape.matvec(state, tape.parameter(u))),
                    tape.parameter(b));
  };
  for (const auto& au : chosen) {
    check_features(au);
    const auto x = tape.constant(DenseArray::vector(au.features));
    const auto z = tape.sigmoid(gate(x, h, idx_.gru_wz, idx_.gru_uz, idx_.gru_bz));
    const auto r = tape.sigmoid(gate(x, h, idx_.gru_wr, idx_.gru_ur, idx_.gru_br));
    const auto c = tape.tanh(gate(x, tape.mul(r, h), idx_.gru_wc, idx_.gru_uc, idx_.gru_bc));
    h = tape.add(tape.mul(tape.one_minus(z), h), tape.mul(z, c));
  }
  const auto pre = tape.add(tape.matvec(h, tape.parameter(idx_.chosen_w)), tape.parameter(idx_.chosen_b));
  return tape.tanh(pre);
}

Tape::Var PolicyNet::category_on(Tape& tape, std::size_t label) const {
  if (label >= config_.num_categories) {
    throw InvalidInput("category " + std::to_string(label) + " outside [0, " +
                       std::to_string(config_.num_categories) + ")");
  }
  return tape.row(tape.parameter(idx_.category), label);
}

Tape::Var PolicyNet::logits_on(Tape& tape, std::span<const AtomicUnit> candidates,
                               std::span<const AtomicUnit> chosen, std::size_t category) const {
  if (candidates.empty()) throw InvalidInput("score_actions: empty candidate pool");
  const auto chosen_emb = chosen_on(tape, chosen);
  const auto cat_emb = category_on(tape, category);
  std::vector<Tape::Var> logits;
  logits.reserve(candidates.size());
  for (const auto& au : candidates) {
    const Tape::Var parts[] = {candidate_on(tape, au), chosen_emb, cat_emb};
    const auto joint = tape.tanh(
        tape.add(tape.matvec(tape.concat(parts), tape.parameter(idx_.joint_w)), tape.parameter(idx_.joint_b)));
    logits.push_back(tape.add(tape.matvec(joint, tape.parameter(idx_.logit_w)), tape.parameter(idx_.logit_b)));
  }
  return tape.concat(logits);
}

DenseArray PolicyNet::embed_candidate(const AtomicUnit& au) const {
  Tape tape(params_);
  return tape.value(candidate_on(tape, au));
}

DenseArray PolicyNet::embed_chosen(std::span<const AtomicUnit> chosen) const {
  Tape tape(params_);
  return tape.value(chosen_on(tape, chosen));
}

DenseArray PolicyNet::embed_category(std::size_t label) const {
  Tape tape(params_);
  return tape.value(category_on(tape, label));
}

PolicyNet::Scored PolicyNet::score_on_tape(std::span<const AtomicUnit> candidates,
                                           std::span<const AtomicUnit> chosen, std::size_t category) const {
  Scored s{Tape(params_), {}, {}};
  s.logits = logits_on(s.tape, candidates, chosen, category);
  const auto& l = s.tape.value(s.logits);
  s.dist.logits.assign(l.values().begin(), l.values().end());
  s.dist.probabilities = softmax(s.dist.logits);
  return s;
}

ActionDistribution PolicyNet::score_actions(std::span<const AtomicUnit> candidates,
                                            std::span<const AtomicUnit> chosen, std::size_t category) const {
  return score_on_tape(candidates, chosen, category).dist;
}

ParameterSet PolicyNet::log_prob_gradient(Scored& scored, std::size_t action) const {
  const auto lp = scored.tape.log_softmax_pick(scored.logits, action);
  return scored.tape.backward(lp);
}

}  // namespace seqabs
