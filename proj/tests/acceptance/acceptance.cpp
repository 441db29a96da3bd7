// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "seqabs/domains/baselines.hpp"
#include "seqabs/domains/embedded.hpp"
#include "seqabs/domains/linear_classifier.hpp"
#include "seqabs/domains/synthetic.hpp"
#include "seqabs/policy/model_io.hpp"
#include "seqabs/trainer/trainer.hpp"
#include "test_support.hpp"

namespace {

using namespace seqabs;

// Same stream tags and defaults as the `seqabs train` command.
constexpr std::uint64_t kTagTrainData = 16;
constexpr std::uint64_t kTagTestData = 17;
constexpr std::uint64_t kTagClassifier = 18;
constexpr std::uint64_t kTagInit = 19;
constexpr std::uint64_t kTagEvalRandom = 20;
constexpr std::size_t kTrainPerClass = 200;
constexpr std::size_t kTestPerClass = 100;
constexpr std::size_t kSyntheticEpisodes = 20000;
constexpr std::size_t kEmbeddedEpisodes = 5000;
constexpr std::size_t kBudget = 2;
constexpr double kRunLimitSeconds = 600.0;

int failures = 0;

void report(bool ok, const std::string& id, const std::string& what) {
  std::printf("%s  %-3s %s\n", ok ? "PASS" : "FAIL", id.c_str(), what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Score {
  double correct = 0, probability = 0;
  std::size_t count = 0;
  void add(const std::vector<double>& p, std::size_t label) {
    correct += static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin()) == label ? 1 : 0;
    probability += p[label];
    ++count;
  }
  double accuracy() const { return correct / static_cast<double>(count); }
  double mean_probability() const { return probability / static_cast<double>(count); }
};

std::vector<double> classify(const GoalClassifier& clf, const Domain& d, std::span<const AtomicUnit> sel) {
  return clf.predict(d.render(sel).values());
}

struct SyntheticRun {
  std::vector<SyntheticSample> train_samples;
  std::vector<Sequence> train, test;
  LinearGoalClassifier clf{DenseArray::zeros({9, 2}), DenseArray::zeros({2})};
  PolicyNet policy{PolicyConfig{1, 3}, 0};
  EvalSummary untrained_sampled, trained;
  double seconds = 0.0;
};

SyntheticRun synthetic_run(std::uint64_t seed, SyntheticGoal goal) {
  SyntheticDomain dom;
  SyntheticRun r;
  Rng train_rng = make_rng(seed, {kTagTrainData});
  Rng test_rng = make_rng(seed, {kTagTestData});
  r.train_samples = gen_synthetic(kTrainPerClass, kDefaultSyntheticNoise, train_rng);
  r.train = to_sequences(r.train_samples, goal);
  r.test = to_sequences(gen_synthetic(kTestPerClass, kDefaultSyntheticNoise, test_rng), goal);
  Rng clf_rng = make_rng(seed, {kTagClassifier});
  r.clf = train_linear_classifier(dom, r.train, synthetic_num_labels(goal), {}, clf_rng);
  r.policy = PolicyNet(PolicyConfig{1, 3}, derive_seed(seed, {kTagInit}));

  Rng sample_rng = make_rng(seed, {kTagEvalRandom, 1});
  r.untrained_sampled = evaluate(r.policy, r.test, r.clf, dom, Budget::fixed(kBudget), SelectMode::Train, &sample_rng);

  TrainerConfig tc;
  tc.episodes = kSyntheticEpisodes;
  tc.eval_every = 0;
  tc.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  const auto result = train(r.policy, r.train, r.test, r.clf, dom, Budget::fixed(kBudget), tc);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.trained = *result.final;
  return r;
}

// ---- 1 to 3 -------------------------------------------------------------------

std::vector<SyntheticRun> synthetic_criteria() {
  SyntheticDomain dom;
  std::vector<SyntheticRun> runs;
  double untrained = 0, trained = 0, slowest = 0;
  Score first, random, oracle;
  double agent_probability = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    runs.push_back(synthetic_run(seed, SyntheticGoal::Category));
    const auto& r = runs.back();
    std::printf("      seed %llu: untrained %.3f, trained %.3f (p %.3f), %.1fs\n",
                static_cast<unsigned long long>(seed), r.untrained_sampled.accuracy, r.trained.accuracy,
                r.trained.mean_probability, r.seconds);
    untrained += r.untrained_sampled.accuracy / 5;
    trained += r.trained.accuracy / 5;
    agent_probability += r.trained.mean_probability / 5;
    slowest = std::max(slowest, r.seconds);
    Rng rng = make_rng(seed, {kTagEvalRandom});
    for (const auto& s : r.test) {
      first.add(classify(r.clf, dom, baseline_first(s.units, kBudget)), s.label);
      random.add(classify(r.clf, dom, baseline_random(s.units, kBudget, rng)), s.label);
      oracle.add(classify(r.clf, dom, oracle_best_subset(s.units, kBudget, r.clf, dom, s.label).selection), s.label);
    }
  }

  report(untrained >= 0.45 && untrained <= 0.75 && trained >= 0.85 && slowest < kRunLimitSeconds, "1",
         fmt("synthetic accuracy over 5 seeds: untrained %.4f in [0.45, 0.75], trained %.4f >= 0.85, "
             "slowest run %.1fs < %.0fs",
             untrained, trained, slowest, kRunLimitSeconds));
  report(trained >= first.accuracy() + 0.05, "2a",
         fmt("agent %.4f beats first-B %.4f by >= 0.05", trained, first.accuracy()));
  report(trained >= random.accuracy() + 0.05, "2b",
         fmt("agent %.4f beats random-B %.4f by >= 0.05", trained, random.accuracy()));
  report(agent_probability >= 0.9 * oracle.mean_probability(), "3",
         fmt("agent mean probability %.4f >= 0.9 x oracle %.4f (ratio %.4f)", agent_probability,
             oracle.mean_probability(), agent_probability / oracle.mean_probability()));
  return runs;
}

// ---- 4 ------------------------------------------------------------------------

void gradient_criterion() {
  constexpr int kNets = 100;
  constexpr double kStep = 1e-5, kTol = 1e-3;
  Rng rng(2024);
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(uniform01(rng) * (hi - lo + 1)); };
  int passed = 0;
  double worst = 0;
  std::size_t checked = 0;
  for (int net_i = 0; net_i < kNets; ++net_i) {
    PolicyConfig cfg{pick(1, 3), pick(1, 4)};
    cfg.gru_hidden = pick(2, 8);
    PolicyNet net(cfg, rng());
    for (std::size_t i = 0; i < net.params().size(); ++i) uniform_fill(net.params()[i], 0.6, rng);
    const auto s = testing::random_sequence(pick(2, 7), cfg.feature_dim, pick(0, cfg.num_categories - 1), 0, rng);
    const auto split = pick(0, s.units.size() - 1);
    const std::vector<AtomicUnit> chosen(s.units.begin(), s.units.begin() + static_cast<std::ptrdiff_t>(split));
    const std::vector<AtomicUnit> pool(s.units.begin() + static_cast<std::ptrdiff_t>(split), s.units.end());
    const auto action = pick(0, pool.size() - 1);

    auto scored = net.score_on_tape(pool, chosen, s.category);
    const auto grad = net.log_prob_gradient(scored, action);
    bool ok = true;
    for (std::size_t p = 0; p < grad.size(); ++p) {
      for (std::size_t e = 0; e < grad[p].size(); ++e) {
        auto& w = net.params()[p][e];
        const double keep = w;
        w = keep + kStep;
        const double up = testing::log_prob(net, pool, chosen, s.category, action);
        w = keep - kStep;
        const double down = testing::log_prob(net, pool, chosen, s.category, action);
        w = keep;
        const double err = testing::relative_error(grad[p][e], (up - down) / (2 * kStep));
        worst = std::max(worst, err);
        ok = ok && err <= kTol;
        ++checked;
      }
    }
    passed += ok ? 1 : 0;
  }
  report(passed == kNets, "4",
         fmt("%d/%d random nets match central differences (%zu parameters, worst relative error %.2e <= %.0e)",
             passed, kNets, checked, worst, kTol));
}

// ---- 5 ------------------------------------------------------------------------

double brute_reward(double a, double h, double g, double delta, double b) {
  const double baseline = delta * h + (1.0 - delta) * g;
  return (a - baseline) * b;
}

std::vector<double> brute_returns(const std::vector<double>& r, double gamma) {
  std::vector<double> out(r.size(), 0.0);
  for (std::size_t t = 0; t < r.size(); ++t) {
    for (std::size_t u = t; u < r.size(); ++u) out[t] += std::pow(gamma, static_cast<double>(u - t)) * r[u];
  }
  return out;
}

void arithmetic_criterion() {
  Rng rng(55);
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    const double a = uniform01(rng), h = uniform01(rng), g = uniform01(rng);
    const double delta = i % 3 == 0 ? 0.0 : i % 3 == 1 ? 1.0 : uniform01(rng);
    const double b = i % 2 ? 100.0 : 1.0 + 200 * uniform01(rng);
    worst = std::max(worst, std::abs(reward(a, h, g, delta, b) - brute_reward(a, h, g, delta, b)));
  }
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> r(1 + static_cast<std::size_t>(uniform01(rng) * 15));
    for (double& v : r) v = (uniform01(rng) - 0.5) * 200;
    const double gamma = i % 4 == 0 ? 0.9 : i % 4 == 1 ? 0.0 : i % 4 == 2 ? 1.0 : uniform01(rng);
    const auto got = discounted_returns(r, gamma);
    const auto want = brute_returns(r, gamma);
    for (std::size_t t = 0; t < r.size(); ++t) {
      worst = std::max(worst, std::abs(got[t] - want[t]) / std::max(1.0, std::abs(want[t])));
    }
  }
  const bool endpoints = delta_at(0, 5000) == 0.0 && delta_at(5000, 5000) == 1.0 && delta_at(2500, 5000) == 0.5;
  report(worst <= 1e-12 && endpoints, "5",
         fmt("reward and discounted returns match the brute-force evaluator (max error %.2e <= 1e-12), delta "
             "endpoints %s",
             worst, endpoints ? "ok" : "wrong"));
}

// ---- 6 ------------------------------------------------------------------------

void invariant_criterion(const SyntheticRun& run) {
  std::vector<std::string> broken;
  auto check = [&](bool ok, const char* name) {
    if (!ok) broken.emplace_back(name);
  };
  Rng rng(66);

  bool softmax_ok = true;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> l(1 + static_cast<std::size_t>(uniform01(rng) * 20));
    for (double& v : l) v = (uniform01(rng) - 0.5) * 60;
    const auto p = softmax(l);
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    softmax_ok = softmax_ok && std::abs(sum - 1.0) <= 1e-12 &&
                 std::all_of(p.begin(), p.end(), [](double v) { return v >= 0; });
  }
  check(softmax_ok, "softmax normalization");

  bool conserve = true, decrement = true, ordering = true;
  for (int i = 0; i < 300; ++i) {
    const auto s = testing::random_sequence(1 + static_cast<std::size_t>(uniform01(rng) * 12), 1, 0, 0, rng);
    const auto budget = 1 + static_cast<std::size_t>(uniform01(rng) * 14);
    const auto mode = i % 2 ? OrderingMode::Picked : OrderingMode::Original;
    EpisodeState st(s.units, budget, mode);
    std::vector<std::size_t> picked;
    while (!st.is_done()) {
      const auto before = st.candidates().size();
      const auto a = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(before));
      picked.push_back(st.candidates()[a].original_index);
      st.apply_action(a);
      decrement = decrement && st.candidates().size() == before - 1;
      conserve = conserve && st.candidates().size() + st.chosen().size() == s.units.size();
    }
    conserve = conserve && st.chosen().size() == std::min(budget, s.units.size());
    std::vector<std::size_t> out;
    for (const auto& u : st.final_output()) out.push_back(u.original_index);
    if (mode == OrderingMode::Original) std::sort(picked.begin(), picked.end());
    ordering = ordering && out == picked;
  }
  check(conserve, "pool/chosen conservation");
  check(decrement, "action-space decrement");
  check(ordering, "ordering-mode contract");

  bool delta_ok = delta_at(0, 7) == 0.0 && delta_at(7, 7) == 1.0;
  for (std::size_t k = 1; k <= 7; ++k) delta_ok = delta_ok && delta_at(k, 7) >= delta_at(k - 1, 7);
  check(delta_ok, "delta schedule endpoints");

  bool determinism = true;
  for (const auto& s : run.test) {
    Rng a(1), b(2);
    determinism = determinism && run_play(run.policy, s, kBudget, SelectMode::Eval, a).actions ==
                                     run_play(run.policy, s, kBudget, SelectMode::Eval, b).actions;
  }
  check(determinism, "eval-mode determinism");

  std::stringstream ps, cs;
  write_policy(ps, run.policy, "synthetic");
  write_classifier(cs, run.clf, "category");
  const auto policy_back = read_policy(ps);
  const auto clf_back = read_classifier(cs);
  SyntheticDomain dom;
  bool roundtrip = policy_back.params() == run.policy.params() && clf_back.weights() == run.clf.weights() &&
                   clf_back.bias() == run.clf.bias();
  std::size_t done = 0;
  for (const auto& s : run.test) {
    if (++done > 30) break;
    const auto chosen = std::vector<AtomicUnit>(s.units.begin(), s.units.begin() + 1);
    const auto pool = std::vector<AtomicUnit>(s.units.begin() + 1, s.units.end());
    roundtrip = roundtrip && policy_back.score_actions(pool, chosen, s.category).probabilities ==
                                 run.policy.score_actions(pool, chosen, s.category).probabilities;
    roundtrip = roundtrip && classify(clf_back, dom, s.units) == classify(run.clf, dom, s.units);
  }
  check(roundtrip, "serialization round-trip");

  std::string detail = "7 invariant families hold";
  if (!broken.empty()) {
    detail = "broken:";
    for (const auto& b : broken) detail += " [" + b + "]";
  }
  report(broken.empty(), "6", detail);
}

// ---- 7 ------------------------------------------------------------------------

std::array<double, kSyntheticPixels> pixel_counts(const SyntheticRun& run) {
  std::array<double, kSyntheticPixels> counts{};
  Rng unused(0);
  for (const auto& s : run.test) {
    for (const auto& u : run_play(run.policy, s, kBudget, SelectMode::Eval, unused).chosen) {
      counts[u.original_index - 1] += 1;
    }
  }
  return counts;
}

void goal_switch_criterion(const SyntheticRun& category_run) {
  const auto attribute_run = synthetic_run(1, SyntheticGoal::Attribute);
  const auto a = pixel_counts(category_run);
  const auto b = pixel_counts(attribute_run);
  const double na = std::accumulate(a.begin(), a.end(), 0.0), nb = std::accumulate(b.begin(), b.end(), 0.0);
  double chi2 = 0;
  int bins = 0;
  for (std::size_t p = 0; p < kSyntheticPixels; ++p) {
    const double col = a[p] + b[p];
    if (col == 0) continue;
    ++bins;
    const double ea = col * na / (na + nb), eb = col * nb / (na + nb);
    chi2 += (a[p] - ea) * (a[p] - ea) / ea + (b[p] - eb) * (b[p] - eb) / eb;
  }
  std::string ca, cb;
  for (std::size_t p = 0; p < kSyntheticPixels; ++p) {
    ca += fmt("%s%.0f", p ? " " : "", a[p]);
    cb += fmt("%s%.0f", p ? " " : "", b[p]);
  }
  std::printf("      pixel picks, category goal:  %s\n      pixel picks, attribute goal: %s\n", ca.c_str(),
              cb.c_str());
  double p_value = 1.0;
  if (bins > 1) {
    const boost::math::chi_squared dist(bins - 1);
    p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  }
  report(p_value < 0.01, "7",
         fmt("goal switch changes pixel selection: chi2 %.2f, dof %d, p %.3g < 0.01", chi2, bins - 1, p_value));
}

// ---- 8 ------------------------------------------------------------------------

// Three categories, 20 sequences of 8 units. One unit per sequence carries
// the label in feature 0 and a salience flag in feature 3; the rest are noise.
EmbeddedDataset embedded_fixture() {
  EmbeddedDataset d;
  d.dim = 4;
  d.num_categories = 3;
  d.labels = {"neg", "pos"};
  Rng rng(808);
  for (std::size_t i = 0; i < 20; ++i) {
    const std::size_t label = i % 2;
    const auto signal = static_cast<std::size_t>(uniform01(rng) * 8);
    std::vector<std::vector<double>> rows(8);
    for (std::size_t u = 0; u < 8; ++u) {
      if (u == signal) {
        rows[u] = {label ? 1.0 : -1.0, 0.2 * uniform01(rng), 0.2 * uniform01(rng), 1.0};
      } else {
        rows[u] = {0.6 * (uniform01(rng) - 0.5), uniform01(rng), uniform01(rng), 0.0};
      }
    }
    Sequence s;
    s.id = "seq" + std::to_string(i);
    s.units = make_units(rows);
    s.category = i % 3;
    s.label = label;
    d.sequences.push_back(std::move(s));
  }
  return d;
}

void embedded_criterion() {
  const auto fixture = embedded_fixture();
  std::stringstream text;
  write_embedded(text, fixture);
  const auto data = parse_embedded(text);
  bool roundtrip = data.dim == fixture.dim && data.labels == fixture.labels && data.sequences.size() == 20;
  for (std::size_t i = 0; roundtrip && i < data.sequences.size(); ++i) {
    const auto& a = data.sequences[i];
    const auto& b = fixture.sequences[i];
    roundtrip = a.id == b.id && a.category == b.category && a.label == b.label && a.units.size() == b.units.size();
    for (std::size_t u = 0; roundtrip && u < a.units.size(); ++u) roundtrip = a.units[u].features == b.units[u].features;
  }

  EmbeddedDomain dom(data.dim, data.num_categories);
  Rng clf_rng(81);
  const auto clf = train_linear_classifier(dom, data.sequences, data.labels.size(), {}, clf_rng);
  PolicyNet policy(PolicyConfig{data.dim, data.num_categories}, 82);
  TrainerConfig tc;
  tc.episodes = kEmbeddedEpisodes;
  tc.eval_every = 0;
  tc.seed = 83;
  const auto result = train(policy, data.sequences, data.sequences, clf, dom, Budget::fixed(kBudget), tc);
  const double agent = result.final->accuracy;

  Score random;
  Rng rng(84);
  for (int rep = 0; rep < 200; ++rep) {
    for (const auto& s : data.sequences) random.add(classify(clf, dom, baseline_random(s.units, kBudget, rng)), s.label);
  }
  report(roundtrip && agent >= random.accuracy() + 0.03, "8",
         fmt("embedded fixture: round-trip %s, agent %.4f beats random-B %.4f by >= 0.03",
             roundtrip ? "exact" : "BROKEN", agent, random.accuracy()));
}

}  // namespace

int main() {
  std::printf("acceptance: synthetic 3x3 domain, B=%zu, K=%zu, 5 seeds\n", kBudget, kSyntheticEpisodes);
  const auto runs = synthetic_criteria();
  gradient_criterion();
  arithmetic_criterion();
  invariant_criterion(runs.front());
  goal_switch_criterion(runs.front());
  embedded_criterion();
  std::printf("%s: %d criterion line(s) failed\n", failures ? "FAILED" : "PASSED", failures);
  return failures ? 1 : 0;
}
