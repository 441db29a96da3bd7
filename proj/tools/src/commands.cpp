#include "seqabs/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "seqabs/cli/run_config.hpp"
#include "seqabs/domains/baselines.hpp"
#include "seqabs/domains/embedded.hpp"
#include "seqabs/domains/linear_classifier.hpp"
#include "seqabs/domains/synthetic.hpp"
#include "seqabs/policy/model_io.hpp"
#include "seqabs/trainer/trainer.hpp"

namespace seqabs::cli {
namespace {

// Stream tags for derive_seed; the trainer owns 1 to 3.
constexpr std::uint64_t kTagTrainData = 16;
constexpr std::uint64_t kTagTestData = 17;
constexpr std::uint64_t kTagClassifier = 18;
constexpr std::uint64_t kTagInit = 19;
constexpr std::uint64_t kTagEvalRandom = 20;

// ---- option plumbing --------------------------------------------------------

/// Flags that override config fields once the file has been applied.
class Overrides {
 public:
  template <class T>
  void add(CLI::App* app, const std::string& flag, T RunConfig::*field, const std::string& help) {
    auto value = std::make_shared<T>();
    auto* opt = app->add_option(flag, *value, help);
    apply_.push_back([=](RunConfig& c) {
      if (opt->count() > 0) c.*field = *value;
    });
  }

  void add_path(CLI::App* app, const std::string& flag, std::filesystem::path RunConfig::*field,
                const std::string& help) {
    auto value = std::make_shared<std::string>();
    auto* opt = app->add_option(flag, *value, help);
    apply_.push_back([=](RunConfig& c) {
      if (opt->count() > 0) c.*field = *value;
    });
  }

  void add_custom(CLI::App* app, const std::string& flag, const std::string& help,
                  std::function<void(RunConfig&, const std::string&)> set) {
    auto value = std::make_shared<std::string>();
    auto* opt = app->add_option(flag, *value, help);
    apply_.push_back([=](RunConfig& c) {
      if (opt->count() > 0) set(c, *value);
    });
  }

  /// defaults -> --config file -> flags, then validation.
  RunConfig resolve() const {
    RunConfig c;
    if (!config_file.empty()) c = load_config_file(config_file, c);
    for (const auto& f : apply_) f(c);
    c.validate();
    return c;
  }

  std::string config_file;

 private:
  std::vector<std::function<void(RunConfig&)>> apply_;
};

void add_common(CLI::App* app, Overrides& ov) {
  app->add_option("-c,--config", ov.config_file, "JSON run configuration");
  ov.add(app, "--seed", &RunConfig::seed, "Master seed");
  ov.add_custom(app, "--domain", "synthetic | embedded",
                [](RunConfig& c, const std::string& v) { c.domain = parse_domain(v); });
  ov.add(app, "--goal", &RunConfig::goal, "Synthetic goal: category | attribute");
  ov.add_custom(app, "-B,--budget", "Budget: a count (2) or a percentage of the average length (25%)",
                [](RunConfig& c, const std::string& v) { c.budget = BudgetSpec::parse(v); });
  ov.add_path(app, "--train-data", &RunConfig::train_data, "Training data file");
  ov.add_path(app, "--test-data", &RunConfig::test_data, "Test data file");
  ov.add(app, "--per-class", &RunConfig::per_class, "Generated training samples per class");
  ov.add(app, "--test-per-class", &RunConfig::test_per_class, "Generated test samples per class");
  ov.add(app, "--noise", &RunConfig::noise, "Synthetic pixel noise sigma");
  ov.add_path(app, "--classifier", &RunConfig::classifier, "Goal classifier model file");
  ov.add(app, "--train-classifier", &RunConfig::train_classifier, "Train the classifier when the file is missing");
  ov.add(app, "--classifier-epochs", &RunConfig::classifier_epochs, "Classifier training epochs");
}

void add_training(CLI::App* app, Overrides& ov) {
  ov.add_path(app, "--metrics", &RunConfig::metrics, "Metrics CSV output");
  ov.add_custom(app, "-K,--episodes", "Training episodes", [](RunConfig& c, const std::string& v) {
    try {
      c.episodes = static_cast<std::size_t>(std::stoull(v));
    } catch (const std::exception&) {
      throw ConfigError("episodes must be a non-negative integer");
    }
  });
  ov.add(app, "--plays", &RunConfig::plays, "Plays per episode");
  ov.add(app, "--discount", &RunConfig::discount, "Return discount");
  ov.add(app, "--learning-rate", &RunConfig::learning_rate, "Ascent step size");
  ov.add(app, "--reward-scale", &RunConfig::reward_scale, "Reward scale b");
  ov.add(app, "--random-baselines", &RunConfig::random_baselines, "Random permutations averaged per play");
  ov.add(app, "--eval-every", &RunConfig::eval_every, "Episodes between evaluations (0 disables)");
  ov.add(app, "--workers", &RunConfig::workers, "Threads running the plays of an episode");
  ov.add(app, "--gru-hidden", &RunConfig::gru_hidden, "GRU hidden size");
}

// ---- data -------------------------------------------------------------------

struct Workspace {
  std::unique_ptr<Domain> domain;
  std::vector<std::string> labels;
  std::vector<Sequence> train;
  std::vector<Sequence> test;
};

SyntheticGoal synthetic_goal(const RunConfig& c) {
  return c.goal == "attribute" ? SyntheticGoal::Attribute : SyntheticGoal::Category;
}

std::vector<std::string> synthetic_labels(SyntheticGoal goal) {
  if (goal == SyntheticGoal::Attribute) return {"no-center", "center"};
  return {synthetic_class_name(0), synthetic_class_name(1), synthetic_class_name(2)};
}

std::vector<SyntheticSample> read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return read_synthetic_csv(in);
}

std::vector<Sequence> synthetic_split(const RunConfig& c, const std::filesystem::path& file, std::size_t per_class,
                                      std::uint64_t tag) {
  if (!file.empty()) return to_sequences(read_csv_file(file), synthetic_goal(c));
  Rng rng = make_rng(c.seed, {tag});
  return to_sequences(gen_synthetic(per_class, c.noise, rng), synthetic_goal(c));
}

Workspace load_workspace(const RunConfig& c) {
  Workspace w;
  if (c.domain == DomainKind::Synthetic) {
    w.domain = std::make_unique<SyntheticDomain>();
    w.labels = synthetic_labels(synthetic_goal(c));
    w.train = synthetic_split(c, c.train_data, c.per_class, kTagTrainData);
    w.test = synthetic_split(c, c.test_data, c.test_per_class, kTagTestData);
    return w;
  }
  auto train = load_embedded(c.train_data);
  auto test = c.test_data.empty() ? train : load_embedded(c.test_data);
  if (test.dim != train.dim || test.labels != train.labels || test.num_categories != train.num_categories) {
    throw InvalidInput("test data header does not match the training data");
  }
  w.domain = std::make_unique<EmbeddedDomain>(train.dim, train.num_categories);
  w.labels = train.labels;
  w.train = std::move(train.sequences);
  w.test = std::move(test.sequences);
  return w;
}

Budget resolve_budget(const RunConfig& c, std::span<const Sequence> reference, std::size_t num_categories) {
  if (c.budget.percent) return Budget::percent_of_average(c.budget.value, reference, num_categories);
  return Budget::fixed(static_cast<std::size_t>(c.budget.value));
}

void check_classifier(const GoalClassifier& clf, const Workspace& w) {
  if (clf.input_dim() != w.domain->render_dim() || clf.num_labels() != w.labels.size()) {
    throw InvalidInput("classifier expects " + std::to_string(clf.input_dim()) + " inputs and " +
                       std::to_string(clf.num_labels()) + " labels; the data has " +
                       std::to_string(w.domain->render_dim()) + " and " + std::to_string(w.labels.size()));
  }
}

std::string classifier_goal(const RunConfig& c) {
  return c.domain == DomainKind::Synthetic ? c.goal : "embedded";
}

LinearGoalClassifier fit_classifier(const RunConfig& c, const Workspace& w) {
  ClassifierTrainingOptions opt;
  opt.epochs = c.classifier_epochs;
  Rng rng = make_rng(c.seed, {kTagClassifier});
  return train_linear_classifier(*w.domain, w.train, w.labels.size(), opt, rng);
}

LinearGoalClassifier obtain_classifier(const RunConfig& c, const Workspace& w, std::ostream& err) {
  if (!c.classifier.empty() && std::filesystem::exists(c.classifier)) {
    auto clf = load_classifier(c.classifier);
    check_classifier(clf, w);
    return clf;
  }
  if (!c.train_classifier) {
    throw ConfigError(c.classifier.empty() ? "no classifier given and train_classifier is false"
                                           : "classifier '" + c.classifier.string() +
                                                 "' not found and train_classifier is false");
  }
  err << "training goal classifier on " << w.train.size() << " sequences\n";
  auto clf = fit_classifier(c, w);
  if (!c.classifier.empty()) save_classifier(c.classifier, clf, classifier_goal(c));
  return clf;
}

PolicyNet load_compatible_policy(const std::filesystem::path& path, const Workspace& w) {
  auto policy = load_policy(path);
  const auto& pc = policy.config();
  if (pc.feature_dim != w.domain->feature_dim() || pc.num_categories != w.domain->num_categories()) {
    throw InvalidInput("model expects feature dim " + std::to_string(pc.feature_dim) + " and " +
                       std::to_string(pc.num_categories) + " categories; the data has " +
                       std::to_string(w.domain->feature_dim()) + " and " +
                       std::to_string(w.domain->num_categories()));
  }
  return policy;
}

// ---- reporting --------------------------------------------------------------

struct Score {
  std::size_t correct = 0;
  double probability = 0.0;
  std::size_t count = 0;

  void add(const std::vector<double>& p, std::size_t label) {
    const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    correct += best == label ? 1 : 0;
    probability += p[label];
    ++count;
  }
  double accuracy() const { return count ? static_cast<double>(correct) / count : 0.0; }
  double mean_probability() const { return count ? probability / count : 0.0; }
};

std::vector<double> classify(const GoalClassifier& clf, const Domain& d, std::span<const AtomicUnit> sel) {
  return clf.predict(d.render(sel).values());
}

struct ReportRow {
  std::string method;
  double accuracy;
  double mean_probability;
};

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "method,accuracy,mean_probability\n" << std::setprecision(17);
  for (const auto& r : rows) out << r.method << ',' << r.accuracy << ',' << r.mean_probability << '\n';
}

void write_report_table(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << std::left << std::setw(13) << "method" << std::right << std::setw(10) << "accuracy" << std::setw(18)
      << "mean probability" << '\n'
      << std::string(41, '-') << '\n'
      << std::fixed << std::setprecision(4);
  for (const auto& r : rows) {
    out << std::left << std::setw(13) << r.method << std::right << std::setw(10) << r.accuracy << std::setw(18)
        << r.mean_probability << '\n';
  }
  out << std::defaultfloat;
}

std::string join_indices(std::span<const AtomicUnit> units) {
  std::string s;
  for (const auto& u : units) s += (s.empty() ? "" : " ") + std::to_string(u.original_index);
  return s;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << std::setprecision(17);
  return out;
}

// ---- commands ---------------------------------------------------------------

int cmd_gen_data(const RunConfig& c, const std::filesystem::path& out_path, const std::string& format,
                 std::ostream& out) {
  if (c.domain != DomainKind::Synthetic) throw ConfigError("gen-data produces synthetic data only");
  Rng rng = make_rng(c.seed, {kTagTrainData});
  const auto samples = gen_synthetic(c.per_class, c.noise, rng);
  if (format == "csv") {
    auto f = open_output(out_path);
    write_synthetic_csv(f, samples);
  } else {
    EmbeddedDataset d;
    d.dim = 1;
    d.num_categories = kSyntheticClasses;
    d.labels = synthetic_labels(synthetic_goal(c));
    d.sequences = to_sequences(samples, synthetic_goal(c));
    save_embedded(out_path, d);
  }
  out << "wrote " << samples.size() << " samples to " << out_path.string() << '\n';
  return kExitOk;
}

int cmd_train_classifier(const RunConfig& c, std::ostream& out) {
  if (c.classifier.empty()) throw ConfigError("train-classifier needs --classifier (output path)");
  const auto w = load_workspace(c);
  const auto clf = fit_classifier(c, w);
  save_classifier(c.classifier, clf, classifier_goal(c));
  out << std::fixed << std::setprecision(4) << "full-input accuracy: train "
      << full_input_accuracy(clf, *w.domain, w.train) << ", test " << full_input_accuracy(clf, *w.domain, w.test)
      << '\n'
      << std::defaultfloat << "wrote " << c.classifier.string() << '\n';
  return kExitOk;
}

int cmd_train(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto w = load_workspace(c);
  const auto clf = obtain_classifier(c, w, err);
  const auto budget = resolve_budget(c, w.train, w.domain->num_categories());

  PolicyConfig pc;
  pc.feature_dim = w.domain->feature_dim();
  pc.num_categories = w.domain->num_categories();
  pc.gru_hidden = c.gru_hidden;
  PolicyNet policy(pc, derive_seed(c.seed, {kTagInit}));

  TrainerConfig tc;
  tc.episodes = c.resolved_episodes();
  tc.plays = c.plays;
  tc.discount = c.discount;
  tc.learning_rate = c.learning_rate;
  tc.reward_scale = c.reward_scale;
  tc.random_baselines = c.random_baselines;
  tc.eval_every = c.eval_every;
  tc.workers = c.workers;
  tc.seed = c.seed;

  err << "training " << tc.episodes << " episodes, budget " << c.budget.str() << '\n';
  const auto result = train(policy, w.train, w.test, clf, *w.domain, budget, tc);

  auto metrics = open_output(c.metrics);
  write_metrics(metrics, result.log);
  save_policy(c.model, policy, domain_name(c.domain));

  out << std::fixed << std::setprecision(4);
  if (result.initial) out << "initial eval accuracy: " << result.initial->accuracy << '\n';
  if (result.final) {
    out << "final eval accuracy: " << result.final->accuracy << '\n'
        << "final mean probability: " << result.final->mean_probability << '\n';
  }
  out << std::defaultfloat << "wrote " << c.model.string() << " and " << c.metrics.string() << '\n';
  return kExitOk;
}

int cmd_eval(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto w = load_workspace(c);
  const auto clf = obtain_classifier(c, w, err);
  const auto policy = load_compatible_policy(c.model, w);
  const auto budget = resolve_budget(c, w.train, w.domain->num_categories());
  const Domain& d = *w.domain;

  const auto agent = evaluate(policy, w.test, clf, d, budget);
  Score first, random, oracle, upper;
  Rng rng = make_rng(c.seed, {kTagEvalRandom});
  for (const auto& s : w.test) {
    const auto b = budget.resolve(s.category, s.units.size());
    first.add(classify(clf, d, baseline_first(s.units, b)), s.label);
    random.add(classify(clf, d, baseline_random(s.units, b, rng)), s.label);
    oracle.add(classify(clf, d, oracle_best_subset(s.units, b, clf, d, s.label).selection), s.label);
    upper.add(classify(clf, d, s.units), s.label);
  }
  const std::vector<ReportRow> rows = {
      {"agent", agent.accuracy, agent.mean_probability},
      {"first-B", first.accuracy(), first.mean_probability()},
      {"random-B", random.accuracy(), random.mean_probability()},
      {"oracle", oracle.accuracy(), oracle.mean_probability()},
      {"upper-bound", upper.accuracy(), upper.mean_probability()},
  };
  out << w.test.size() << " test sequences, budget " << c.budget.str() << "\n\n";
  write_report_table(out, rows);
  if (!c.report.empty()) {
    auto f = open_output(c.report);
    write_report_csv(f, rows);
  }
  return kExitOk;
}

std::vector<Sequence> load_inputs(const RunConfig& c, const std::filesystem::path& input) {
  if (c.domain == DomainKind::Synthetic) return to_sequences(read_csv_file(input), synthetic_goal(c));
  return load_embedded(input).sequences;
}

int cmd_abstract(const RunConfig& c, const std::filesystem::path& input, const std::string& ordering,
                 std::ostream& out, std::ostream& err) {
  const auto w = load_workspace(c);
  const auto clf = obtain_classifier(c, w, err);
  const auto policy = load_compatible_policy(c.model, w);
  const auto inputs = load_inputs(c, input);
  const auto budget = resolve_budget(c, inputs, w.domain->num_categories());
  const Domain& d = *w.domain;
  const bool original = ordering == "original" ||
                        (ordering == "default" && d.default_ordering() == OrderingMode::Original);

  std::ostream* sink = &out;
  std::ofstream file;
  if (!c.report.empty()) {
    file = open_output(c.report);
    sink = &file;
  }
  *sink << "id,predicted,indices,confidence\n" << std::setprecision(17);
  Rng unused(0);
  for (const auto& s : inputs) {
    if (s.category >= d.num_categories()) throw InvalidInput("sequence '" + s.id + "' has an unknown category");
    const auto want = budget.for_category(s.category);
    if (want > s.units.size()) {
      err << "warning: budget " << want << " exceeds the " << s.units.size() << " units of '" << s.id
          << "'; using " << s.units.size() << '\n';
    }
    const auto play = run_play(policy, s, want, SelectMode::Eval, unused);
    std::string trace;
    std::vector<double> p;
    for (std::size_t t = 1; t <= play.chosen.size(); ++t) {
      p = classify(clf, d, std::span(play.chosen).first(t));
      std::ostringstream v;
      v << std::setprecision(17) << *std::max_element(p.begin(), p.end());
      trace += (trace.empty() ? "" : " ") + v.str();
    }
    auto chosen = play.chosen;
    if (original) {
      std::sort(chosen.begin(), chosen.end(),
                [](const AtomicUnit& a, const AtomicUnit& b) { return a.original_index < b.original_index; });
    }
    const auto predicted = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    *sink << s.id << ',' << w.labels[predicted] << ',' << join_indices(chosen) << ',' << trace << '\n';
  }
  return kExitOk;
}

int cmd_oracle(const RunConfig& c, std::size_t limit, std::ostream& out) {
  const auto w = load_workspace(c);
  std::ostringstream sink_err;
  const auto clf = obtain_classifier(c, w, sink_err);
  const auto budget = resolve_budget(c, w.train, w.domain->num_categories());
  const Domain& d = *w.domain;

  std::ostream* sink = &out;
  std::ofstream file;
  if (!c.report.empty()) {
    file = open_output(c.report);
    sink = &file;
  }
  *sink << "id,label,indices,probability,subsets\n" << std::setprecision(17);
  Score score;
  for (const auto& s : w.test) {
    const auto best = oracle_best_subset(s.units, budget.resolve(s.category, s.units.size()), clf, d, s.label, limit);
    score.add(classify(clf, d, best.selection), s.label);
    *sink << s.id << ',' << w.labels[s.label] << ',' << join_indices(best.selection) << ',' << best.performance
          << ',' << best.subsets_evaluated << '\n';
  }
  out << std::fixed << std::setprecision(4) << "oracle accuracy " << score.accuracy() << ", mean probability "
      << score.mean_probability() << '\n'
      << std::defaultfloat;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goal-driven sequence abstraction: train and apply a unit-selection agent."};
  app.name("seqabs");
  app.require_subcommand(1);
  app.set_version_flag("--version", "seqabs 0.1.0");

  std::function<int()> action;
  auto bind = [&](CLI::App* sub, std::function<int()> fn) { sub->callback([&action, fn] { action = fn; }); };

  Overrides gen_ov;
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic 3x3 glyph dataset");
  add_common(gen, gen_ov);
  std::string gen_out, gen_format = "csv";
  gen->add_option("-o,--out", gen_out, "Output file")->required();
  gen->add_option("--format", gen_format, "csv | embedded")->check(CLI::IsMember({"csv", "embedded"}));
  bind(gen, [&] { return cmd_gen_data(gen_ov.resolve(), gen_out, gen_format, out); });

  Overrides clf_ov;
  auto* clf = app.add_subcommand("train-classifier", "Train and save the goal classifier");
  add_common(clf, clf_ov);
  bind(clf, [&] { return cmd_train_classifier(clf_ov.resolve(), out); });

  Overrides train_ov;
  auto* tr = app.add_subcommand("train", "Train an abstraction agent");
  add_common(tr, train_ov);
  add_training(tr, train_ov);
  train_ov.add_path(tr, "-m,--model", &RunConfig::model, "Model output file");
  bind(tr, [&] { return cmd_train(train_ov.resolve(), out, err); });

  Overrides eval_ov;
  auto* ev = app.add_subcommand("eval", "Compare the agent with first-B, random-B, oracle and upper bound");
  add_common(ev, eval_ov);
  eval_ov.add_path(ev, "-m,--model", &RunConfig::model, "Agent model file");
  eval_ov.add_path(ev, "-r,--report", &RunConfig::report, "Report CSV output");
  bind(ev, [&] { return cmd_eval(eval_ov.resolve(), out, err); });

  Overrides abs_ov;
  auto* ab = app.add_subcommand("abstract", "Abstract each sequence of an input file");
  add_common(ab, abs_ov);
  abs_ov.add_path(ab, "-m,--model", &RunConfig::model, "Agent model file");
  abs_ov.add_path(ab, "-o,--out", &RunConfig::report, "Output CSV (default stdout)");
  std::string abs_input, abs_ordering = "default";
  ab->add_option("-i,--input", abs_input, "Input file in the domain's data format")->required();
  ab->add_option("--ordering", abs_ordering, "picked | original | default")
      ->check(CLI::IsMember({"picked", "original", "default"}));
  bind(ab, [&] { return cmd_abstract(abs_ov.resolve(), abs_input, abs_ordering, out, err); });

  Overrides or_ov;
  auto* orc = app.add_subcommand("oracle", "Exhaustive best-subset search on the test set");
  add_common(orc, or_ov);
  or_ov.add_path(orc, "-o,--out", &RunConfig::report, "Output CSV (default stdout)");
  std::size_t limit = kOracleSubsetLimit;
  orc->add_option("--limit", limit, "Maximum subsets per sequence");
  bind(orc, [&] { return cmd_oracle(or_ov.resolve(), limit, out); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    return action();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "error: training diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace seqabs::cli
