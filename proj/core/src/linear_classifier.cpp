#include "seqabs/domains/linear_classifier.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "seqabs/error.hpp"
#include "seqabs/numeric/layers.hpp"

namespace seqabs {

LinearGoalClassifier::LinearGoalClassifier(DenseArray weights, DenseArray bias)
    : weights_(std::move(weights)), bias_(std::move(bias)) {
  if (weights_.rank() != 2) throw InvalidInput("classifier weights must be a matrix");
  if (bias_.rank() != 1 || bias_.size() != weights_.cols()) {
    throw InvalidInput("classifier bias length must equal the number of labels");
  }
  if (weights_.cols() < 2) throw InvalidInput("classifier needs at least two labels");
}

std::vector<double> LinearGoalClassifier::predict(std::span<const double> rendered) const {
  return softmax(fc_forward(rendered, weights_, bias_).values());
}

LinearGoalClassifier train_linear_classifier(const Domain& domain, std::span<const Sequence> data,
                                             std::size_t num_labels, const ClassifierTrainingOptions& options,
                                             Rng& rng) {
  if (data.empty()) throw InvalidInput("train_linear_classifier: empty dataset");
  std::set<std::size_t> seen;
  for (const auto& s : data) {
    if (s.label >= num_labels) throw InvalidInput("train_linear_classifier: label out of range");
    seen.insert(s.label);
  }
  if (seen.size() < 2) throw InvalidInput("train_linear_classifier: dataset has a single class");

  const auto dim = domain.render_dim();
  DenseArray w({dim, num_labels});
  DenseArray b({num_labels});

  std::vector<DenseArray> full;
  full.reserve(data.size());
  for (const auto& s : data) full.push_back(domain.render(s.units));

  std::vector<const DenseArray*> inputs;
  std::vector<std::size_t> labels;
  std::vector<DenseArray> partial;
  std::vector<AtomicUnit> subset;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    partial.clear();
    inputs.clear();
    labels.clear();
    for (std::size_t i = 0; i < data.size(); ++i) {
      inputs.push_back(&full[i]);
      labels.push_back(data[i].label);
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& units = data[i].units;
      std::vector<std::size_t> order(units.size());
      for (std::size_t v = 0; v < options.partial_views; ++v) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        const auto k = 1 + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(units.size()));
        subset.clear();
        for (std::size_t j = 0; j < std::min(k, units.size()); ++j) subset.push_back(units[order[j]]);
        partial.push_back(domain.render(subset));
        labels.push_back(data[i].label);
      }
    }
    for (const auto& p : partial) inputs.push_back(&p);

    DenseArray gw({dim, num_labels});
    DenseArray gb({num_labels});
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const auto& x = *inputs[i];
      auto p = softmax(fc_forward(x.values(), w, b).values());
      p[labels[i]] -= 1.0;
      for (std::size_t c = 0; c < num_labels; ++c) {
        gb[c] += p[c];
        for (std::size_t d = 0; d < dim; ++d) gw.at(d, c) += x[d] * p[c];
      }
    }
    const double inv = 1.0 / static_cast<double>(inputs.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= options.learning_rate * (gw[j] * inv + options.l2 * w[j]);
    for (std::size_t c = 0; c < num_labels; ++c) b[c] -= options.learning_rate * gb[c] * inv;
  }
  if (!w.all_finite() || !b.all_finite()) throw NumericError("classifier training diverged");
  return LinearGoalClassifier(std::move(w), std::move(b));
}

double full_input_accuracy(const GoalClassifier& clf, const Domain& domain, std::span<const Sequence> data) {
  if (data.empty()) throw InvalidInput("full_input_accuracy: empty dataset");
  std::size_t correct = 0;
  for (const auto& s : data) {
    const auto p = clf.predict(domain.render(s.units).values());
    const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    if (best == s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace seqabs
