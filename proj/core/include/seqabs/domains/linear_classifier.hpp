#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqabs/env/episode.hpp"
#include "seqabs/numeric/dense_array.hpp"
#include "seqabs/numeric/random.hpp"
#include "seqabs/reward/goal.hpp"

namespace seqabs {

/// Softmax regression: p = softmax(x W + b).
class LinearGoalClassifier final : public GoalClassifier {
 public:
  /// weights [input_dim x num_labels], bias [num_labels].
  LinearGoalClassifier(DenseArray weights, DenseArray bias);

  std::size_t input_dim() const override { return weights_.rows(); }
  std::size_t num_labels() const override { return weights_.cols(); }
  std::vector<double> predict(std::span<const double> rendered) const override;

  const DenseArray& weights() const noexcept { return weights_; }
  const DenseArray& bias() const noexcept { return bias_; }

 private:
  DenseArray weights_;
  DenseArray bias_;
};

struct ClassifierTrainingOptions {
  std::size_t epochs = 200;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  /// Random partial renderings per sample per epoch, subset size uniform in
  /// [1, n]. Keeps the probabilities meaningful on partial selections.
  std::size_t partial_views = 4;
};

/// Full-batch gradient descent on cross-entropy over full renderings plus
/// random partial renderings. Throws InvalidInput when fewer than two
/// distinct labels are present.
LinearGoalClassifier train_linear_classifier(const Domain& domain, std::span<const Sequence> data,
                                             std::size_t num_labels, const ClassifierTrainingOptions& options,
                                             Rng& rng);

/// Accuracy on full (un-abstracted) renderings: the upper bound of any
/// selection method.
double full_input_accuracy(const GoalClassifier& clf, const Domain& domain, std::span<const Sequence> data);

}  // namespace seqabs
