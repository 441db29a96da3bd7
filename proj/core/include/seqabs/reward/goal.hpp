#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seqabs/env/episode.hpp"
#include "seqabs/numeric/dense_array.hpp"

namespace seqabs {

/// Frozen recogniser of the information an abstraction must preserve.
/// Implementations are deterministic and safe for concurrent predict() calls.
class GoalClassifier {
 public:
  virtual ~GoalClassifier() = default;

  virtual std::size_t input_dim() const = 0;
  virtual std::size_t num_labels() const = 0;
  /// Probability distribution over goal labels for a rendered selection.
  virtual std::vector<double> predict(std::span<const double> rendered) const = 0;
};

/// How an input family turns a (partial) AU selection into classifier input.
class Domain {
 public:
  virtual ~Domain() = default;

  virtual std::string name() const = 0;
  virtual std::size_t feature_dim() const = 0;
  virtual std::size_t num_categories() const = 0;
  virtual std::size_t render_dim() const = 0;
  virtual OrderingMode default_ordering() const = 0;
  /// Rendering must not depend on the order of `selection`.
  virtual DenseArray render(std::span<const AtomicUnit> selection) const = 0;
};

}  // namespace seqabs
