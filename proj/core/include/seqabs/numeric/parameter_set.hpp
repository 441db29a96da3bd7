#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "seqabs/numeric/dense_array.hpp"

namespace seqabs {

/// Ordered collection of named arrays. Holds trainable weights, and with the
/// same layout, their gradients.
class ParameterSet {
 public:
  /// Appends an array and returns its index. Names must be unique.
  std::size_t add(std::string name, DenseArray value);

  std::size_t size() const noexcept { return arrays_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  /// Throws InvalidInput for unknown names.
  std::size_t index_of(std::string_view name) const;

  DenseArray& operator[](std::size_t i) noexcept { return arrays_[i]; }
  const DenseArray& operator[](std::size_t i) const noexcept { return arrays_[i]; }
  DenseArray& operator[](std::string_view name) { return arrays_[index_of(name)]; }
  const DenseArray& operator[](std::string_view name) const { return arrays_[index_of(name)]; }

  /// Same names and shapes, all values zero.
  ParameterSet zeros_like() const;
  bool same_layout(const ParameterSet& other) const noexcept;
  std::size_t scalar_count() const noexcept;
  bool all_finite() const noexcept;

  /// this += alpha * other. Throws InvalidInput on layout mismatch.
  void add_scaled(const ParameterSet& other, double alpha);
  void scale(double alpha) noexcept;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<DenseArray> arrays_;
};

inline constexpr double kDefaultLearningRate = 1e-4;

/// theta <- theta + learning_rate * grads.
void ascent_step(ParameterSet& params, const ParameterSet& grads, double learning_rate);

}  // namespace seqabs
