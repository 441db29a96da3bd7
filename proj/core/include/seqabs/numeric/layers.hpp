#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqabs/numeric/dense_array.hpp"

namespace seqabs {

/// y = x W + b for x[D], W[D x M], b[M].
DenseArray fc_forward(std::span<const double> x, const DenseArray& weights, const DenseArray& bias);

/// Weights of a single GRU layer. Input-to-hidden matrices are [D x H],
/// hidden-to-hidden matrices are [H x H], biases are [H].
struct GruParams {
  DenseArray w_update, u_update, b_update;
  DenseArray w_reset, u_reset, b_reset;
  DenseArray w_cand, u_cand, b_cand;

  std::size_t input_dim() const noexcept { return w_update.rows(); }
  std::size_t hidden_dim() const noexcept { return w_update.cols(); }

  /// All-zero parameters of the given dimensions.
  static GruParams zeros(std::size_t input_dim, std::size_t hidden_dim);

  /// Throws InvalidInput when any shape disagrees with (input_dim, hidden_dim).
  void validate() const;
};

/// One GRU update:
///   z = sigmoid(x Wz + h Uz + bz)
///   r = sigmoid(x Wr + h Ur + br)
///   c = tanh(x Wc + (r * h) Uc + bc)
///   h' = (1 - z) * h + z * c
DenseArray gru_step(std::span<const double> x, std::span<const double> h_prev, const GruParams& p);

/// Max-subtracted softmax. Throws InvalidInput on an empty input.
std::vector<double> softmax(std::span<const double> logits);

/// log(softmax(logits)), computed without forming the probabilities.
std::vector<double> log_softmax(std::span<const double> logits);

double sigmoid(double x) noexcept;

}  // namespace seqabs
