#include "seqabs/numeric/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqabs/error.hpp"

namespace seqabs {

namespace {

void require_shape(const DenseArray& a, std::size_t rows, std::size_t cols, const char* name) {
  if (a.rank() != 2 || a.rows() != rows || a.cols() != cols) {
    throw InvalidInput(std::string("GRU parameter ") + name + " has inconsistent shape");
  }
}

void require_vector(const DenseArray& a, std::size_t n, const char* name) {
  if (a.rank() != 1 || a.size() != n) {
    throw InvalidInput(std::string("GRU parameter ") + name + " has inconsistent shape");
  }
}

// acc[j] += sum_i x[i] * m(i, j)
void accumulate_product(std::span<const double> x, const DenseArray& m, std::span<double> acc) {
  const std::size_t cols = m.cols();
  const auto vals = m.values();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = vals.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) acc[j] += xi * row[j];
  }
}

}  // namespace

DenseArray fc_forward(std::span<const double> x, const DenseArray& weights, const DenseArray& bias) {
  if (weights.rank() != 2 || weights.rows() != x.size()) {
    throw InvalidInput("fc_forward: input length " + std::to_string(x.size()) +
                       " does not match weight rows");
  }
  if (bias.rank() != 1 || bias.size() != weights.cols()) {
    throw InvalidInput("fc_forward: bias length does not match weight columns");
  }
  DenseArray y = bias;
  accumulate_product(x, weights, y.values());
  return y;
}

double sigmoid(double x) noexcept {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

GruParams GruParams::zeros(std::size_t d, std::size_t h) {
  GruParams p;
  p.w_update = DenseArray::zeros({d, h});
  p.w_reset = DenseArray::zeros({d, h});
  p.w_cand = DenseArray::zeros({d, h});
  p.u_update = DenseArray::zeros({h, h});
  p.u_reset = DenseArray::zeros({h, h});
  p.u_cand = DenseArray::zeros({h, h});
  p.b_update = DenseArray::zeros({h});
  p.b_reset = DenseArray::zeros({h});
  p.b_cand = DenseArray::zeros({h});
  return p;
}

void GruParams::validate() const {
  if (w_update.rank() != 2) throw InvalidInput("GRU parameter w_update must be a matrix");
  const auto d = input_dim();
  const auto h = hidden_dim();
  require_shape(w_reset, d, h, "w_reset");
  require_shape(w_cand, d, h, "w_cand");
  require_shape(u_update, h, h, "u_update");
  require_shape(u_reset, h, h, "u_reset");
  require_shape(u_cand, h, h, "u_cand");
  require_vector(b_update, h, "b_update");
  require_vector(b_reset, h, "b_reset");
  require_vector(b_cand, h, "b_cand");
}

DenseArray gru_step(std::span<const double> x, std::span<const double> h_prev, const GruParams& p) {
  p.validate();
  const auto h = p.hidden_dim();
  if (x.size() != p.input_dim()) throw InvalidInput("gru_step: input length mismatch");
  if (h_prev.size() != h) throw InvalidInput("gru_step: hidden state length mismatch");

  DenseArray z = p.b_update;
  accumulate_product(x, p.w_update, z.values());
  accumulate_product(h_prev, p.u_update, z.values());

  DenseArray r = p.b_reset;
  accumulate_product(x, p.w_reset, r.values());
  accumulate_product(h_prev, p.u_reset, r.values());

  std::vector<double> gated(h);
  for (std::size_t j = 0; j < h; ++j) {
    z[j] = sigmoid(z[j]);
    gated[j] = sigmoid(r[j]) * h_prev[j];
  }

  DenseArray c = p.b_cand;
  accumulate_product(x, p.w_cand, c.values());
  accumulate_product(gated, p.u_cand, c.values());

  DenseArray out({h});
  for (std::size_t j = 0; j < h; ++j) {
    out[j] = (1.0 - z[j]) * h_prev[j] + z[j] * std::tanh(c[j]);
  }
  if (!out.all_finite()) throw NumericError("gru_step: non-finite hidden state");
  return out;
}

std::vector<double> log_softmax(std::span<const double> logits) {
  if (logits.empty()) throw InvalidInput("softmax: empty candidate pool");
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - m);
  const double lse = m + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw InvalidInput("softmax: empty candidate pool");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

}  // namespace seqabs
