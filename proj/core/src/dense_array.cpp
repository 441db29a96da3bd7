#include "seqabs/numeric/dense_array.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "seqabs/error.hpp"

namespace seqabs {

namespace {

std::size_t checked_product(const std::vector<std::size_t>& shape) {
  if (shape.empty()) throw InvalidInput("DenseArray: shape must have at least one dimension");
  for (auto d : shape) {
    if (d == 0) throw InvalidInput("DenseArray: dimensions must be positive");
  }
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

DenseArray::DenseArray(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), values_(checked_product(shape_), 0.0) {}

DenseArray::DenseArray(std::vector<std::size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  const auto n = checked_product(shape_);
  if (n != values_.size()) {
    throw InvalidInput("DenseArray: shape holds " + std::to_string(n) + " values, got " +
                       std::to_string(values_.size()));
  }
  if (!all_finite()) throw InvalidInput("DenseArray: values must be finite");
}

DenseArray DenseArray::vector(std::vector<double> values) {
  const auto n = values.size();
  return DenseArray({n}, std::move(values));
}

bool DenseArray::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void DenseArray::fill(double v) noexcept { std::fill(values_.begin(), values_.end(), v); }

}  // namespace seqabs
