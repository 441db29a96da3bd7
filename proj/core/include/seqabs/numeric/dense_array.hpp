#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace seqabs {

/// Row-major array of doubles with an explicit shape.
///
/// Rank 1 arrays are vectors, rank 2 arrays are matrices indexed (row, col).
/// Every dimension is positive and product(shape) == size().
class DenseArray {
 public:
  DenseArray() = default;

  /// Zero-filled array of the given shape.
  explicit DenseArray(std::vector<std::size_t> shape);

  /// Throws InvalidInput when the value count does not match the shape or a
  /// value is not finite.
  DenseArray(std::vector<std::size_t> shape, std::vector<double> values);

  static DenseArray vector(std::vector<double> values);
  static DenseArray zeros(std::vector<std::size_t> shape) { return DenseArray(std::move(shape)); }

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  /// Leading dimension; for a vector this is its length.
  std::size_t rows() const noexcept { return shape_.empty() ? 0 : shape_[0]; }
  /// Trailing dimension of a matrix, 1 for vectors.
  std::size_t cols() const noexcept { return shape_.size() < 2 ? 1 : shape_[1]; }

  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double& at(std::size_t r, std::size_t c) noexcept { return values_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const noexcept { return values_[r * cols() + c]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const DenseArray& other) const noexcept { return shape_ == other.shape_; }
  bool all_finite() const noexcept;
  void fill(double v) noexcept;

  friend bool operator==(const DenseArray&, const DenseArray&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
};

}  // namespace seqabs
