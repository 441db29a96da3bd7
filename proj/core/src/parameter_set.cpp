#include "seqabs/numeric/parameter_set.hpp"

#include <algorithm>

#include "seqabs/error.hpp"

namespace seqabs {

std::size_t ParameterSet::add(std::string name, DenseArray value) {
  if (std::find(names_.begin(), names_.end(), name) != names_.end()) {
    throw InvalidInput("duplicate parameter name '" + name + "'");
  }
  names_.push_back(std::move(name));
  arrays_.push_back(std::move(value));
  return arrays_.size() - 1;
}

std::size_t ParameterSet::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InvalidInput("unknown parameter '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

ParameterSet ParameterSet::zeros_like() const {
  ParameterSet out;
  out.names_ = names_;
  out.arrays_.reserve(arrays_.size());
  for (const auto& a : arrays_) out.arrays_.push_back(DenseArray::zeros(a.shape()));
  return out;
}

bool ParameterSet::same_layout(const ParameterSet& other) const noexcept {
  if (names_ != other.names_) return false;
  for (std::size_t i = 0; i < arrays_.size(); ++i) {
    if (!arrays_[i].same_shape(other.arrays_[i])) return false;
  }
  return true;
}

std::size_t ParameterSet::scalar_count() const noexcept {
  std::size_t n = 0;
  for (const auto& a : arrays_) n += a.size();
  return n;
}

bool ParameterSet::all_finite() const noexcept {
  return std::all_of(arrays_.begin(), arrays_.end(), [](const DenseArray& a) { return a.all_finite(); });
}

void ParameterSet::add_scaled(const ParameterSet& other, double alpha) {
  if (!same_layout(other)) throw InvalidInput("parameter sets have different layouts");
  for (std::size_t i = 0; i < arrays_.size(); ++i) {
    auto dst = arrays_[i].values();
    const auto src = other.arrays_[i].values();
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += alpha * src[j];
  }
}

void ParameterSet::scale(double alpha) noexcept {
  for (auto& a : arrays_) {
    for (double& v : a.values()) v *= alpha;
  }
}

void ascent_step(ParameterSet& params, const ParameterSet& grads, double learning_rate) {
  params.add_scaled(grads, learning_rate);
}

}  // namespace seqabs
