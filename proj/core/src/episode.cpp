#include "seqabs/env/episode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqabs/error.hpp"

namespace seqabs {

int timestamp_bucket(std::size_t i, std::size_t n) {
  if (n == 0 || i < 1 || i > n) {
    throw InvalidInput("timestamp_bucket: position " + std::to_string(i) + " outside [1, " +
                       std::to_string(n) + "]");
  }
  const auto bucket = static_cast<int>((kTimestampBuckets * i + n - 1) / n);
  return std::clamp(bucket, 1, kTimestampBuckets);
}

std::vector<AtomicUnit> make_units(const std::vector<std::vector<double>>& features) {
  if (features.empty()) throw InvalidInput("make_units: input has no atomic units");
  const auto dim = features.front().size();
  const auto n = features.size();
  std::vector<AtomicUnit> units;
  units.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (features[i].size() != dim) {
      throw InvalidInput("make_units: unit " + std::to_string(i + 1) + " has feature length " +
                         std::to_string(features[i].size()) + ", expected " + std::to_string(dim));
    }
    for (double v : features[i]) {
      if (!std::isfinite(v)) throw InvalidInput("make_units: non-finite feature");
    }
    units.push_back(AtomicUnit{features[i], i + 1, timestamp_bucket(i + 1, n)});
  }
  return units;
}

EpisodeState::EpisodeState(std::vector<AtomicUnit> units, std::size_t budget, OrderingMode ordering)
    : candidates_(std::move(units)), budget_(budget), ordering_(ordering) {
  if (budget_ == 0) throw InvalidInput("episode budget must be positive");
  if (candidates_.empty()) throw InvalidInput("episode needs at least one atomic unit");
  chosen_.reserve(std::min(budget_, candidates_.size()));
}

bool EpisodeState::is_done() const noexcept {
  return chosen_.size() >= budget_ || candidates_.empty();
}

void EpisodeState::apply_action(std::size_t a) {
  if (is_done()) throw UsageError("apply_action: episode already complete");
  if (a >= candidates_.size()) {
    throw InvalidInput("apply_action: index " + std::to_string(a) + " outside pool of " +
                       std::to_string(candidates_.size()));
  }
  chosen_.push_back(std::move(candidates_[a]));
  candidates_.erase(candidates_.begin() + static_cast<std::ptrdiff_t>(a));
}

std::vector<AtomicUnit> EpisodeState::final_output() const {
  if (!is_done()) throw UsageError("final_output: episode not done");
  auto out = chosen_;
  if (ordering_ == OrderingMode::Original) {
    std::sort(out.begin(), out.end(), [](const AtomicUnit& x, const AtomicUnit& y) {
      return x.original_index < y.original_index;
    });
  }
  return out;
}

EpisodeState apply_action(EpisodeState state, std::size_t a) {
  state.apply_action(a);
  return state;
}

Budget Budget::fixed(std::size_t b) {
  if (b == 0) throw InvalidInput("budget must be positive");
  Budget out;
  out.fixed_ = b;
  return out;
}

Budget Budget::per_category(std::vector<std::size_t> budgets) {
  if (budgets.empty()) throw InvalidInput("per-category budget needs at least one category");
  for (auto b : budgets) {
    if (b == 0) throw InvalidInput("budget must be positive");
  }
  Budget out;
  out.per_category_ = std::move(budgets);
  return out;
}

Budget Budget::percent_of_average(double percent, std::span<const Sequence> sequences,
                                  std::size_t num_categories) {
  if (!(percent > 0.0) || percent > 100.0) throw InvalidInput("budget percent must be in (0, 100]");
  if (num_categories == 0) throw InvalidInput("percent budget needs at least one category");
  std::vector<double> total(num_categories, 0.0);
  std::vector<std::size_t> count(num_categories, 0);
  for (const auto& s : sequences) {
    if (s.category >= num_categories) throw InvalidInput("sequence category out of range");
    total[s.category] += static_cast<double>(s.units.size());
    ++count[s.category];
  }
  std::vector<std::size_t> budgets(num_categories, 1);
  for (std::size_t c = 0; c < num_categories; ++c) {
    if (count[c] == 0) continue;
    const double avg = total[c] / static_cast<double>(count[c]);
    budgets[c] = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(percent / 100.0 * avg)));
  }
  return per_category(std::move(budgets));
}

std::size_t Budget::for_category(std::size_t category) const {
  if (per_category_.empty()) return fixed_;
  if (category >= per_category_.size()) throw InvalidInput("budget: category out of range");
  return per_category_[category];
}

std::size_t Budget::resolve(std::size_t category, std::size_t units) const {
  return std::min(for_category(category), units);
}

}  // namespace seqabs
