#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace seqabs {

inline constexpr int kTimestampBuckets = 10;

/// One selectable element of an input sequence.
struct AtomicUnit {
  std::vector<double> features;
  std::size_t original_index = 1;  // 1-based position in the input
  int timestamp = 1;               // relative-position bucket in [1, 10]

  friend bool operator==(const AtomicUnit&, const AtomicUnit&) = default;
};

/// ceil(10 i / n) clamped to [1, 10]. Requires 1 <= i <= n.
int timestamp_bucket(std::size_t i, std::size_t n);

/// Builds AUs in input order, assigning 1-based indices and timestamp buckets.
/// Throws InvalidInput for an empty input, ragged feature rows or non-finite
/// features.
std::vector<AtomicUnit> make_units(const std::vector<std::vector<double>>& features);

/// A labelled input sequence.
struct Sequence {
  std::string id;
  std::vector<AtomicUnit> units;
  std::size_t category = 0;  // conditioning id fed to the policy
  std::size_t label = 0;     // ground-truth goal label
};

enum class OrderingMode {
  Picked,    // emit AUs in the order the agent picked them
  Original,  // emit AUs sorted by their position in the input
};

/// Candidate pool plus chosen list. The pool starts with every AU of the
/// input, the chosen list starts empty. An episode runs min(budget, n) steps.
class EpisodeState {
 public:
  EpisodeState(std::vector<AtomicUnit> units, std::size_t budget, OrderingMode ordering);

  const std::vector<AtomicUnit>& candidates() const noexcept { return candidates_; }
  const std::vector<AtomicUnit>& chosen() const noexcept { return chosen_; }
  std::size_t budget() const noexcept { return budget_; }
  OrderingMode ordering() const noexcept { return ordering_; }
  std::size_t total_units() const noexcept { return candidates_.size() + chosen_.size(); }

  /// Moves candidate `a` to the end of the chosen list. The remaining pool
  /// keeps its relative order, so indices after `a` shift down by one.
  /// Throws InvalidInput for a bad index, UsageError once the episode is done.
  void apply_action(std::size_t a);

  /// True once |chosen| == budget or the pool is exhausted.
  bool is_done() const noexcept;

  /// Chosen AUs in the configured order. Throws UsageError before is_done().
  std::vector<AtomicUnit> final_output() const;

 private:
  std::vector<AtomicUnit> candidates_;
  std::vector<AtomicUnit> chosen_;
  std::size_t budget_;
  OrderingMode ordering_;
};

/// Functional form: returns the successor state.
EpisodeState apply_action(EpisodeState state, std::size_t a);

/// Output length per category. A fixed budget applies to every category;
/// percent budgets resolve to one value per category.
class Budget {
 public:
  static Budget fixed(std::size_t b);
  static Budget per_category(std::vector<std::size_t> budgets);

  /// round(percent / 100 * average AU count of the category), at least 1.
  /// `sequences` provides the per-category AU counts.
  static Budget percent_of_average(double percent, std::span<const Sequence> sequences,
                                   std::size_t num_categories);

  /// Budget for a category, clamped to `units` when the input is shorter.
  std::size_t resolve(std::size_t category, std::size_t units) const;
  std::size_t for_category(std::size_t category) const;
  bool is_fixed() const noexcept { return per_category_.empty(); }

 private:
  std::size_t fixed_ = 1;
  std::vector<std::size_t> per_category_;
};

}  // namespace seqabs
