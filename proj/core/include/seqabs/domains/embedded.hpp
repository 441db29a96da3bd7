#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seqabs/env/episode.hpp"
#include "seqabs/reward/goal.hpp"

namespace seqabs {

inline constexpr int kEmbeddedFormatVersion = 1;

/// Sequences whose AUs were embedded offline into fixed-length vectors.
struct EmbeddedDataset {
  std::size_t dim = 0;
  std::size_t num_categories = 0;
  std::vector<std::string> labels;  // goal label names; Sequence::label indexes this
  std::vector<Sequence> sequences;
};

/// Line-oriented text format:
///
///   seqabs-embedded 1
///   dim <D>
///   categories <C>
///   labels <name> <name> ...
///   record <id> <category> <label-name>
///   <D reals>            one line per AU, in input order
///   ...
///
/// Blank lines and lines starting with '#' are ignored.
EmbeddedDataset parse_embedded(std::istream& in);
EmbeddedDataset load_embedded(const std::filesystem::path& path);

void write_embedded(std::ostream& out, const EmbeddedDataset& data);
void save_embedded(const std::filesystem::path& path, const EmbeddedDataset& data);

/// Renders a selection as the mean of its feature vectors (zeros when empty).
class EmbeddedDomain final : public Domain {
 public:
  EmbeddedDomain(std::size_t dim, std::size_t num_categories);

  std::string name() const override { return "embedded"; }
  std::size_t feature_dim() const override { return dim_; }
  std::size_t num_categories() const override { return num_categories_; }
  std::size_t render_dim() const override { return dim_; }
  OrderingMode default_ordering() const override { return OrderingMode::Original; }
  DenseArray render(std::span<const AtomicUnit> selection) const override;

 private:
  std::size_t dim_;
  std::size_t num_categories_;
};

}  // namespace seqabs
