#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "seqabs/env/episode.hpp"
#include "seqabs/numeric/random.hpp"
#include "seqabs/reward/goal.hpp"

namespace seqabs {

/// 3x3 images read in raster order, one pixel per atomic unit.
inline constexpr std::size_t kSyntheticPixels = 9;
inline constexpr std::size_t kSyntheticClasses = 3;
inline constexpr double kDefaultSyntheticNoise = 0.25;

enum class SyntheticGlyph : std::size_t { Cross = 0, Plus = 1, Ring = 2 };

/// Noise-free class image: 1 where the glyph is drawn, 0 elsewhere.
std::array<double, kSyntheticPixels> synthetic_prototype(SyntheticGlyph glyph);
std::string synthetic_class_name(std::size_t label);

/// Which label a synthetic sample is scored against.
enum class SyntheticGoal {
  Category,   // cross / plus / ring
  Attribute,  // centre pixel drawn (cross, plus) or not (ring)
};

inline constexpr std::size_t kAttributeNoCenter = 0;
inline constexpr std::size_t kAttributeCenter = 1;

struct SyntheticSample {
  std::array<double, kSyntheticPixels> pixels{};
  std::size_t label = 0;      // class index
  std::size_t attribute = 0;  // kAttributeCenter / kAttributeNoCenter
};

/// `per_class` samples of each class: prototype plus i.i.d. N(0, sigma^2)
/// noise per pixel, clamped to [0, 1]. Classes are interleaved.
std::vector<SyntheticSample> gen_synthetic(std::size_t per_class, double sigma, Rng& rng);

std::size_t synthetic_num_labels(SyntheticGoal goal) noexcept;

/// One AU per pixel with feature vector [pixel value]. The category is the
/// class; the label depends on the goal.
Sequence to_sequence(const SyntheticSample& sample, SyntheticGoal goal, std::string id = {});
std::vector<Sequence> to_sequences(std::span<const SyntheticSample> samples, SyntheticGoal goal);

/// Renders the selected pixels at their raster positions over a zero
/// background.
class SyntheticDomain final : public Domain {
 public:
  std::string name() const override { return "synthetic"; }
  std::size_t feature_dim() const override { return 1; }
  std::size_t num_categories() const override { return kSyntheticClasses; }
  std::size_t render_dim() const override { return kSyntheticPixels; }
  OrderingMode default_ordering() const override { return OrderingMode::Picked; }
  DenseArray render(std::span<const AtomicUnit> selection) const override;
};

/// CSV with header "id,label,attribute,p1,...,p9"; values printed with
/// round-trip precision.
void write_synthetic_csv(std::ostream& out, std::span<const SyntheticSample> samples);
/// Throws FormatError on malformed rows.
std::vector<SyntheticSample> read_synthetic_csv(std::istream& in);

}  // namespace seqabs
