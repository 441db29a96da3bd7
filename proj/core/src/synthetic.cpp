#include "seqabs/domains/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "seqabs/error.hpp"

namespace seqabs {

namespace {

// Raster positions are 1-based in the comments below.
constexpr std::array<std::array<double, kSyntheticPixels>, kSyntheticClasses> kPrototypes{{
    {1, 0, 1, 0, 1, 0, 1, 0, 1},  // cross: 1 3 5 7 9
    {0, 1, 0, 1, 1, 1, 0, 1, 0},  // plus:  2 4 5 6 8
    {1, 1, 1, 1, 0, 1, 1, 1, 1},  // ring:  all but 5
}};

constexpr const char* kClassNames[kSyntheticClasses] = {"cross", "plus", "ring"};

double parse_double(const std::string& field, std::size_t line) {
  double v = 0.0;
  std::istringstream is(field);
  if (!(is >> v) || !is.eof() || !std::isfinite(v)) {
    throw FormatError(FormatError::Kind::Malformed, line, "not a finite number: '" + field + "'");
  }
  return v;
}

std::size_t parse_index(const std::string& field, std::size_t line, std::size_t limit) {
  std::size_t v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(FormatError::Kind::Malformed, line, "not an integer: '" + field + "'");
  }
  if (v >= limit) throw FormatError(FormatError::Kind::UnknownLabel, line, "label out of range: " + field);
  return v;
}

}  // namespace

std::array<double, kSyntheticPixels> synthetic_prototype(SyntheticGlyph glyph) {
  return kPrototypes.at(static_cast<std::size_t>(glyph));
}

std::string synthetic_class_name(std::size_t label) { return kClassNames[label % kSyntheticClasses]; }

std::vector<SyntheticSample> gen_synthetic(std::size_t per_class, double sigma, Rng& rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidInput("gen_synthetic: sigma must be >= 0");
  std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
  std::vector<SyntheticSample> out;
  out.reserve(per_class * kSyntheticClasses);
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t c = 0; c < kSyntheticClasses; ++c) {
      SyntheticSample s;
      s.label = c;
      s.attribute = kPrototypes[c][4] > 0.5 ? kAttributeCenter : kAttributeNoCenter;
      for (std::size_t p = 0; p < kSyntheticPixels; ++p) {
        const double jitter = sigma > 0.0 ? noise(rng) : 0.0;
        s.pixels[p] = std::clamp(kPrototypes[c][p] + jitter, 0.0, 1.0);
      }
      out.push_back(s);
    }
  }
  return out;
}

std::size_t synthetic_num_labels(SyntheticGoal goal) noexcept {
  return goal == SyntheticGoal::Category ? kSyntheticClasses : 2;
}

Sequence to_sequence(const SyntheticSample& sample, SyntheticGoal goal, std::string id) {
  std::vector<std::vector<double>> features;
  features.reserve(kSyntheticPixels);
  for (double p : sample.pixels) features.push_back({p});
  Sequence s;
  s.id = std::move(id);
  s.units = make_units(features);
  s.category = sample.label;
  s.label = goal == SyntheticGoal::Category ? sample.label : sample.attribute;
  return s;
}

std::vector<Sequence> to_sequences(std::span<const SyntheticSample> samples, SyntheticGoal goal) {
  std::vector<Sequence> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.push_back(to_sequence(samples[i], goal, "s" + std::to_string(i)));
  }
  return out;
}

DenseArray SyntheticDomain::render(std::span<const AtomicUnit> selection) const {
  DenseArray image({kSyntheticPixels});
  for (const auto& au : selection) {
    if (au.original_index < 1 || au.original_index > kSyntheticPixels || au.features.size() != 1) {
      throw InvalidInput("synthetic render: unit is not a pixel of a 3x3 image");
    }
    image[au.original_index - 1] = au.features[0];
  }
  return image;
}

void write_synthetic_csv(std::ostream& out, std::span<const SyntheticSample> samples) {
  const auto old_precision = out.precision(17);
  out << "id,label,attribute";
  for (std::size_t p = 1; p <= kSyntheticPixels; ++p) out << ",p" << p;
  out << '\n';
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << 's' << i << ',' << samples[i].label << ',' << samples[i].attribute;
    for (double v : samples[i].pixels) out << ',' << v;
    out << '\n';
  }
  out.precision(old_precision);
}

std::vector<SyntheticSample> read_synthetic_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw FormatError(FormatError::Kind::EmptyDataset, 0, "empty synthetic dataset");
  ++line_no;
  if (line.rfind("id,label,attribute", 0) != 0) {
    throw FormatError(FormatError::Kind::Malformed, line_no, "missing synthetic CSV header");
  }
  std::vector<SyntheticSample> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 3 + kSyntheticPixels) {
      throw FormatError(FormatError::Kind::InconsistentDim, line_no,
                        "expected " + std::to_string(3 + kSyntheticPixels) + " fields, got " +
                            std::to_string(fields.size()));
    }
    SyntheticSample s;
    s.label = parse_index(fields[1], line_no, kSyntheticClasses);
    s.attribute = parse_index(fields[2], line_no, 2);
    for (std::size_t p = 0; p < kSyntheticPixels; ++p) {
      const double v = parse_double(fields[3 + p], line_no);
      if (v < 0.0 || v > 1.0) throw FormatError(FormatError::Kind::Malformed, line_no, "pixel outside [0, 1]");
      s.pixels[p] = v;
    }
    out.push_back(s);
  }
  if (out.empty()) throw FormatError(FormatError::Kind::EmptyDataset, line_no, "synthetic dataset has no rows");
  return out;
}

}  // namespace seqabs
