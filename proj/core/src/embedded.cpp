#include "seqabs/domains/embedded.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "seqabs/error.hpp"

namespace seqabs {

namespace {

using Kind = FormatError::Kind;

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::size_t parse_count(const std::string& tok, std::size_t line, const char* what) {
  std::size_t v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(Kind::Malformed, line, std::string("expected an unsigned integer for ") + what + ", got '" +
                                                 tok + "'");
  }
  return v;
}

double parse_real(const std::string& tok, std::size_t line) {
  std::istringstream is(tok);
  double v = 0.0;
  if (!(is >> v) || !is.eof() || !std::isfinite(v)) {
    throw FormatError(Kind::Malformed, line, "not a finite number: '" + tok + "'");
  }
  return v;
}

struct LineReader {
  explicit LineReader(std::istream& stream) : in(stream) {}

  std::istream& in;
  std::size_t line_no = 0;
  std::string pending;
  bool has_pending = false;

  // Next non-blank, non-comment line.
  bool next(std::string& out) {
    if (has_pending) {
      has_pending = false;
      out = std::move(pending);
      return true;
    }
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      out = line;
      return true;
    }
    return false;
  }
  void push_back(std::string line) {
    pending = std::move(line);
    has_pending = true;
  }
};

std::vector<std::string> expect_directive(LineReader& r, const char* key, std::size_t min_args) {
  std::string line;
  if (!r.next(line)) throw FormatError(Kind::Malformed, r.line_no, std::string("missing '") + key + "' header");
  auto toks = split_ws(line);
  if (toks.empty() || toks[0] != key || toks.size() < 1 + min_args) {
    throw FormatError(Kind::Malformed, r.line_no, std::string("expected '") + key + "' header");
  }
  return toks;
}

}  // namespace

EmbeddedDataset parse_embedded(std::istream& in) {
  LineReader r(in);
  std::string line;
  if (!r.next(line)) throw FormatError(Kind::EmptyDataset, 0, "empty embedded-sequence file");

  const auto magic = split_ws(line);
  if (magic.size() != 2 || magic[0] != "seqabs-embedded") {
    throw FormatError(Kind::Malformed, r.line_no, "missing 'seqabs-embedded <version>' header");
  }
  const auto version = parse_count(magic[1], r.line_no, "version");
  if (version != static_cast<std::size_t>(kEmbeddedFormatVersion)) {
    throw FormatError(Kind::UnsupportedVersion, r.line_no, "unsupported format version " + magic[1]);
  }

  EmbeddedDataset data;
  auto toks = expect_directive(r, "dim", 1);
  data.dim = parse_count(toks[1], r.line_no, "dim");
  if (data.dim == 0 || toks.size() != 2) throw FormatError(Kind::Malformed, r.line_no, "dim must be one positive integer");
  toks = expect_directive(r, "categories", 1);
  data.num_categories = parse_count(toks[1], r.line_no, "categories");
  if (data.num_categories == 0 || toks.size() != 2) {
    throw FormatError(Kind::Malformed, r.line_no, "categories must be one positive integer");
  }
  toks = expect_directive(r, "labels", 2);
  data.labels.assign(toks.begin() + 1, toks.end());
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    if (std::find(data.labels.begin(), data.labels.begin() + static_cast<std::ptrdiff_t>(i), data.labels[i]) !=
        data.labels.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw FormatError(Kind::Malformed, r.line_no, "duplicate label '" + data.labels[i] + "'");
    }
  }

  while (r.next(line)) {
    toks = split_ws(line);
    if (toks[0] != "record" || toks.size() != 4) {
      throw FormatError(Kind::Malformed, r.line_no, "expected 'record <id> <category> <label>'");
    }
    const auto record_line = r.line_no;
    Sequence seq;
    seq.id = toks[1];
    seq.category = parse_count(toks[2], record_line, "category");
    if (seq.category >= data.num_categories) {
      throw FormatError(Kind::Malformed, record_line, "category " + toks[2] + " outside [0, " +
                                                          std::to_string(data.num_categories) + ")");
    }
    const auto label_it = std::find(data.labels.begin(), data.labels.end(), toks[3]);
    if (label_it == data.labels.end()) {
      throw FormatError(Kind::UnknownLabel, record_line, "unknown label '" + toks[3] + "'");
    }
    seq.label = static_cast<std::size_t>(label_it - data.labels.begin());

    std::vector<std::vector<double>> rows;
    while (r.next(line)) {
      auto row = split_ws(line);
      if (row[0] == "record") {
        r.push_back(std::move(line));
        break;
      }
      if (row.size() != data.dim) {
        throw FormatError(Kind::InconsistentDim, r.line_no,
                          "record '" + seq.id + "' AU " + std::to_string(rows.size() + 1) + " has " +
                              std::to_string(row.size()) + " values, expected " + std::to_string(data.dim));
      }
      std::vector<double> values;
      values.reserve(row.size());
      for (const auto& t : row) values.push_back(parse_real(t, r.line_no));
      rows.push_back(std::move(values));
    }
    if (rows.empty()) throw FormatError(Kind::Malformed, record_line, "record '" + seq.id + "' has no atomic units");
    seq.units = make_units(rows);
    data.sequences.push_back(std::move(seq));
  }
  if (data.sequences.empty()) throw FormatError(Kind::EmptyDataset, r.line_no, "file contains no records");
  return data;
}

EmbeddedDataset load_embedded(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return parse_embedded(in);
}

void write_embedded(std::ostream& out, const EmbeddedDataset& data) {
  const auto old_precision = out.precision(17);
  out << "seqabs-embedded " << kEmbeddedFormatVersion << '\n';
  out << "dim " << data.dim << '\n';
  out << "categories " << data.num_categories << '\n';
  out << "labels";
  for (const auto& l : data.labels) out << ' ' << l;
  out << '\n';
  for (const auto& s : data.sequences) {
    out << "record " << s.id << ' ' << s.category << ' ' << data.labels.at(s.label) << '\n';
    for (const auto& au : s.units) {
      for (std::size_t i = 0; i < au.features.size(); ++i) out << (i ? " " : "") << au.features[i];
      out << '\n';
    }
  }
  out.precision(old_precision);
}

void save_embedded(const std::filesystem::path& path, const EmbeddedDataset& data) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  write_embedded(out, data);
}

EmbeddedDomain::EmbeddedDomain(std::size_t dim, std::size_t num_categories)
    : dim_(dim), num_categories_(num_categories) {
  if (dim_ == 0 || num_categories_ == 0) throw InvalidInput("embedded domain needs positive dims");
}

DenseArray EmbeddedDomain::render(std::span<const AtomicUnit> selection) const {
  DenseArray mean({dim_});
  if (selection.empty()) return mean;
  // Sum in input order so the rendering is bit-identical for any selection order.
  std::vector<const AtomicUnit*> ordered;
  ordered.reserve(selection.size());
  for (const auto& au : selection) {
    if (au.features.size() != dim_) throw InvalidInput("embedded render: feature dim mismatch");
    ordered.push_back(&au);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const AtomicUnit* a, const AtomicUnit* b) { return a->original_index < b->original_index; });
  for (const auto* au : ordered) {
    for (std::size_t i = 0; i < dim_; ++i) mean[i] += au->features[i];
  }
  for (double& v : mean.values()) v /= static_cast<double>(selection.size());
  return mean;
}

}  // namespace seqabs
