#include "seqabs/policy/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "seqabs/error.hpp"

namespace seqabs {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "seqabs-model";

json params_to_json(const ParameterSet& params) {
  json arr = json::array();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& a = params[i];
    arr.push_back({{"name", params.name(i)},
                   {"shape", a.shape()},
                   {"values", std::vector<double>(a.values().begin(), a.values().end())}});
  }
  return arr;
}

ParameterSet params_from_json(const json& arr) {
  ParameterSet out;
  for (const auto& entry : arr) {
    out.add(entry.at("name").get<std::string>(),
            DenseArray(entry.at("shape").get<std::vector<std::size_t>>(),
                       entry.at("values").get<std::vector<double>>()));
  }
  return out;
}

json read_document(std::istream& in, const char* kind) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(FormatError::Kind::Malformed, 0, std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormatTag) {
    throw FormatError(FormatError::Kind::Malformed, 0, "not a seqabs model file");
  }
  if (doc.value("version", -1) != kModelFormatVersion) {
    throw FormatError(FormatError::Kind::UnsupportedVersion, 0, "unsupported model format version");
  }
  if (doc.value("kind", "") != kind) {
    throw FormatError(FormatError::Kind::Malformed, 0,
                      "model file holds a '" + doc.value("kind", std::string("?")) + "', expected '" + kind + "'");
  }
  return doc;
}

void write_document(std::ostream& out, const json& doc) {
  out << doc.dump(1) << '\n';
  if (!out) throw InvalidInput("failed writing model file");
}

template <typename F>
auto with_json_errors(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(FormatError::Kind::Malformed, 0, std::string("model file: ") + e.what());
  }
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_policy(std::ostream& out, const PolicyNet& policy, const std::string& domain) {
  const auto& c = policy.config();
  json doc;
  doc["format"] = kFormatTag;
  doc["version"] = kModelFormatVersion;
  doc["kind"] = "policy";
  doc["meta"] = {{"feature_dim", c.feature_dim},     {"num_categories", c.num_categories},
                 {"gru_hidden", c.gru_hidden},       {"candidate_dim", c.candidate_dim},
                 {"chosen_dim", c.chosen_dim},       {"category_dim", c.category_dim},
                 {"joint_dim", c.joint_dim},         {"seed", policy.seed()},
                 {"domain", domain}};
  doc["params"] = params_to_json(policy.params());
  write_document(out, doc);
}

PolicyNet read_policy(std::istream& in) {
  const auto doc = read_document(in, "policy");
  return with_json_errors([&] {
    const auto& m = doc.at("meta");
    PolicyConfig c;
    c.feature_dim = m.at("feature_dim").get<std::size_t>();
    c.num_categories = m.at("num_categories").get<std::size_t>();
    c.gru_hidden = m.at("gru_hidden").get<std::size_t>();
    c.candidate_dim = m.at("candidate_dim").get<std::size_t>();
    c.chosen_dim = m.at("chosen_dim").get<std::size_t>();
    c.category_dim = m.at("category_dim").get<std::size_t>();
    c.joint_dim = m.at("joint_dim").get<std::size_t>();
    return PolicyNet(c, params_from_json(doc.at("params")), m.at("seed").get<std::uint64_t>());
  });
}

void save_policy(const std::filesystem::path& path, const PolicyNet& policy, const std::string& domain) {
  auto out = open_out(path);
  write_policy(out, policy, domain);
}

PolicyNet load_policy(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_policy(in);
}

std::string read_policy_domain(const std::filesystem::path& path) {
  auto in = open_in(path);
  const auto doc = read_document(in, "policy");
  return doc.at("meta").value("domain", std::string());
}

void write_classifier(std::ostream& out, const LinearGoalClassifier& clf, const std::string& goal) {
  json doc;
  doc["format"] = kFormatTag;
  doc["version"] = kModelFormatVersion;
  doc["kind"] = "linear-classifier";
  doc["meta"] = {{"input_dim", clf.input_dim()}, {"num_labels", clf.num_labels()}, {"goal", goal}};
  ParameterSet p;
  p.add("weight", clf.weights());
  p.add("bias", clf.bias());
  doc["params"] = params_to_json(p);
  write_document(out, doc);
}

LinearGoalClassifier read_classifier(std::istream& in) {
  const auto doc = read_document(in, "linear-classifier");
  return with_json_errors([&] {
    auto p = params_from_json(doc.at("params"));
    return LinearGoalClassifier(p["weight"], p["bias"]);
  });
}

void save_classifier(const std::filesystem::path& path, const LinearGoalClassifier& clf, const std::string& goal) {
  auto out = open_out(path);
  write_classifier(out, clf, goal);
}

LinearGoalClassifier load_classifier(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_classifier(in);
}

}  // namespace seqabs
