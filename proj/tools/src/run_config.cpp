#include "seqabs/cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace seqabs::cli {

using nlohmann::json;

BudgetSpec BudgetSpec::parse(const std::string& text) {
  BudgetSpec b;
  std::string body = text;
  if (!body.empty() && body.back() == '%') {
    b.percent = true;
    body.pop_back();
  }
  std::size_t used = 0;
  try {
    b.value = std::stod(body, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (body.empty() || used != body.size() || !std::isfinite(b.value) || b.value <= 0) {
    throw ConfigError("budget '" + text + "' must be a positive count or a percentage such as 25%");
  }
  if (!b.percent && b.value != std::floor(b.value)) {
    throw ConfigError("budget '" + text + "' must be a whole number of units");
  }
  return b;
}

std::string BudgetSpec::str() const {
  std::ostringstream s;
  s << value;
  if (percent) s << '%';
  return s.str();
}

DomainKind parse_domain(const std::string& name) {
  if (name == "synthetic") return DomainKind::Synthetic;
  if (name == "embedded") return DomainKind::Embedded;
  throw ConfigError("unknown domain '" + name + "' (expected synthetic or embedded)");
}

std::string domain_name(DomainKind d) { return d == DomainKind::Synthetic ? "synthetic" : "embedded"; }

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(goal == "category" || goal == "attribute", "goal must be category or attribute");
  require(domain == DomainKind::Synthetic || goal == "category", "goal attribute applies to the synthetic domain only");
  require(domain == DomainKind::Synthetic || !train_data.empty(), "the embedded domain needs train_data");
  require(budget.value > 0, "budget must be positive");
  require(!budget.percent || budget.value <= 100, "percent budget must not exceed 100%");
  require(per_class > 0 && test_per_class > 0, "per_class and test_per_class must be positive");
  require(std::isfinite(noise) && noise >= 0, "noise must be non-negative");
  require(classifier_epochs > 0, "classifier_epochs must be positive");
  require(plays > 0, "plays must be positive");
  require(discount >= 0 && discount <= 1, "discount must lie in [0, 1]");
  require(std::isfinite(learning_rate) && learning_rate > 0, "learning_rate must be positive");
  require(std::isfinite(reward_scale) && reward_scale > 0, "reward_scale must be positive");
  require(random_baselines > 0, "random_baselines must be positive");
  require(workers > 0, "workers must be positive");
  require(gru_hidden > 0, "gru_hidden must be positive");
}

namespace {

template <class T>
T get(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double get_real(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"domain", [](RunConfig& c, const json& v, const std::string& k) { c.domain = parse_domain(get<std::string>(v, k)); }},
      {"goal", [](RunConfig& c, const json& v, const std::string& k) { c.goal = get<std::string>(v, k); }},
      {"budget",
       [](RunConfig& c, const json& v, const std::string& k) {
         if (v.is_number()) {
           c.budget = BudgetSpec::parse(v.dump());
         } else {
           c.budget = BudgetSpec::parse(get<std::string>(v, k));
         }
       }},
      {"seed",
       [](RunConfig& c, const json& v, const std::string& k) {
         if (!v.is_number_unsigned()) throw ConfigError("config key '" + k + "' must be a non-negative integer");
         c.seed = v.get<std::uint64_t>();
       }},
      {"train_data", [](RunConfig& c, const json& v, const std::string& k) { c.train_data = get<std::string>(v, k); }},
      {"test_data", [](RunConfig& c, const json& v, const std::string& k) { c.test_data = get<std::string>(v, k); }},
      {"per_class", [](RunConfig& c, const json& v, const std::string& k) { c.per_class = get_count(v, k); }},
      {"test_per_class", [](RunConfig& c, const json& v, const std::string& k) { c.test_per_class = get_count(v, k); }},
      {"noise", [](RunConfig& c, const json& v, const std::string& k) { c.noise = get_real(v, k); }},
      {"classifier", [](RunConfig& c, const json& v, const std::string& k) { c.classifier = get<std::string>(v, k); }},
      {"train_classifier", [](RunConfig& c, const json& v, const std::string& k) { c.train_classifier = get<bool>(v, k); }},
      {"classifier_epochs", [](RunConfig& c, const json& v, const std::string& k) { c.classifier_epochs = get_count(v, k); }},
      {"model", [](RunConfig& c, const json& v, const std::string& k) { c.model = get<std::string>(v, k); }},
      {"metrics", [](RunConfig& c, const json& v, const std::string& k) { c.metrics = get<std::string>(v, k); }},
      {"report", [](RunConfig& c, const json& v, const std::string& k) { c.report = get<std::string>(v, k); }},
      {"episodes", [](RunConfig& c, const json& v, const std::string& k) { c.episodes = get_count(v, k); }},
      {"plays", [](RunConfig& c, const json& v, const std::string& k) { c.plays = get_count(v, k); }},
      {"discount", [](RunConfig& c, const json& v, const std::string& k) { c.discount = get_real(v, k); }},
      {"learning_rate", [](RunConfig& c, const json& v, const std::string& k) { c.learning_rate = get_real(v, k); }},
      {"reward_scale", [](RunConfig& c, const json& v, const std::string& k) { c.reward_scale = get_real(v, k); }},
      {"random_baselines", [](RunConfig& c, const json& v, const std::string& k) { c.random_baselines = get_count(v, k); }},
      {"eval_every", [](RunConfig& c, const json& v, const std::string& k) { c.eval_every = get_count(v, k); }},
      {"workers", [](RunConfig& c, const json& v, const std::string& k) { c.workers = get_count(v, k); }},
      {"gru_hidden", [](RunConfig& c, const json& v, const std::string& k) { c.gru_hidden = get_count(v, k); }},
  };
  return table;
}

}  // namespace

RunConfig apply_config_text(const std::string& json_text, RunConfig base) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(base, value, key);
  }
  return base;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream text;
  text << in.rdbuf();
  return apply_config_text(text.str(), std::move(base));
}

}  // namespace seqabs::cli
