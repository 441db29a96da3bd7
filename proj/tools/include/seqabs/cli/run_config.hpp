#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "seqabs/error.hpp"

namespace seqabs::cli {

/// Rejected configuration; the CLI exits with status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class DomainKind { Synthetic, Embedded };

inline constexpr std::size_t kSyntheticEpisodes = 20000;
inline constexpr std::size_t kEmbeddedEpisodes = 5000;

/// Absolute AU count or percent of the per-category average AU count.
struct BudgetSpec {
  double value = 2;
  bool percent = false;

  /// "3" or "25%".
  static BudgetSpec parse(const std::string& text);
  std::string str() const;
};

/// Everything a command needs. Precedence: flags > file > defaults.
struct RunConfig {
  DomainKind domain = DomainKind::Synthetic;
  std::string goal = "category";  // synthetic only: category | attribute
  BudgetSpec budget;
  std::uint64_t seed = 1;

  // Data. Synthetic data is generated from the seed when no file is given.
  std::filesystem::path train_data;
  std::filesystem::path test_data;
  std::size_t per_class = 200;
  std::size_t test_per_class = 100;
  double noise = 0.25;

  // Goal classifier.
  std::filesystem::path classifier;
  bool train_classifier = true;
  std::size_t classifier_epochs = 200;

  // Outputs.
  std::filesystem::path model = "model.json";
  std::filesystem::path metrics = "metrics.csv";
  std::filesystem::path report;

  // Trainer, reward and policy.
  std::optional<std::size_t> episodes;  // default depends on the domain
  std::size_t plays = 2;
  double discount = 0.9;
  double learning_rate = 1e-4;
  double reward_scale = 100;
  std::size_t random_baselines = 1;
  std::size_t eval_every = 100;
  std::size_t workers = 1;
  std::size_t gru_hidden = 128;

  std::size_t resolved_episodes() const { return episodes.value_or(domain == DomainKind::Synthetic ? kSyntheticEpisodes : kEmbeddedEpisodes); }

  /// Throws ConfigError.
  void validate() const;
};

/// Overlays the keys of a JSON document onto `base`. Unknown keys and
/// mistyped values throw ConfigError.
RunConfig apply_config_text(const std::string& json_text, RunConfig base);
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base);

DomainKind parse_domain(const std::string& name);
std::string domain_name(DomainKind d);

}  // namespace seqabs::cli
