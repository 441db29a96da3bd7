#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "seqabs/domains/linear_classifier.hpp"
#include "seqabs/numeric/parameter_set.hpp"
#include "seqabs/policy/policy_net.hpp"

namespace seqabs {

inline constexpr int kModelFormatVersion = 1;

/// Model files are JSON documents:
///
///   {"format": "seqabs-model", "version": 1, "kind": "policy" | "linear-classifier",
///    "meta": {...}, "params": [{"name": ..., "shape": [...], "values": [...]}]}
///
/// Doubles are written in shortest round-trip form, so reloading is
/// bit-exact.
void write_policy(std::ostream& out, const PolicyNet& policy, const std::string& domain = {});
PolicyNet read_policy(std::istream& in);
void save_policy(const std::filesystem::path& path, const PolicyNet& policy, const std::string& domain = {});
PolicyNet load_policy(const std::filesystem::path& path);

/// Domain tag stored with a policy, empty if none.
std::string read_policy_domain(const std::filesystem::path& path);

void write_classifier(std::ostream& out, const LinearGoalClassifier& clf, const std::string& goal = {});
LinearGoalClassifier read_classifier(std::istream& in);
void save_classifier(const std::filesystem::path& path, const LinearGoalClassifier& clf,
                     const std::string& goal = {});
LinearGoalClassifier load_classifier(const std::filesystem::path& path);

}  // namespace seqabs
