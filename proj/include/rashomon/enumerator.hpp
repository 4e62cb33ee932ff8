#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rashomon/dataset.hpp"
#include "rashomon/tree.hpp"

namespace rashomon {

inline constexpr int kMaxDepthCap = 6;
inline constexpr double kMembershipSlack = 1e-12;
inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

struct EnumerationConfig {
  double lambda = 0.0;
  double epsilon = 1.0;
  int depth_cap = 0;

  // Throws ConfigError unless lambda >= 0, epsilon >= 1 and 0 <= depth_cap <= 6.
  void validate() const;
  bool operator==(const EnumerationConfig&) const = default;
};

// Execution knobs that do not affect the result.
struct EnumerationOptions {
  unsigned threads = 1;
  std::uint64_t node_budget = kDefaultNodeBudget;
};

struct RashomonMember {
  int id = 0;
  DecisionTree tree;
  TreeMetrics metrics;
};

// Every canonical tree whose regularized objective is at most
// epsilon * optimal_objective. Members are sorted by canonical serialization
// and their ids are their positions in that order.
struct RashomonSet {
  EnumerationConfig config;
  std::string dataset_hash;
  double optimal_objective = 0.0;
  std::size_t sample_count = 0;
  std::vector<SplitCondition> conditions;
  std::vector<RashomonMember> members;

  std::size_t size() const { return members.size(); }
  // Throws UnknownTreeId.
  const RashomonMember& member(std::int64_t id) const;
  bool contains(std::int64_t id) const { return id >= 0 && id < static_cast<std::int64_t>(members.size()); }
};

struct OptimalTree {
  double objective = 0.0;
  DecisionTree tree;
};

RashomonSet enumerate_rashomon(const Dataset& dataset, const EnumerationConfig& config,
                               const EnumerationOptions& options = {});

OptimalTree optimal_objective(const Dataset& dataset, double lambda, int depth_cap,
                              const EnumerationOptions& options = {});

// Unpruned reference enumeration over every tree shape; only for tiny inputs
// (at most 8 conditions, 64 samples, depth 3). Throws OracleScopeError otherwise.
RashomonSet exhaustive_oracle(const Dataset& dataset, const EnumerationConfig& config);

// Upper bound on the number of root-to-node paths an unpruned search visits:
// sum over k <= depth_cap of 2^k * F!/(F-k)!, saturating at UINT64_MAX.
std::uint64_t state_space_estimate(std::size_t condition_count, int depth_cap);

// Sorts candidates canonically, assigns ids and fills in the set header.
RashomonSet assemble_set(const Dataset& dataset, const EnumerationConfig& config,
                         double optimal, std::vector<RashomonMember> members);

nlohmann::json config_to_json(const EnumerationConfig& config);
EnumerationConfig config_from_json(const nlohmann::json& doc);
nlohmann::json conditions_to_json(const std::vector<SplitCondition>& conditions);
std::vector<SplitCondition> conditions_from_json(const nlohmann::json& doc);

nlohmann::json set_to_json(const RashomonSet& set);
RashomonSet set_from_json(const nlohmann::json& doc);
// Compact JSON followed by a newline; byte-stable for equal sets.
std::string serialize_set(const RashomonSet& set);
void save_set(const RashomonSet& set, const std::filesystem::path& path);
RashomonSet load_set(const std::filesystem::path& path);

}  // namespace rashomon
