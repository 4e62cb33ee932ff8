#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rashomon/enumerator.hpp"
#include "rashomon/error.hpp"
#include "rashomon/sunburst.hpp"
#include "rashomon/trie.hpp"

namespace rashomon {

enum class FeatureMode { kMustNotUse, kMustUse };

struct FeatureConstraint {
  std::string source_feature;
  FeatureMode mode = FeatureMode::kMustNotUse;
  // Branch depths the constraint looks at (root = 0); nullopt means all.
  std::optional<std::set<int>> depths;

  bool operator==(const FeatureConstraint&) const = default;
};

struct FilterSpec {
  double accuracy_min = 0.0;
  double accuracy_max = 1.0;
  std::size_t min_leaf_samples = 0;
  std::set<int> allowed_heights;  // empty = any height
  std::vector<FeatureConstraint> features;

  // Throws ValidationError for inverted/out-of-range accuracy bounds or depth
  // scopes outside [0, depth_cap).
  void validate(int depth_cap) const;
  bool operator==(const FilterSpec&) const = default;
};

struct FieldDiagnostic {
  std::string field;
  std::string message;
};

// A malformed filter body; carries one diagnostic per offending field.
class FilterSpecError : public ValidationError {
 public:
  explicit FilterSpecError(std::vector<FieldDiagnostic> diagnostics);
  const std::vector<FieldDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<FieldDiagnostic> diagnostics_;
};

// Parses the wire form {acc:[min,max], min_leaf, heights:[..],
// features:[{name, mode, depths}]}. Missing fields take vacuous defaults.
FilterSpec filter_from_json(const nlohmann::json& body);
nlohmann::json filter_to_json(const FilterSpec& spec);

// Ids of the trees satisfying every clause. Throws UnknownFeature.
std::set<int> apply_filter(const RashomonSet& set, const FilterSpec& spec);

struct FeatureImportance {
  std::string source_feature;
  std::size_t root_usage_count = 0;
  std::size_t any_depth_usage_count = 0;
  double root_fraction = 0.0;
  double any_depth_fraction = 0.0;
};

// One entry per source feature, in order of first appearance.
struct ImportanceSummary {
  std::vector<FeatureImportance> features;
  const FeatureImportance& at(const std::string& source_feature) const;
};

// Throws EmptySetError.
ImportanceSummary feature_importance(const RashomonSet& set);
nlohmann::json importance_to_json(const ImportanceSummary& summary);

struct FilteredHierarchy {
  std::set<int> ids;
  std::vector<Sector> sectors;
};

FilteredHierarchy filtered_hierarchy(const RashomonSet& set, const RuleTrie& trie,
                                     const FilterSpec& spec, int depth_limit);

}  // namespace rashomon
