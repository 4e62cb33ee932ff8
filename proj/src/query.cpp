#include "rashomon/query.hpp"

#include <algorithm>
#include <functional>

namespace rashomon {

namespace {

std::string join_diagnostics(const std::vector<FieldDiagnostic>& d) {
  std::string out = "invalid filter:";
  for (const auto& x : d) out += " " + x.field + ": " + x.message + ";";
  return out;
}

// Source feature of every branch, keyed by branch depth.
std::vector<std::pair<int, std::string>> branch_features(const DecisionTree& tree,
                                                         const std::vector<SplitCondition>& conditions) {
  std::vector<std::pair<int, std::string>> out;
  std::function<void(int, int)> walk = [&](int i, int depth) {
    const auto& n = tree.node(i);
    if (n.is_leaf()) return;
    out.emplace_back(depth, conditions.at(static_cast<std::size_t>(n.condition)).source_feature);
    walk(n.false_child, depth + 1);
    walk(n.true_child, depth + 1);
  };
  walk(0, 0);
  return out;
}

bool constraint_holds(const FeatureConstraint& c,
                      const std::vector<std::pair<int, std::string>>& uses) {
  bool used = std::any_of(uses.begin(), uses.end(), [&](const auto& u) {
    return u.second == c.source_feature && (!c.depths || c.depths->contains(u.first));
  });
  return c.mode == FeatureMode::kMustUse ? used : !used;
}

}  // namespace

FilterSpecError::FilterSpecError(std::vector<FieldDiagnostic> diagnostics)
    : ValidationError(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

void FilterSpec::validate(int depth_cap) const {
  std::vector<FieldDiagnostic> problems;
  if (!(accuracy_min >= 0.0 && accuracy_max <= 1.0))
    problems.push_back({"acc", "bounds must lie within [0, 1]"});
  if (!(accuracy_min <= accuracy_max)) problems.push_back({"acc", "min exceeds max"});
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!features[i].depths) continue;
    for (int d : *features[i].depths)
      if (d < 0 || d >= depth_cap)
        problems.push_back({"features[" + std::to_string(i) + "].depths",
                            "depth " + std::to_string(d) + " outside [0, " + std::to_string(depth_cap) + ")"});
  }
  if (!problems.empty()) throw FilterSpecError(std::move(problems));
}

FilterSpec filter_from_json(const nlohmann::json& body) {
  std::vector<FieldDiagnostic> problems;
  FilterSpec spec;
  if (!body.is_object()) throw FilterSpecError(std::vector<FieldDiagnostic>{{"", "filter body must be a JSON object"}});

  if (body.contains("acc")) {
    const auto& acc = body["acc"];
    if (!acc.is_array() || acc.size() != 2 || !acc[0].is_number() || !acc[1].is_number()) {
      problems.push_back({"acc", "expected [min, max] numbers"});
    } else {
      spec.accuracy_min = acc[0].get<double>();
      spec.accuracy_max = acc[1].get<double>();
    }
  }
  if (body.contains("min_leaf")) {
    const auto& v = body["min_leaf"];
    if (!v.is_number_integer() || v.get<long long>() < 0)
      problems.push_back({"min_leaf", "expected a non-negative integer"});
    else
      spec.min_leaf_samples = v.get<std::size_t>();
  }
  if (body.contains("heights")) {
    const auto& hs = body["heights"];
    if (!hs.is_array()) {
      problems.push_back({"heights", "expected an array of integers"});
    } else {
      for (const auto& h : hs) {
        if (!h.is_number_integer()) {
          problems.push_back({"heights", "expected an array of integers"});
          break;
        }
        spec.allowed_heights.insert(h.get<int>());
      }
    }
  }
  if (body.contains("features")) {
    const auto& fs = body["features"];
    if (!fs.is_array()) {
      problems.push_back({"features", "expected an array"});
    } else {
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto field = "features[" + std::to_string(i) + "]";
        const auto& f = fs[i];
        if (!f.is_object() || !f.contains("name") || !f["name"].is_string()) {
          problems.push_back({field + ".name", "expected a feature name"});
          continue;
        }
        FeatureConstraint c;
        c.source_feature = f["name"].get<std::string>();
        const auto mode = f.value("mode", nlohmann::json("must_not_use"));
        if (mode == "must_not_use") {
          c.mode = FeatureMode::kMustNotUse;
        } else if (mode == "must_use") {
          c.mode = FeatureMode::kMustUse;
        } else {
          problems.push_back({field + ".mode", "expected \"must_use\" or \"must_not_use\""});
        }
        if (f.contains("depths") && f["depths"] != "all") {
          const auto& ds = f["depths"];
          if (!ds.is_array() || !std::all_of(ds.begin(), ds.end(), [](const auto& d) { return d.is_number_integer(); })) {
            problems.push_back({field + ".depths", "expected \"all\" or an array of integers"});
          } else {
            c.depths = ds.get<std::set<int>>();
          }
        }
        spec.features.push_back(std::move(c));
      }
    }
  }
  if (!problems.empty()) throw FilterSpecError(std::move(problems));
  return spec;
}

nlohmann::json filter_to_json(const FilterSpec& spec) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : spec.features) {
    features.push_back({{"name", f.source_feature},
                        {"mode", f.mode == FeatureMode::kMustUse ? "must_use" : "must_not_use"},
                        {"depths", f.depths ? nlohmann::json(*f.depths) : nlohmann::json("all")}});
  }
  return {{"acc", {spec.accuracy_min, spec.accuracy_max}},
          {"min_leaf", spec.min_leaf_samples},
          {"heights", spec.allowed_heights},
          {"features", std::move(features)}};
}

std::set<int> apply_filter(const RashomonSet& set, const FilterSpec& spec) {
  spec.validate(set.config.depth_cap);
  for (const auto& f : spec.features) {
    bool known = std::any_of(set.conditions.begin(), set.conditions.end(),
                             [&](const SplitCondition& c) { return c.source_feature == f.source_feature; });
    if (!known) throw UnknownFeature("unknown source feature \"" + f.source_feature + "\"");
  }

  std::set<int> out;
  for (const auto& m : set.members) {
    const auto& metrics = m.metrics;
    if (metrics.accuracy < spec.accuracy_min || metrics.accuracy > spec.accuracy_max) continue;
    if (!spec.allowed_heights.empty() && !spec.allowed_heights.contains(metrics.height)) continue;

    bool leaves_ok = true;
    for (std::size_t i = 0; i < m.tree.nodes().size(); ++i)
      if (m.tree.nodes()[i].is_leaf() && metrics.node_stats[i].sample_count < spec.min_leaf_samples)
        leaves_ok = false;
    if (!leaves_ok) continue;

    if (!spec.features.empty()) {
      const auto uses = branch_features(m.tree, set.conditions);
      if (!std::all_of(spec.features.begin(), spec.features.end(),
                       [&](const FeatureConstraint& c) { return constraint_holds(c, uses); }))
        continue;
    }
    out.insert(m.id);
  }
  return out;
}

const FeatureImportance& ImportanceSummary::at(const std::string& source_feature) const {
  for (const auto& f : features)
    if (f.source_feature == source_feature) return f;
  throw UnknownFeature("unknown source feature \"" + source_feature + "\"");
}

ImportanceSummary feature_importance(const RashomonSet& set) {
  if (set.members.empty()) throw EmptySetError("feature importance needs a non-empty set");
  ImportanceSummary summary;
  for (const auto& g : group_conditions(set.conditions)) summary.features.push_back({g.source_feature});

  auto entry = [&](const std::string& name) -> FeatureImportance& {
    return *std::find_if(summary.features.begin(), summary.features.end(),
                         [&](const FeatureImportance& f) { return f.source_feature == name; });
  };
  for (const auto& m : set.members) {
    std::set<std::string> used;
    for (const auto& [depth, feature] : branch_features(m.tree, set.conditions)) {
      if (depth == 0) ++entry(feature).root_usage_count;
      used.insert(feature);
    }
    for (const auto& f : used) ++entry(f).any_depth_usage_count;
  }
  const double n = static_cast<double>(set.size());
  for (auto& f : summary.features) {
    f.root_fraction = static_cast<double>(f.root_usage_count) / n;
    f.any_depth_fraction = static_cast<double>(f.any_depth_usage_count) / n;
  }
  return summary;
}

nlohmann::json importance_to_json(const ImportanceSummary& summary) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : summary.features)
    out.push_back({{"feature", f.source_feature},
                   {"root_usage_count", f.root_usage_count},
                   {"any_depth_usage_count", f.any_depth_usage_count},
                   {"root_fraction", f.root_fraction},
                   {"any_depth_fraction", f.any_depth_fraction}});
  return out;
}

FilteredHierarchy filtered_hierarchy(const RashomonSet& set, const RuleTrie& trie,
                                     const FilterSpec& spec, int depth_limit) {
  FilteredHierarchy out;
  out.ids = apply_filter(set, spec);
  out.sectors = layout(restrict_trie(trie, out.ids), depth_limit);
  return out;
}

}  // namespace rashomon
