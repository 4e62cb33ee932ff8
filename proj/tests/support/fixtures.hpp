#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rashomon/dataset.hpp"
#include "rashomon/enumerator.hpp"
#include "rashomon/query.hpp"
#include "rashomon/tree.hpp"

namespace rashomon::testing {

// D1: y = f0 over all four (f0, f1) combinations.
inline Dataset d1() {
  return parse_dataset("f0,f1,label\n0,0,0\n0,1,0\n1,0,1\n1,1,1\n");
}

// D2: y = f0 OR f1 over all eight (f0, f1, f2) combinations.
inline Dataset d2() {
  std::string csv = "f0,f1,f2,label\n";
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        csv += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," +
               std::to_string(a | b) + "\n";
  return parse_dataset(csv);
}

inline DecisionTree leaf(int p) { return DecisionTree::leaf(static_cast<std::uint8_t>(p)); }
inline DecisionTree stump(int c, int if_false, int if_true) {
  return DecisionTree::branch(c, leaf(if_false), leaf(if_true));
}
// D2 tree A: root f0, true -> 1, false -> split on f1.
inline DecisionTree d2_tree_a() { return DecisionTree::branch(0, stump(1, 0, 1), leaf(1)); }
// D2 tree B: root f1, true -> 1, false -> split on f0.
inline DecisionTree d2_tree_b() { return DecisionTree::branch(1, stump(0, 0, 1), leaf(1)); }

inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t f,
                              const std::vector<std::string>& sources = {}) {
  std::bernoulli_distribution coin(0.5);
  std::string csv;
  for (std::size_t c = 0; c < f; ++c) {
    if (sources.empty())
      csv += "x" + std::to_string(c);
    else
      csv += sources[c % sources.size()] + ":r" + std::to_string(c);
    csv += ",";
  }
  csv += "label\n";
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c <= f; ++c) {
      csv += coin(rng) ? "1" : "0";
      csv += c == f ? "\n" : ",";
    }
  }
  return parse_dataset(csv);
}

// Random tree over F conditions, not necessarily canonical.
inline DecisionTree random_tree(std::mt19937_64& rng, int conditions, int depth,
                                std::vector<int> used = {}) {
  std::uniform_int_distribution<int> pick(0, conditions - 1);
  std::bernoulli_distribution stop(depth == 0 || static_cast<int>(used.size()) == conditions ? 1.0 : 0.35);
  if (stop(rng)) return leaf(static_cast<int>(rng() % 2));
  int c;
  do c = pick(rng);
  while (std::find(used.begin(), used.end(), c) != used.end());
  used.push_back(c);
  return DecisionTree::branch(c, random_tree(rng, conditions, depth - 1, used),
                              random_tree(rng, conditions, depth - 1, used));
}

inline std::set<std::string> serializations(const RashomonSet& set) {
  std::set<std::string> out;
  for (const auto& m : set.members) out.insert(canonical_serialization(m.tree));
  return out;
}

// Brute-force filter predicate working on the serialized tree rather than the
// node array, so it shares no traversal code with apply_filter().
inline std::set<int> brute_force_filter(const RashomonSet& set, const FilterSpec& spec) {
  std::set<int> out;
  for (const auto& m : set.members) {
    bool ok = m.metrics.accuracy >= spec.accuracy_min && m.metrics.accuracy <= spec.accuracy_max;
    if (!spec.allowed_heights.empty()) ok = ok && spec.allowed_heights.count(m.metrics.height) == 1;

    // Leaf sample counts come from the stored per-node metrics.
    std::vector<std::size_t> leaf_counts;
    for (std::size_t i = 0; i < m.tree.nodes().size(); ++i)
      if (m.tree.nodes()[i].condition < 0) leaf_counts.push_back(m.metrics.node_stats[i].sample_count);
    for (auto c : leaf_counts) ok = ok && c >= spec.min_leaf_samples;

    std::vector<std::pair<int, std::string>> uses;
    std::function<void(const nlohmann::json&, int)> walk = [&](const nlohmann::json& node, int depth) {
      if (node["type"] == "leaf") return;
      uses.emplace_back(depth, set.conditions[node["condition"].get<std::size_t>()].source_feature);
      walk(node["false"], depth + 1);
      walk(node["true"], depth + 1);
    };
    walk(tree_to_json(m.tree), 0);
    for (const auto& fc : spec.features) {
      bool used = false;
      for (const auto& [d, name] : uses)
        if (name == fc.source_feature && (!fc.depths || fc.depths->count(d))) used = true;
      ok = ok && (fc.mode == FeatureMode::kMustUse ? used : !used);
    }
    if (ok) out.insert(m.id);
  }
  return out;
}

inline FilterSpec random_spec(std::mt19937_64& rng, const RashomonSet& set) {
  FilterSpec spec;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng), b = u(rng);
  if (rng() % 2) {
    spec.accuracy_min = std::min(a, b) * 0.8;
    spec.accuracy_max = std::max(a, b) < 0.5 ? 1.0 : std::max(a, b);
  }
  if (rng() % 2) spec.min_leaf_samples = rng() % 5;
  if (rng() % 3 == 0)
    for (int h = 0; h <= set.config.depth_cap; ++h)
      if (rng() % 2) spec.allowed_heights.insert(h);
  auto groups = group_conditions(set.conditions);
  int nconstraints = static_cast<int>(rng() % 3);
  for (int i = 0; i < nconstraints; ++i) {
    FeatureConstraint c;
    c.source_feature = groups[rng() % groups.size()].source_feature;
    c.mode = rng() % 2 ? FeatureMode::kMustUse : FeatureMode::kMustNotUse;
    if (set.config.depth_cap > 0 && rng() % 2) {
      std::set<int> depths;
      for (int d = 0; d < set.config.depth_cap; ++d)
        if (rng() % 2) depths.insert(d);
      c.depths = depths;
    }
    spec.features.push_back(c);
  }
  return spec;
}

}  // namespace rashomon::testing
