// Reference enumeration: every tree shape, no pruning, no shared search state
// with the fast path. Leaf labels and canonical checks come from evaluate().

#include <algorithm>
#include <functional>
#include <limits>

#include "rashomon/enumerator.hpp"
#include "rashomon/error.hpp"

namespace rashomon {

namespace {

std::vector<DecisionTree> all_shapes(int conditions, int depth, std::vector<bool>& used) {
  std::vector<DecisionTree> out{DecisionTree::leaf(0)};
  if (depth == 0) return out;
  for (int c = 0; c < conditions; ++c) {
    if (used[static_cast<std::size_t>(c)]) continue;
    used[static_cast<std::size_t>(c)] = true;
    auto sub = all_shapes(conditions, depth - 1, used);
    used[static_cast<std::size_t>(c)] = false;
    for (const auto& f : sub)
      for (const auto& t : sub) out.push_back(DecisionTree::branch(c, f, t));
  }
  return out;
}

DecisionTree relabel(const DecisionTree& tree, int index, const std::vector<std::uint8_t>& labels) {
  const auto& n = tree.node(index);
  if (n.is_leaf()) return DecisionTree::leaf(labels[static_cast<std::size_t>(index)]);
  return DecisionTree::branch(n.condition, relabel(tree, n.false_child, labels),
                              relabel(tree, n.true_child, labels));
}

bool has_redundant_leaf_pair(const DecisionTree& tree) {
  for (const auto& n : tree.nodes()) {
    if (n.is_leaf()) continue;
    const auto& f = tree.node(n.false_child);
    const auto& t = tree.node(n.true_child);
    if (f.is_leaf() && t.is_leaf() && f.prediction == t.prediction) return true;
  }
  return false;
}

}  // namespace

RashomonSet exhaustive_oracle(const Dataset& dataset, const EnumerationConfig& config) {
  config.validate();
  if (dataset.condition_count() > 8 || dataset.sample_count() > 64 || config.depth_cap > 3)
    throw OracleScopeError("exhaustive oracle is limited to 8 conditions, 64 samples, depth 3");

  std::vector<bool> used(dataset.condition_count(), false);
  const auto shapes = all_shapes(static_cast<int>(dataset.condition_count()), config.depth_cap, used);

  std::vector<RashomonMember> canonical;
  for (const auto& shape : shapes) {
    // With every leaf predicting 0, a leaf's correct count is its negatives.
    auto probe = evaluate(shape, dataset, config.lambda);
    std::vector<std::uint8_t> labels(shape.nodes().size(), 0);
    bool empty_leaf = false;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!shape.nodes()[i].is_leaf()) continue;
      const auto& s = probe.node_stats[i];
      if (s.sample_count == 0) empty_leaf = true;
      std::size_t negatives = s.correct_count;
      labels[i] = s.sample_count - negatives > negatives ? 1 : 0;
    }
    if (empty_leaf) continue;
    auto tree = relabel(shape, 0, labels);
    if (has_redundant_leaf_pair(tree)) continue;
    auto metrics = evaluate(tree, dataset, config.lambda);
    canonical.push_back({0, std::move(tree), std::move(metrics)});
  }

  double optimal = std::numeric_limits<double>::infinity();
  for (const auto& m : canonical) optimal = std::min(optimal, m.metrics.objective);
  const double threshold = config.epsilon * optimal + kMembershipSlack;
  std::erase_if(canonical, [&](const RashomonMember& m) { return m.metrics.objective > threshold; });
  return assemble_set(dataset, config, optimal, std::move(canonical));
}

}  // namespace rashomon
