#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rashomon/dataset.hpp"

namespace rashomon {

// One node of a binary decision tree. A leaf has condition == kLeaf.
struct TreeNode {
  static constexpr int kLeaf = -1;

  int condition = kLeaf;
  std::uint8_t prediction = 0;
  int false_child = -1;
  int true_child = -1;

  bool is_leaf() const { return condition == kLeaf; }
  bool operator==(const TreeNode&) const = default;
};

// Sparse binary decision tree stored as a flat pre-order node array; node 0
// is the root. Children are visited false-side first everywhere.
class DecisionTree {
 public:
  static DecisionTree leaf(std::uint8_t prediction);
  static DecisionTree branch(int condition, const DecisionTree& if_false,
                             const DecisionTree& if_true);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(int index) const { return nodes_[static_cast<std::size_t>(index)]; }

  std::size_t leaf_count() const;
  // Number of branch nodes on the longest root-to-leaf path.
  int height() const;

  bool operator==(const DecisionTree& other) const { return nodes_ == other.nodes_; }

 private:
  std::vector<TreeNode> nodes_;
};

struct NodeStats {
  std::size_t sample_count = 0;
  double sample_fraction = 0.0;
  // Leaves only; zero for branches.
  std::size_t correct_count = 0;
  double leaf_accuracy = 0.0;

  bool operator==(const NodeStats&) const = default;
};

struct TreeMetrics {
  std::size_t sample_count = 0;
  std::size_t correct_count = 0;
  double accuracy = 0.0;
  double objective = 0.0;
  int height = 0;
  std::size_t leaf_count = 0;
  // Indexed like DecisionTree::nodes().
  std::vector<NodeStats> node_stats;

  bool operator==(const TreeMetrics&) const = default;
};

struct PathStep {
  int condition = 0;
  bool direction = false;

  bool operator==(const PathStep&) const = default;
};

struct DecisionPath {
  std::vector<PathStep> steps;
  std::uint8_t prediction = 0;
  double leaf_accuracy = 0.0;
  double sample_fraction = 0.0;
  std::size_t sample_count = 0;

  std::vector<int> feature_sequence() const;
  // True when the sample satisfies every step of the rule.
  bool matches(std::span<const std::uint8_t> sample) const;
};

// Regularized objective: misclassification rate plus lambda per leaf. Every
// objective in the library goes through this function so that independently
// enumerated trees compare bit-for-bit.
inline double objective_value(std::size_t errors, std::size_t leaves, std::size_t n,
                              double lambda) {
  return static_cast<double>(errors) / static_cast<double>(n) +
         lambda * static_cast<double>(leaves);
}

// Majority label with ties going to 0.
inline std::uint8_t majority_label(std::size_t positives, std::size_t negatives) {
  return positives > negatives ? 1 : 0;
}

std::uint8_t predict(const DecisionTree& tree, std::span<const std::uint8_t> sample);
TreeMetrics evaluate(const DecisionTree& tree, const Dataset& dataset, double lambda);
std::vector<DecisionPath> extract_paths(const DecisionTree& tree, const TreeMetrics& metrics);

// Lists every way the tree breaks canonical form against the dataset: a
// condition repeated on a path, depth over the cap, a branch with two leaf
// children predicting the same label, an empty leaf, or a leaf that does not
// predict the majority label of its samples. Empty means canonical.
std::vector<std::string> canonical_violations(const DecisionTree& tree, const Dataset& dataset,
                                              int depth_cap);

nlohmann::json tree_to_json(const DecisionTree& tree);
DecisionTree tree_from_json(const nlohmann::json& doc);
// Sorted keys, no whitespace. Defines tree identity.
std::string canonical_serialization(const DecisionTree& tree);

nlohmann::json metrics_to_json(const TreeMetrics& metrics);
TreeMetrics metrics_from_json(const nlohmann::json& doc);

nlohmann::json path_to_json(const DecisionPath& path);

}  // namespace rashomon
