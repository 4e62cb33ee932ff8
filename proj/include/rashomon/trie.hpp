#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <json.hpp>

#include "rashomon/dataset.hpp"
#include "rashomon/enumerator.hpp"

namespace rashomon {

// Node of the decision-rule trie. Keys are split-condition ids; kLeafKey marks
// the end of a rule.
struct TrieNode {
  static constexpr int kLeafKey = -1;
  static constexpr int kRootKey = -2;

  int key = kLeafKey;
  std::vector<TrieNode> children;
  std::set<int> descendant_tree_ids;
  // LEAF nodes only.
  std::set<int> linked_tree_ids;
  std::size_t path_link_count = 0;

  bool is_leaf() const { return key == kLeafKey; }
  bool operator==(const TrieNode&) const = default;
};

struct TrieTreeInfo {
  int height = 0;
  std::size_t leaf_count = 0;
  // Feature sequence of every decision path, in leaf order.
  std::vector<std::vector<int>> rules;
  bool operator==(const TrieTreeInfo&) const = default;
};

class RuleTrie {
 public:
  const TrieNode& root() const { return root_; }
  // Maximum height among the trees the trie covers.
  int height() const { return height_; }
  std::size_t total_trees() const { return root_.descendant_tree_ids.size(); }
  std::size_t total_path_links() const;
  const std::vector<SplitCondition>& conditions() const { return conditions_; }
  const std::map<int, TrieTreeInfo>& trees() const { return trees_; }
  // Condition ids from the original root down to this trie's root.
  const std::vector<int>& prefix() const { return prefix_; }

  bool operator==(const RuleTrie&) const = default;

 private:
  friend RuleTrie build_trie(const RashomonSet& set);
  friend RuleTrie subtrie(const RuleTrie& trie, const std::vector<int>& prefix);
  friend RuleTrie restrict_trie(const RuleTrie& trie, const std::set<int>& keep);
  static RuleTrie from_rules(const std::vector<SplitCondition>& conditions,
                             const std::map<int, TrieTreeInfo>& trees, const std::vector<int>& prefix,
                             const std::set<int>& keep);

  TrieNode root_;
  int height_ = 0;
  std::vector<SplitCondition> conditions_;
  // Every tree the trie was built from, including those no longer reachable
  // after restrict(); lookup table for ids.
  std::map<int, TrieTreeInfo> trees_;
  std::vector<int> prefix_;
};

// Throws EmptySetError for an empty set.
RuleTrie build_trie(const RashomonSet& set);
// Re-roots at the node addressed by a condition-id prefix. Throws PrefixNotFound.
RuleTrie subtrie(const RuleTrie& trie, const std::vector<int>& prefix);
// Keeps only the given trees, dropping nodes left without descendants.
// Throws UnknownTreeId.
RuleTrie restrict_trie(const RuleTrie& trie, const std::set<int>& keep);

// Orders siblings in place: LEAF first, then condition sectors grouped by
// source feature with groups by total tree count descending and members by
// count descending. Ties fall back to first appearance / condition id.
void order_siblings(std::vector<TrieNode>& children, const std::vector<SplitCondition>& conditions);

// Nested hierarchy document: {k, n, p, t, c} records plus condition and tree
// summaries at the top level.
nlohmann::json hierarchy_document(const RuleTrie& trie, const RashomonSet& set);

}  // namespace rashomon
