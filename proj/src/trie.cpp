#include "rashomon/trie.hpp"

#include <algorithm>
#include <functional>

#include "rashomon/error.hpp"

namespace rashomon {

namespace {

std::size_t count_links(const TrieNode& node) {
  if (node.is_leaf()) return node.path_link_count;
  std::size_t total = 0;
  for (const auto& c : node.children) total += count_links(c);
  return total;
}

void insert_path(TrieNode& root, int tree_id, const std::vector<int>& sequence) {
  TrieNode* node = &root;
  node->descendant_tree_ids.insert(tree_id);
  auto descend = [&](int key) {
    auto it = std::find_if(node->children.begin(), node->children.end(),
                           [&](const TrieNode& c) { return c.key == key; });
    if (it == node->children.end()) {
      TrieNode child;
      child.key = key;
      node->children.push_back(std::move(child));
      it = std::prev(node->children.end());
    }
    node = &*it;
    node->descendant_tree_ids.insert(tree_id);
  };
  for (int key : sequence) descend(key);
  descend(TrieNode::kLeafKey);
  node->linked_tree_ids.insert(tree_id);
  ++node->path_link_count;
}

void order_recursively(TrieNode& node, const std::vector<SplitCondition>& conditions) {
  order_siblings(node.children, conditions);
  for (auto& c : node.children) order_recursively(c, conditions);
}

int max_height(const std::set<int>& ids, const std::map<int, TrieTreeInfo>& trees) {
  int h = 0;
  for (int id : ids) h = std::max(h, trees.at(id).height);
  return h;
}

}  // namespace

std::size_t RuleTrie::total_path_links() const { return count_links(root_); }

void order_siblings(std::vector<TrieNode>& children, const std::vector<SplitCondition>& conditions) {
  std::map<std::string, std::size_t> group_total;
  std::map<std::string, std::size_t> group_rank;
  for (const auto& c : conditions) group_rank.emplace(c.source_feature, group_rank.size());
  auto source_of = [&](int key) -> const std::string& {
    return conditions.at(static_cast<std::size_t>(key)).source_feature;
  };
  for (const auto& child : children)
    if (!child.is_leaf()) group_total[source_of(child.key)] += child.descendant_tree_ids.size();

  std::stable_sort(children.begin(), children.end(), [&](const TrieNode& a, const TrieNode& b) {
    if (a.is_leaf() != b.is_leaf()) return a.is_leaf();
    if (a.is_leaf()) return false;
    const auto& ga = source_of(a.key);
    const auto& gb = source_of(b.key);
    if (ga != gb) {
      if (group_total[ga] != group_total[gb]) return group_total[ga] > group_total[gb];
      return group_rank[ga] < group_rank[gb];
    }
    if (a.descendant_tree_ids.size() != b.descendant_tree_ids.size())
      return a.descendant_tree_ids.size() > b.descendant_tree_ids.size();
    return a.key < b.key;
  });
}

RuleTrie RuleTrie::from_rules(const std::vector<SplitCondition>& conditions,
                              const std::map<int, TrieTreeInfo>& trees,
                              const std::vector<int>& prefix, const std::set<int>& keep) {
  RuleTrie trie;
  trie.conditions_ = conditions;
  trie.trees_ = trees;
  trie.prefix_ = prefix;
  trie.root_.key = TrieNode::kRootKey;
  for (int id : keep) {
    for (const auto& rule : trees.at(id).rules) {
      if (rule.size() < prefix.size() || !std::equal(prefix.begin(), prefix.end(), rule.begin()))
        continue;
      insert_path(trie.root_, id, {rule.begin() + static_cast<std::ptrdiff_t>(prefix.size()), rule.end()});
    }
  }
  order_recursively(trie.root_, conditions);
  trie.height_ = max_height(trie.root_.descendant_tree_ids, trees);
  return trie;
}

RuleTrie build_trie(const RashomonSet& set) {
  if (set.members.empty()) throw EmptySetError("cannot build a trie from an empty Rashomon set");
  std::map<int, TrieTreeInfo> trees;
  std::set<int> ids;
  for (const auto& m : set.members) {
    auto& info = trees[m.id];
    info.height = m.tree.height();
    info.leaf_count = m.tree.leaf_count();
    for (const auto& p : extract_paths(m.tree, m.metrics)) info.rules.push_back(p.feature_sequence());
    ids.insert(m.id);
  }
  return RuleTrie::from_rules(set.conditions, trees, {}, ids);
}

RuleTrie subtrie(const RuleTrie& trie, const std::vector<int>& prefix) {
  const TrieNode* node = &trie.root_;
  for (int key : prefix) {
    auto it = std::find_if(node->children.begin(), node->children.end(),
                           [&](const TrieNode& c) { return c.key == key && !c.is_leaf(); });
    if (key == TrieNode::kLeafKey || it == node->children.end())
      throw PrefixNotFound("no trie node at the requested prefix");
    node = &*it;
  }
  RuleTrie out;
  out.conditions_ = trie.conditions_;
  out.trees_ = trie.trees_;
  out.prefix_ = trie.prefix_;
  out.prefix_.insert(out.prefix_.end(), prefix.begin(), prefix.end());
  out.root_ = *node;
  out.root_.key = TrieNode::kRootKey;
  out.height_ = max_height(out.root_.descendant_tree_ids, out.trees_);
  return out;
}

RuleTrie restrict_trie(const RuleTrie& trie, const std::set<int>& keep) {
  for (int id : keep)
    if (!trie.trees_.contains(id)) throw UnknownTreeId(id);
  std::set<int> present;
  std::set_intersection(keep.begin(), keep.end(), trie.root_.descendant_tree_ids.begin(),
                        trie.root_.descendant_tree_ids.end(), std::inserter(present, present.end()));
  return RuleTrie::from_rules(trie.conditions_, trie.trees_, trie.prefix_, present);
}

nlohmann::json hierarchy_document(const RuleTrie& trie, const RashomonSet& set) {
  std::function<nlohmann::json(const TrieNode&)> encode = [&](const TrieNode& node) {
    nlohmann::json j;
    j["k"] = node.is_leaf() ? nlohmann::json("_leaf") : nlohmann::json(node.key);
    j["n"] = node.descendant_tree_ids.size();
    if (node.is_leaf()) {
      j["p"] = node.path_link_count;
      j["t"] = node.linked_tree_ids;
    }
    nlohmann::json children = nlohmann::json::array();
    for (const auto& c : node.children) children.push_back(encode(c));
    j["c"] = std::move(children);
    return j;
  };

  nlohmann::json trees = nlohmann::json::object();
  for (int id : trie.root().descendant_tree_ids) {
    const auto& m = set.member(id);
    trees[std::to_string(id)] = {{"accuracy", m.metrics.accuracy},
                                 {"objective", m.metrics.objective},
                                 {"height", m.metrics.height},
                                 {"leaf_count", m.metrics.leaf_count}};
  }
  nlohmann::json root = encode(trie.root());
  root["k"] = nullptr;
  return {{"hierarchy", std::move(root)},
          {"height", trie.height()},
          {"total_trees", trie.total_trees()},
          {"total_path_links", trie.total_path_links()},
          {"conditions", conditions_to_json(trie.conditions())},
          {"trees", std::move(trees)}};
}

}  // namespace rashomon
