#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "rashomon/error.hpp"
#include "rashomon/trie.hpp"
#include "support/fixtures.hpp"

using namespace rashomon;
using namespace rashomon::testing;

namespace {

const TrieNode& child(const TrieNode& node, int key) {
  auto it = std::find_if(node.children.begin(), node.children.end(), [&](const TrieNode& c) { return c.key == key; });
  REQUIRE(it != node.children.end());
  return *it;
}

std::vector<int> keys(const TrieNode& node) {
  std::vector<int> out;
  for (const auto& c : node.children) out.push_back(c.key);
  return out;
}

void check_node_invariants(const TrieNode& node) {
  std::set<int> seen;
  for (const auto& c : node.children) CHECK(seen.insert(c.key).second);
  if (node.is_leaf()) {
    CHECK(node.children.empty());
    CHECK(node.descendant_tree_ids == node.linked_tree_ids);
    CHECK(node.path_link_count >= node.linked_tree_ids.size());
    return;
  }
  std::set<int> uni;
  for (const auto& c : node.children) {
    uni.insert(c.descendant_tree_ids.begin(), c.descendant_tree_ids.end());
    check_node_invariants(c);
  }
  CHECK(uni == node.descendant_tree_ids);
}

std::set<int> linked_ids(const TrieNode& node) {
  std::set<int> out = node.linked_tree_ids;
  for (const auto& c : node.children) {
    auto sub = linked_ids(c);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

RashomonSet d2_set() { return enumerate_rashomon(d2(), {0.05, 1.01, 2}); }

}  // namespace

TEST_CASE("trie of a single stump") {
  auto set = enumerate_rashomon(d1(), {0.1, 1.5, 1});
  auto trie = build_trie(set);
  REQUIRE(trie.root().children.size() == 1);
  const auto& f0 = trie.root().children[0];
  CHECK(f0.key == 0);
  REQUIRE(f0.children.size() == 1);
  const auto& leaf_node = f0.children[0];
  CHECK(leaf_node.is_leaf());
  CHECK(leaf_node.linked_tree_ids == std::set<int>{0});
  CHECK(leaf_node.path_link_count == 2);
  CHECK(trie.height() == 1);
  CHECK(trie.total_path_links() == 2);
}

TEST_CASE("D2 trie structure") {
  auto set = d2_set();
  auto trie = build_trie(set);
  CHECK(keys(trie.root()) == std::vector<int>{0, 1});
  CHECK(trie.total_path_links() == 6);
  CHECK(trie.total_trees() == 2);
  CHECK(trie.height() == 2);

  const auto& f0 = child(trie.root(), 0);
  CHECK(keys(f0) == std::vector<int>{TrieNode::kLeafKey, 1});
  CHECK(child(f0, TrieNode::kLeafKey).path_link_count == 1);
  const auto& f0f1 = child(f0, 1);
  REQUIRE(f0f1.children.size() == 1);
  CHECK(f0f1.children[0].path_link_count == 2);
  CHECK(f0f1.children[0].linked_tree_ids == std::set<int>{0});

  const auto& f1 = child(trie.root(), 1);
  CHECK(keys(f1) == std::vector<int>{TrieNode::kLeafKey, 0});
  CHECK(child(child(f1, 0), TrieNode::kLeafKey).path_link_count == 2);
  check_node_invariants(trie.root());
}

TEST_CASE("subtrie re-roots at a prefix") {
  auto trie = build_trie(d2_set());
  CHECK(subtrie(trie, {}) == trie);
  auto sub = subtrie(trie, {0});
  CHECK(sub.height() == 2);
  CHECK(sub.root().descendant_tree_ids.size() == 1);
  CHECK(sub.prefix() == std::vector<int>{0});
  CHECK(keys(sub.root()) == std::vector<int>{TrieNode::kLeafKey, 1});
  CHECK_THROWS_AS(subtrie(trie, {2}), PrefixNotFound);
  CHECK_THROWS_AS(subtrie(trie, {0, 1, TrieNode::kLeafKey}), PrefixNotFound);
  // original untouched
  CHECK(trie.total_trees() == 2);
}

TEST_CASE("restrict keeps only chosen trees") {
  auto set = d2_set();
  auto trie = build_trie(set);
  CHECK(restrict_trie(trie, {0, 1}) == trie);

  auto none = restrict_trie(trie, {});
  CHECK(none.root().children.empty());
  CHECK(none.height() == 0);
  CHECK(none.total_path_links() == 0);

  auto only_a = restrict_trie(trie, {0});
  CHECK(keys(only_a.root()) == std::vector<int>{0});
  CHECK(only_a.total_path_links() == 3);
  CHECK_THROWS_AS(restrict_trie(trie, {7}), UnknownTreeId);

  // restrict after zooming keeps the zoomed frame
  auto zoomed = restrict_trie(subtrie(trie, {1}), {0, 1});
  CHECK(zoomed == subtrie(trie, {1}));
}

TEST_CASE("empty set is rejected") {
  RashomonSet empty;
  CHECK_THROWS_AS(build_trie(empty), EmptySetError);
}

TEST_CASE("trie conservation and order independence on random sets") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 40; ++i) {
    auto d = random_dataset(rng, 8 + rng() % 30, 2 + rng() % 4, i % 2 ? std::vector<std::string>{"a", "b"} : std::vector<std::string>{});
    auto set = enumerate_rashomon(d, {0.01, 1.3, 3});
    auto trie = build_trie(set);

    std::size_t leaves = 0;
    int height = 0;
    std::set<int> ids;
    for (const auto& m : set.members) {
      leaves += m.tree.leaf_count();
      height = std::max(height, m.tree.height());
      ids.insert(m.id);
    }
    CHECK(trie.total_path_links() == leaves);
    CHECK(trie.height() == height);
    CHECK(trie.root().descendant_tree_ids == ids);
    CHECK(linked_ids(trie.root()) == ids);
    check_node_invariants(trie.root());

    auto shuffled = set;
    std::shuffle(shuffled.members.begin(), shuffled.members.end(), rng);
    CHECK(build_trie(shuffled) == trie);

    std::set<int> keep;
    for (int id : ids)
      if (rng() % 2) keep.insert(id);
    auto r = restrict_trie(trie, keep);
    std::size_t kept_leaves = 0;
    for (int id : keep) kept_leaves += set.member(id).tree.leaf_count();
    CHECK(r.total_path_links() == kept_leaves);
    CHECK(r.root().descendant_tree_ids == keep);
    check_node_invariants(r.root());
  }
}

TEST_CASE("siblings are grouped by feature and sorted by count") {
  std::vector<SplitCondition> conditions = {
      parse_condition_header(0, "age:<26"), parse_condition_header(1, "prior:>3"),
      parse_condition_header(2, "age:>45"), parse_condition_header(3, "prior:=0"),
      parse_condition_header(4, "sex:m")};
  auto node = [](int key, std::initializer_list<int> ids) {
    TrieNode n;
    n.key = key;
    n.descendant_tree_ids = ids;
    return n;
  };
  // group totals: age 1+2 = 3, prior 4+1 = 5, sex 3
  std::vector<TrieNode> children = {node(0, {1}), node(1, {1, 2, 3, 4}), node(2, {5, 6}),
                                    node(TrieNode::kLeafKey, {9}), node(3, {7}), node(4, {1, 2, 3})};
  order_siblings(children, conditions);
  std::vector<int> order;
  for (const auto& c : children) order.push_back(c.key);
  CHECK(order == std::vector<int>{TrieNode::kLeafKey, 1, 3, 2, 0, 4});
}

TEST_CASE("hierarchy document mirrors the trie") {
  auto set = d2_set();
  auto doc = hierarchy_document(build_trie(set), set);
  CHECK(doc["total_path_links"] == 6);
  CHECK(doc["height"] == 2);
  const auto& root = doc["hierarchy"];
  CHECK(root["n"] == 2);
  CHECK(root["c"].size() == 2);
  CHECK(root["c"][0]["k"] == 0);
  CHECK(root["c"][0]["c"][0]["k"] == "_leaf");
  CHECK(root["c"][0]["c"][0]["p"] == 1);
  CHECK(root["c"][0]["c"][0]["t"] == nlohmann::json::array({0}));
  CHECK(doc["trees"]["1"]["leaf_count"] == 3);
}
