#include "rashomon/sunburst.hpp"

#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "rashomon/error.hpp"

namespace rashomon {

namespace {

struct LayoutWalker {
  const ColorMap& colors;
  int depth_limit;
  std::vector<Sector>& out;
  std::vector<int> path;

  void place_children(const TrieNode& node, double start, double end, int ring) {
    if (ring >= depth_limit || node.children.empty()) return;
    std::size_t total = 0;
    for (const auto& c : node.children) total += c.descendant_tree_ids.size();
    if (total == 0) return;

    const double width = end - start;
    std::size_t cumulative = 0;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const auto& child = node.children[i];
      const double a = start + width * static_cast<double>(cumulative) / static_cast<double>(total);
      cumulative += child.descendant_tree_ids.size();
      const double b = i + 1 == node.children.size()
                           ? end
                           : start + width * static_cast<double>(cumulative) / static_cast<double>(total);

      Sector s;
      path.push_back(child.key);
      s.node_path = path;
      s.ring = ring;
      s.start_angle = a;
      s.end_angle = b;
      s.tree_count = child.descendant_tree_ids.size();
      if (child.is_leaf()) {
        s.kind = SectorKind::kLeaf;
        s.color = colors.leaf_gray;
      } else {
        const auto& c = colors.condition(child.key);
        s.kind = SectorKind::kCondition;
        s.color = c.rgb;
        s.feature_index = c.feature_index;
        s.luminance_rank = c.luminance_rank;
      }
      out.push_back(std::move(s));
      place_children(child, a, b, ring + 1);
      path.pop_back();
    }
  }
};

}  // namespace

std::vector<Sector> layout(const RuleTrie& trie, int depth_limit) {
  if (depth_limit < 1) throw InvalidDepth("depth limit must be at least 1");
  const auto colors = assign_colors(trie.conditions());
  std::vector<Sector> sectors;
  LayoutWalker walker{colors, depth_limit, sectors, {}};
  walker.place_children(trie.root(), 0.0, 2.0 * std::numbers::pi, 0);
  return sectors;
}

double round_angle(double radians) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", radians);
  return std::strtod(buffer, nullptr);
}

nlohmann::json sector_to_json(const Sector& s) {
  nlohmann::json path = nlohmann::json::array();
  for (int k : s.node_path) path.push_back(k == TrieNode::kLeafKey ? nlohmann::json("_leaf") : nlohmann::json(k));
  nlohmann::json j = {{"path", std::move(path)},
                      {"ring", s.ring},
                      {"start", round_angle(s.start_angle)},
                      {"end", round_angle(s.end_angle)},
                      {"kind", s.kind == SectorKind::kLeaf ? "leaf" : "condition"},
                      {"trees", s.tree_count},
                      {"color", s.color.hex()}};
  if (s.kind == SectorKind::kCondition) {
    j["feature_index"] = s.feature_index;
    j["luminance_rank"] = s.luminance_rank;
  }
  return j;
}

nlohmann::json layout_document(const std::vector<Sector>& sectors, int depth_limit) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& s : sectors) list.push_back(sector_to_json(s));
  return {{"depth", depth_limit}, {"sectors", std::move(list)}};
}

}  // namespace rashomon
