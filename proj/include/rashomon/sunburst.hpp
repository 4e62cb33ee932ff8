#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "rashomon/color.hpp"
#include "rashomon/trie.hpp"

namespace rashomon {

enum class SectorKind { kCondition, kLeaf };

// One annular sector. Angles are radians measured clockwise from 12 o'clock.
struct Sector {
  std::vector<int> node_path;  // trie keys from the root; TrieNode::kLeafKey for LEAF
  int ring = 0;
  double start_angle = 0.0;
  double end_angle = 0.0;
  SectorKind kind = SectorKind::kCondition;
  std::size_t tree_count = 0;
  Rgb color;
  int feature_index = -1;   // -1 for LEAF sectors
  int luminance_rank = -1;

  double width() const { return end_angle - start_angle; }
};

inline constexpr int kAllRings = std::numeric_limits<int>::max();

// Sectors in pre-order (parent before children). Rings at or beyond
// depth_limit are omitted. Throws InvalidDepth when depth_limit < 1.
std::vector<Sector> layout(const RuleTrie& trie, int depth_limit);

// Rounds to 12 significant digits, the precision of the layout document.
double round_angle(double radians);

nlohmann::json sector_to_json(const Sector& sector);
nlohmann::json layout_document(const std::vector<Sector>& sectors, int depth_limit);

}  // namespace rashomon
