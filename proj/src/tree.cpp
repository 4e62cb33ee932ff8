#include "rashomon/tree.hpp"

#include <algorithm>
#include <functional>

#include "rashomon/error.hpp"

namespace rashomon {

namespace {

void append_shifted(std::vector<TreeNode>& out, const std::vector<TreeNode>& src, int offset) {
  for (auto n : src) {
    if (!n.is_leaf()) {
      n.false_child += offset;
      n.true_child += offset;
    }
    out.push_back(n);
  }
}

}  // namespace

DecisionTree DecisionTree::leaf(std::uint8_t prediction) {
  if (prediction > 1) throw ValidationError("leaf prediction must be 0 or 1");
  DecisionTree t;
  TreeNode n;
  n.prediction = prediction;
  t.nodes_.push_back(n);
  return t;
}

DecisionTree DecisionTree::branch(int condition, const DecisionTree& if_false,
                                  const DecisionTree& if_true) {
  if (condition < 0) throw ValidationError("condition id must be non-negative");
  DecisionTree t;
  t.nodes_.reserve(1 + if_false.nodes_.size() + if_true.nodes_.size());
  TreeNode n;
  n.condition = condition;
  n.false_child = 1;
  n.true_child = 1 + static_cast<int>(if_false.nodes_.size());
  t.nodes_.push_back(n);
  append_shifted(t.nodes_, if_false.nodes_, 1);
  append_shifted(t.nodes_, if_true.nodes_, n.true_child);
  return t;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int DecisionTree::height() const {
  std::function<int(int)> walk = [&](int i) -> int {
    const auto& n = node(i);
    if (n.is_leaf()) return 0;
    return 1 + std::max(walk(n.false_child), walk(n.true_child));
  };
  return walk(0);
}

std::vector<int> DecisionPath::feature_sequence() const {
  std::vector<int> seq;
  seq.reserve(steps.size());
  for (const auto& s : steps) seq.push_back(s.condition);
  return seq;
}

bool DecisionPath::matches(std::span<const std::uint8_t> sample) const {
  return std::all_of(steps.begin(), steps.end(), [&](const PathStep& s) {
    return (sample[static_cast<std::size_t>(s.condition)] == 1) == s.direction;
  });
}

namespace {

int max_condition(const DecisionTree& tree) {
  int m = -1;
  for (const auto& n : tree.nodes()) m = std::max(m, n.condition);
  return m;
}

int route(const DecisionTree& tree, std::span<const std::uint8_t> sample,
          std::vector<std::size_t>* visit_counts) {
  int i = 0;
  for (;;) {
    if (visit_counts) ++(*visit_counts)[static_cast<std::size_t>(i)];
    const auto& n = tree.node(i);
    if (n.is_leaf()) return i;
    i = sample[static_cast<std::size_t>(n.condition)] == 1 ? n.true_child : n.false_child;
  }
}

}  // namespace

std::uint8_t predict(const DecisionTree& tree, std::span<const std::uint8_t> sample) {
  if (max_condition(tree) >= static_cast<int>(sample.size()))
    throw DimensionError("sample has " + std::to_string(sample.size()) +
                         " values but the tree tests condition " +
                         std::to_string(max_condition(tree)));
  return tree.node(route(tree, sample, nullptr)).prediction;
}

TreeMetrics evaluate(const DecisionTree& tree, const Dataset& dataset, double lambda) {
  if (max_condition(tree) >= static_cast<int>(dataset.condition_count()))
    throw DimensionError("tree tests condition " + std::to_string(max_condition(tree)) +
                         " but the dataset has " + std::to_string(dataset.condition_count()));
  const auto& nodes = tree.nodes();
  std::vector<std::size_t> visits(nodes.size(), 0);
  std::vector<std::size_t> correct(nodes.size(), 0);
  for (std::size_t r = 0; r < dataset.sample_count(); ++r) {
    int leaf = route(tree, dataset.samples()[r], &visits);
    if (nodes[static_cast<std::size_t>(leaf)].prediction == dataset.labels()[r])
      ++correct[static_cast<std::size_t>(leaf)];
  }

  TreeMetrics m;
  const auto n = dataset.sample_count();
  m.sample_count = n;
  m.height = tree.height();
  m.leaf_count = tree.leaf_count();
  m.node_stats.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto& s = m.node_stats[i];
    s.sample_count = visits[i];
    s.sample_fraction = static_cast<double>(visits[i]) / static_cast<double>(n);
    if (nodes[i].is_leaf()) {
      s.correct_count = correct[i];
      s.leaf_accuracy =
          visits[i] == 0 ? 0.0 : static_cast<double>(correct[i]) / static_cast<double>(visits[i]);
      m.correct_count += correct[i];
    }
  }
  m.accuracy = static_cast<double>(m.correct_count) / static_cast<double>(n);
  m.objective = objective_value(n - m.correct_count, m.leaf_count, n, lambda);
  return m;
}

std::vector<DecisionPath> extract_paths(const DecisionTree& tree, const TreeMetrics& metrics) {
  if (metrics.node_stats.size() != tree.nodes().size())
    throw DimensionError("metrics were computed for a different tree");
  std::vector<DecisionPath> paths;
  std::vector<PathStep> steps;
  std::function<void(int)> walk = [&](int i) {
    const auto& n = tree.node(i);
    if (n.is_leaf()) {
      const auto& s = metrics.node_stats[static_cast<std::size_t>(i)];
      paths.push_back({steps, n.prediction, s.leaf_accuracy, s.sample_fraction, s.sample_count});
      return;
    }
    steps.push_back({n.condition, false});
    walk(n.false_child);
    steps.back().direction = true;
    walk(n.true_child);
    steps.pop_back();
  };
  walk(0);
  return paths;
}

std::vector<std::string> canonical_violations(const DecisionTree& tree, const Dataset& dataset,
                                              int depth_cap) {
  std::vector<std::string> problems;
  if (tree.height() > depth_cap)
    problems.push_back("height " + std::to_string(tree.height()) + " exceeds cap " +
                       std::to_string(depth_cap));

  std::vector<int> on_path;
  std::function<void(int)> walk = [&](int i) {
    const auto& n = tree.node(i);
    if (n.is_leaf()) return;
    if (std::find(on_path.begin(), on_path.end(), n.condition) != on_path.end())
      problems.push_back("condition " + std::to_string(n.condition) + " repeats on a path");
    const auto& f = tree.node(n.false_child);
    const auto& t = tree.node(n.true_child);
    if (f.is_leaf() && t.is_leaf() && f.prediction == t.prediction)
      problems.push_back("redundant split on condition " + std::to_string(n.condition));
    on_path.push_back(n.condition);
    walk(n.false_child);
    walk(n.true_child);
    on_path.pop_back();
  };
  walk(0);

  if (!problems.empty()) return problems;

  const auto& nodes = tree.nodes();
  std::vector<std::size_t> visits(nodes.size(), 0), positives(nodes.size(), 0);
  for (std::size_t r = 0; r < dataset.sample_count(); ++r) {
    int leaf = route(tree, dataset.samples()[r], &visits);
    positives[static_cast<std::size_t>(leaf)] += dataset.labels()[r];
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_leaf()) continue;
    if (visits[i] == 0) {
      problems.push_back("leaf " + std::to_string(i) + " receives no samples");
    } else if (nodes[i].prediction != majority_label(positives[i], visits[i] - positives[i])) {
      problems.push_back("leaf " + std::to_string(i) + " does not predict its majority label");
    }
  }
  return problems;
}

nlohmann::json tree_to_json(const DecisionTree& tree) {
  std::function<nlohmann::json(int)> build = [&](int i) -> nlohmann::json {
    const auto& n = tree.node(i);
    if (n.is_leaf()) return {{"type", "leaf"}, {"prediction", n.prediction}};
    return {{"type", "branch"},
            {"condition", n.condition},
            {"false", build(n.false_child)},
            {"true", build(n.true_child)}};
  };
  return build(0);
}

DecisionTree tree_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("type"))
    throw SchemaError("tree node must be an object with a \"type\"");
  const auto& type = doc.at("type");
  if (type == "leaf") {
    const auto& p = doc.at("prediction");
    if (!p.is_number_integer() || (p.get<int>() != 0 && p.get<int>() != 1))
      throw SchemaError("leaf prediction must be 0 or 1");
    return DecisionTree::leaf(p.get<std::uint8_t>());
  }
  if (type == "branch") {
    const auto& c = doc.at("condition");
    if (!c.is_number_integer() || c.get<int>() < 0)
      throw SchemaError("branch condition must be a non-negative integer");
    return DecisionTree::branch(c.get<int>(), tree_from_json(doc.at("false")),
                                tree_from_json(doc.at("true")));
  }
  throw SchemaError("unknown tree node type " + type.dump());
}

std::string canonical_serialization(const DecisionTree& tree) {
  return tree_to_json(tree).dump();
}

nlohmann::json metrics_to_json(const TreeMetrics& m) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& s : m.node_stats)
    nodes.push_back({{"sample_count", s.sample_count},
                     {"sample_fraction", s.sample_fraction},
                     {"correct_count", s.correct_count},
                     {"leaf_accuracy", s.leaf_accuracy}});
  return {{"sample_count", m.sample_count}, {"correct_count", m.correct_count},
          {"accuracy", m.accuracy},         {"objective", m.objective},
          {"height", m.height},             {"leaf_count", m.leaf_count},
          {"nodes", std::move(nodes)}};
}

TreeMetrics metrics_from_json(const nlohmann::json& doc) {
  TreeMetrics m;
  try {
    m.sample_count = doc.at("sample_count").get<std::size_t>();
    m.correct_count = doc.at("correct_count").get<std::size_t>();
    m.accuracy = doc.at("accuracy").get<double>();
    m.objective = doc.at("objective").get<double>();
    m.height = doc.at("height").get<int>();
    m.leaf_count = doc.at("leaf_count").get<std::size_t>();
    for (const auto& s : doc.at("nodes"))
      m.node_stats.push_back({s.at("sample_count").get<std::size_t>(),
                              s.at("sample_fraction").get<double>(),
                              s.at("correct_count").get<std::size_t>(),
                              s.at("leaf_accuracy").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed metrics: ") + e.what());
  }
  return m;
}

nlohmann::json path_to_json(const DecisionPath& path) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : path.steps) steps.push_back({{"condition", s.condition}, {"direction", s.direction}});
  return {{"steps", std::move(steps)},
          {"prediction", path.prediction},
          {"leaf_accuracy", path.leaf_accuracy},
          {"sample_fraction", path.sample_fraction},
          {"sample_count", path.sample_count}};
}

}  // namespace rashomon
