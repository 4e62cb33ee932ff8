#include "rashomon/enumerator.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "rashomon/error.hpp"

namespace rashomon {

void EnumerationConfig::validate() const {
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
  if (!(epsilon >= 1.0)) throw ConfigError("epsilon must be at least 1");
  if (depth_cap < 0 || depth_cap > kMaxDepthCap)
    throw ConfigError("depth cap must be within [0, " + std::to_string(kMaxDepthCap) + "]");
}

const RashomonMember& RashomonSet::member(std::int64_t id) const {
  if (!contains(id)) throw UnknownTreeId(id);
  return members[static_cast<std::size_t>(id)];
}

std::uint64_t state_space_estimate(std::size_t condition_count, int depth_cap) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t level = 1;
  for (int k = 0; k <= depth_cap; ++k) {
    if (k > 0) {
      if (static_cast<std::size_t>(k) > condition_count) break;
      std::uint64_t factor = 2 * (condition_count - static_cast<std::size_t>(k) + 1);
      if (level > kMax / factor) return kMax;
      level *= factor;
    }
    if (total > kMax - level) return kMax;
    total += level;
  }
  return total;
}

namespace {

constexpr double kPruneTolerance = 1e-9;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::size_t n) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

  SampleSet operator&(const SampleSet& o) const {
    SampleSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  SampleSet without(const SampleSet& o) const {
    SampleSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
    return r;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  bool operator==(const SampleSet&) const = default;

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (auto w : words_) h = (h ^ w) * 1099511628211ull;
    return h;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct StateKey {
  SampleSet samples;
  int depth;
  bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const {
    return k.samples.hash() ^ (static_cast<std::size_t>(k.depth) * 0x9e3779b97f4a7c15ull);
  }
};

// Exact optimum of a subproblem over canonical subtrees, split by root kind so
// the redundant-leaf-pair exclusion can be honoured when combining children.
struct SubproblemBound {
  double leaf_cost = 0.0;
  std::uint8_t leaf_prediction = 0;
  double branch_cost = kInfinity;

  double best() const { return std::min(leaf_cost, branch_cost); }
};

struct Subtree {
  std::size_t errors = 0;
  std::size_t leaves = 0;
  double cost = 0.0;
  DecisionTree tree;
};

class Search {
 public:
  Search(const Dataset& dataset, double lambda, const EnumerationOptions& options, int depth_cap)
      : n_(dataset.sample_count()),
        lambda_(lambda),
        budget_(options.node_budget),
        estimate_(state_space_estimate(dataset.condition_count(), depth_cap)),
        labels_(n_),
        all_(n_) {
    columns_.assign(dataset.condition_count(), SampleSet(n_));
    for (std::size_t r = 0; r < n_; ++r) {
      all_.set(r);
      if (dataset.labels()[r]) labels_.set(r);
      for (std::size_t c = 0; c < dataset.condition_count(); ++c)
        if (dataset.value(r, c)) columns_[c].set(r);
    }
  }

  const SampleSet& all() const { return all_; }
  std::size_t condition_count() const { return columns_.size(); }

  // Fills the memo for every subproblem reachable from the root. Single-threaded.
  const SubproblemBound& solve(const SampleSet& s, int depth) {
    StateKey key{s, depth};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    charge(1);

    SubproblemBound b;
    std::size_t positives = (s & labels_).count();
    std::size_t total = s.count();
    b.leaf_prediction = majority_label(positives, total - positives);
    b.leaf_cost = objective_value(b.leaf_prediction ? total - positives : positives, 1, n_, lambda_);

    if (depth > 0) {
      for (const auto& column : columns_) {
        SampleSet t = s & column;
        SampleSet f = s.without(column);
        if (t.empty() || f.empty()) continue;
        const SubproblemBound bf = solve(f, depth - 1);
        const SubproblemBound& bt = solve(t, depth - 1);
        double best = std::min({bf.leaf_cost + bt.branch_cost, bf.branch_cost + bt.leaf_cost,
                                bf.branch_cost + bt.branch_cost});
        if (bf.leaf_prediction != bt.leaf_prediction)
          best = std::min(best, bf.leaf_cost + bt.leaf_cost);
        b.branch_cost = std::min(b.branch_cost, best);
      }
    }
    return memo_.emplace(std::move(key), b).first->second;
  }

  // Read-only after solve(); safe for concurrent callers.
  const SubproblemBound& bound(const SampleSet& s, int depth) const {
    return memo_.at(StateKey{s, depth});
  }

  static constexpr int kAnyRoot = -2;
  static constexpr int kLeafRoot = -1;

  // All canonical subtrees of (s, depth) whose cost is within budget (plus
  // tolerance). `root` narrows the candidates to the single leaf or to splits
  // on one condition.
  std::vector<Subtree> enumerate(const SampleSet& s, int depth, double budget,
                                 int root = kAnyRoot) const {
    charge(1);
    std::vector<Subtree> out;
    const auto& b = bound(s, depth);
    if (b.best() > budget + kPruneTolerance) return out;

    if (root < 0 && b.leaf_cost <= budget + kPruneTolerance) {
      std::size_t positives = (s & labels_).count();
      std::size_t errors = b.leaf_prediction ? s.count() - positives : positives;
      out.push_back({errors, 1, b.leaf_cost, DecisionTree::leaf(b.leaf_prediction)});
    }
    if (depth == 0 || root == kLeafRoot) return out;

    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (root >= 0 && static_cast<int>(c) != root) continue;
      SampleSet t = s & columns_[c];
      SampleSet f = s.without(columns_[c]);
      if (t.empty() || f.empty()) continue;
      const auto& bf = bound(f, depth - 1);
      const auto& bt = bound(t, depth - 1);
      if (bf.best() + bt.best() > budget + kPruneTolerance) continue;

      auto lefts = enumerate(f, depth - 1, budget - bt.best());
      if (lefts.empty()) continue;
      auto rights = enumerate(t, depth - 1, budget - bf.best());
      for (const auto& l : lefts) {
        for (const auto& r : rights) {
          if (l.leaves == 1 && r.leaves == 1 &&
              l.tree.root().prediction == r.tree.root().prediction)
            continue;
          std::size_t errors = l.errors + r.errors;
          std::size_t leaves = l.leaves + r.leaves;
          double cost = objective_value(errors, leaves, n_, lambda_);
          if (cost > budget + kPruneTolerance) continue;
          charge(1);
          out.push_back({errors, leaves, cost,
                         DecisionTree::branch(static_cast<int>(c), l.tree, r.tree)});
        }
      }
    }
    return out;
  }

 private:
  void charge(std::uint64_t amount) const {
    if (explored_.fetch_add(amount, std::memory_order_relaxed) + amount > budget_)
      throw BudgetExceeded(budget_, estimate_);
  }

  std::size_t n_;
  double lambda_;
  std::uint64_t budget_;
  std::uint64_t estimate_;
  mutable std::atomic<std::uint64_t> explored_{0};
  SampleSet labels_;
  SampleSet all_;
  std::vector<SampleSet> columns_;
  std::unordered_map<StateKey, SubproblemBound, StateKeyHash> memo_;
};

// Root-level candidates within `budget`, split across worker threads by root
// condition. The result order is not meaningful; callers sort.
std::vector<Subtree> enumerate_root(const Search& search, int depth_cap, double budget,
                                    unsigned threads) {
  const int conditions = static_cast<int>(search.condition_count());
  std::vector<int> tasks{Search::kLeafRoot};
  if (depth_cap > 0)
    for (int c = 0; c < conditions; ++c) tasks.push_back(c);

  auto run = [&](int task) { return search.enumerate(search.all(), depth_cap, budget, task); };

  std::vector<Subtree> out;
  threads = std::max(1u, threads);
  if (threads == 1) {
    for (int task : tasks) {
      auto part = run(task);
      std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return out;
  }

  std::vector<std::future<std::vector<Subtree>>> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      std::vector<Subtree> local;
      for (std::size_t i = w; i < tasks.size(); i += threads) {
        auto part = run(tasks[i]);
        std::move(part.begin(), part.end(), std::back_inserter(local));
      }
      return local;
    }));
  }
  for (auto& w : workers) {
    auto part = w.get();
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

struct Candidates {
  double optimal = 0.0;
  std::vector<Subtree> trees;
};

// Enumerates every canonical tree with objective <= epsilon * optimal and
// returns the exact optimal objective alongside.
Candidates search_candidates(const Dataset& dataset, double lambda, double epsilon,
                             int depth_cap, const EnumerationOptions& options) {
  Search search(dataset, lambda, options, depth_cap);
  const double relaxed_optimum = search.solve(search.all(), depth_cap).best();

  auto found = enumerate_root(search, depth_cap, epsilon * relaxed_optimum, options.threads);
  double optimal = kInfinity;
  for (const auto& t : found) optimal = std::min(optimal, t.cost);

  const double threshold = epsilon * optimal + kMembershipSlack;
  std::erase_if(found, [&](const Subtree& t) { return t.cost > threshold; });
  return {optimal, std::move(found)};
}

}  // namespace

RashomonSet assemble_set(const Dataset& dataset, const EnumerationConfig& config,
                         double optimal, std::vector<RashomonMember> members) {
  std::vector<std::pair<std::string, RashomonMember>> keyed;
  keyed.reserve(members.size());
  for (auto& m : members) keyed.emplace_back(canonical_serialization(m.tree), std::move(m));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  RashomonSet set;
  set.config = config;
  set.dataset_hash = dataset.content_hash();
  set.optimal_objective = optimal;
  set.sample_count = dataset.sample_count();
  set.conditions = dataset.conditions();
  set.members.reserve(keyed.size());
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (i > 0 && keyed[i].first == keyed[i - 1].first)
      throw Error("duplicate tree in Rashomon set: " + keyed[i].first);
    auto m = std::move(keyed[i].second);
    m.id = static_cast<int>(i);
    set.members.push_back(std::move(m));
  }
  return set;
}

RashomonSet enumerate_rashomon(const Dataset& dataset, const EnumerationConfig& config,
                               const EnumerationOptions& options) {
  config.validate();
  auto found = search_candidates(dataset, config.lambda, config.epsilon, config.depth_cap, options);

  std::vector<RashomonMember> members;
  members.reserve(found.trees.size());
  for (auto& t : found.trees) {
    auto metrics = evaluate(t.tree, dataset, config.lambda);
    members.push_back({0, std::move(t.tree), std::move(metrics)});
  }
  return assemble_set(dataset, config, found.optimal, std::move(members));
}

OptimalTree optimal_objective(const Dataset& dataset, double lambda, int depth_cap,
                              const EnumerationOptions& options) {
  EnumerationConfig{lambda, 1.0, depth_cap}.validate();
  auto found = search_candidates(dataset, lambda, 1.0, depth_cap, options);

  const Subtree* best = nullptr;
  std::string best_key;
  for (const auto& t : found.trees) {
    if (t.cost != found.optimal) continue;
    auto key = canonical_serialization(t.tree);
    if (!best || key < best_key) {
      best = &t;
      best_key = std::move(key);
    }
  }
  return {found.optimal, best->tree};
}

nlohmann::json config_to_json(const EnumerationConfig& config) {
  return {{"lambda", config.lambda}, {"epsilon", config.epsilon}, {"depth_cap", config.depth_cap}};
}

EnumerationConfig config_from_json(const nlohmann::json& doc) {
  try {
    EnumerationConfig c{doc.at("lambda").get<double>(), doc.at("epsilon").get<double>(),
                        doc.at("depth_cap").get<int>()};
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed config: ") + e.what());
  }
}

nlohmann::json conditions_to_json(const std::vector<SplitCondition>& conditions) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : conditions)
    out.push_back({{"id", c.id},
                   {"name", c.display_name},
                   {"source", c.source_feature},
                   {"range", c.range_label}});
  return out;
}

std::vector<SplitCondition> conditions_from_json(const nlohmann::json& doc) {
  std::vector<SplitCondition> out;
  try {
    for (const auto& c : doc)
      out.push_back({c.at("id").get<int>(), c.at("name").get<std::string>(),
                     c.at("source").get<std::string>(), c.at("range").get<std::string>()});
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed conditions: ") + e.what());
  }
  return out;
}

nlohmann::json set_to_json(const RashomonSet& set) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& m : set.members)
    trees.push_back({{"id", m.id}, {"tree", tree_to_json(m.tree)}, {"metrics", metrics_to_json(m.metrics)}});
  return {{"format_version", "1"},
          {"config", config_to_json(set.config)},
          {"dataset_hash", set.dataset_hash},
          {"optimal_objective", set.optimal_objective},
          {"sample_count", set.sample_count},
          {"conditions", conditions_to_json(set.conditions)},
          {"trees", std::move(trees)}};
}

RashomonSet set_from_json(const nlohmann::json& doc) {
  RashomonSet set;
  try {
    if (doc.value("format_version", std::string{"1"}) != "1")
      throw UnsupportedVersion("unsupported Rashomon set format " + doc.at("format_version").dump());
    set.config = config_from_json(doc.at("config"));
    set.dataset_hash = doc.at("dataset_hash").get<std::string>();
    set.optimal_objective = doc.at("optimal_objective").get<double>();
    set.sample_count = doc.at("sample_count").get<std::size_t>();
    set.conditions = conditions_from_json(doc.at("conditions"));
    for (const auto& t : doc.at("trees")) {
      RashomonMember m{t.at("id").get<int>(), tree_from_json(t.at("tree")),
                       metrics_from_json(t.at("metrics"))};
      if (m.id != static_cast<int>(set.members.size()))
        throw SchemaError("tree ids must be dense and ordered");
      set.members.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed Rashomon set: ") + e.what());
  }
  return set;
}

std::string serialize_set(const RashomonSet& set) { return set_to_json(set).dump() + "\n"; }

void save_set(const RashomonSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_set(set);
}

RashomonSet load_set(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("cannot parse " + path.string() + ": " + e.what());
  }
  return set_from_json(doc);
}

}  // namespace rashomon
