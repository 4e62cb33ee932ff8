// rashomon: enumerate, inspect, serve and curate Rashomon sets of sparse
// decision trees.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rashomon/curation.hpp"
#include "rashomon/dataset.hpp"
#include "rashomon/enumerator.hpp"
#include "rashomon/error.hpp"
#include "rashomon/service.hpp"
#include "rashomon/sunburst.hpp"
#include "rashomon/trie.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitBudget = 2;
constexpr int kExitFailure = 1;

std::string shortest(double v) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, end);
}

void write_json(const nlohmann::json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rashomon::Error("cannot write " + path);
  out << doc.dump() << "\n";
}

int default_port() {
  if (const char* env = std::getenv("RASHOMON_PORT")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring invalid RASHOMON_PORT=" << env << "\n";
    }
  }
  return 8080;
}

// Unlabeled rows are accepted when their width equals the model's feature
// count; a trailing label column is ignored.
std::vector<std::vector<std::uint8_t>> read_samples(const std::string& path, std::size_t width) {
  std::ifstream in(path);
  if (!in) throw rashomon::SchemaError("cannot open " + path);
  std::vector<std::vector<std::uint8_t>> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::uint8_t> values;
    std::size_t start = 0;
    for (;;) {
      auto comma = line.find(',', start);
      auto cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (cell != "0" && cell != "1")
        throw rashomon::ValidationError("non-binary value \"" + cell + "\" at row " + std::to_string(row), row,
                                        values.size());
      values.push_back(cell == "1" ? 1 : 0);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (values.size() == width + 1) values.pop_back();
    rows.push_back(std::move(values));
    ++row;
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enumerate and explore Rashomon sets of sparse binary decision trees"};
  app.require_subcommand(1);

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate the Rashomon set of a binarized CSV");
  std::string data_path, out_path;
  double lambda = 0, epsilon = 1;
  int max_depth = 0;
  unsigned threads = 1;
  std::uint64_t node_budget = rashomon::kDefaultNodeBudget;
  enumerate->add_option("--data", data_path, "Binarized CSV, label column last")->required();
  enumerate->add_option("--lambda", lambda, "Per-leaf sparsity penalty")->required();
  enumerate->add_option("--epsilon", epsilon, "Loss tolerance multiplier (>= 1)")->required();
  enumerate->add_option("--max-depth", max_depth, "Depth cap (<= 6)")->required();
  enumerate->add_option("--out", out_path, "Rashomon set file to write")->required();
  enumerate->add_option("--threads", threads, "Worker threads");
  enumerate->add_option("--node-budget", node_budget, "Search node budget");

  // hierarchy
  auto* hierarchy = app.add_subcommand("hierarchy", "Write the rule-trie hierarchy (and layout) of a set file");
  std::string set_path, hierarchy_out, layout_out;
  int depth = 0;
  hierarchy->add_option("--set", set_path, "Rashomon set file")->required();
  hierarchy->add_option("--out", hierarchy_out, "Hierarchy document to write")->required();
  hierarchy->add_option("--layout-out", layout_out, "Also write the sunburst layout document");
  hierarchy->add_option("--depth", depth, "Rings to include in the layout (default: all)");

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the explorer API (and UI assets)");
  std::string static_dir, session_dir = ".rashomon-session", host = "127.0.0.1";
  int port = default_port();
  serve->add_option("--set", set_path, "Rashomon set file")->required();
  serve->add_option("--port", port, "Port (default $RASHOMON_PORT or 8080)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--static-dir", static_dir, "Directory of UI assets");
  serve->add_option("--session-dir", session_dir, "Directory holding the favorites store");

  // favorites
  auto* favorites = app.add_subcommand("favorites", "Manage bookmarked trees");
  favorites->require_subcommand(1);
  favorites->add_option("--set", set_path, "Rashomon set file")->required();
  favorites->add_option("--session-dir", session_dir, "Directory holding the favorites store");
  auto* fav_list = favorites->add_subcommand("list", "List bookmarks");
  auto* fav_add = favorites->add_subcommand("add", "Bookmark a tree");
  auto* fav_remove = favorites->add_subcommand("remove", "Remove a bookmark");
  auto* fav_export = favorites->add_subcommand("export", "Export bookmarks to a curation file");
  int tree_id = 0;
  std::string comment;
  fav_add->add_option("--tree-id", tree_id)->required();
  fav_add->add_option("--comment", comment);
  fav_remove->add_option("--tree-id", tree_id)->required();
  fav_export->add_option("--out", out_path)->required();

  // predict
  auto* predict = app.add_subcommand("predict", "Predict with a tree from a curation file");
  std::string model_path;
  predict->add_option("--model", model_path, "Curation file")->required();
  predict->add_option("--tree-id", tree_id)->required();
  predict->add_option("--data", data_path, "CSV with a header row")->required();

  // describe
  auto* describe = app.add_subcommand("describe", "Summarize a binarized CSV");
  describe->add_option("--data", data_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    using namespace rashomon;
    if (*enumerate) {
      auto dataset = load_dataset(data_path);
      EnumerationConfig config{lambda, epsilon, max_depth};
      try {
        config.validate();
      } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n" << enumerate->help();
        return kExitUsage;
      }
      auto set = enumerate_rashomon(dataset, config, {threads, node_budget});
      save_set(set, out_path);
      std::cout << "trees=" << set.size() << " optimal_objective=" << shortest(set.optimal_objective) << "\n";
    } else if (*hierarchy) {
      auto set = load_set(set_path);
      auto trie = build_trie(set);
      write_json(hierarchy_document(trie, set), hierarchy_out);
      if (!layout_out.empty()) {
        const int d = depth > 0 ? depth : trie.height() + 1;
        write_json(layout_document(layout(trie, d), d), layout_out);
      }
      std::cout << "trees=" << trie.total_trees() << " paths=" << trie.total_path_links()
                << " height=" << trie.height() << "\n";
    } else if (*serve) {
      ServiceConfig config;
      config.port = port;
      config.host = host;
      config.rashomon_file = set_path;
      config.session_dir = session_dir;
      if (!static_dir.empty()) config.static_dir = static_dir;
      Service service(config);
      int bound = service.bind();
      std::cout << "serving " << set_path << " on http://" << host << ":" << bound << std::endl;
      service.listen();
    } else if (*favorites) {
      auto set = load_set(set_path);
      CurationStore store(set, std::filesystem::path(session_dir) / "favorites.json");
      if (*fav_add) {
        auto r = store.bookmark(tree_id, comment);
        std::cout << "bookmarked tree " << r.tree_id << " at " << r.created_at << "\n";
      } else if (*fav_remove) {
        std::cout << (store.unbookmark(tree_id) ? "removed" : "not bookmarked") << "\n";
      } else if (*fav_export) {
        auto file = export_curation(store, out_path);
        std::cout << "exported " << file.records.size() << " records to " << out_path << "\n";
      } else if (*fav_list) {
        for (const auto& r : store.list_bookmarks())
          std::cout << r.tree_id << "\t" << r.created_at << "\t" << r.comment << "\n";
      }
    } else if (*predict) {
      auto file = import_curation(model_path);
      auto samples = read_samples(data_path, file.feature_count());
      for (auto label : load_and_predict(file, tree_id, samples)) std::cout << int{label} << "\n";
    } else if (*describe) {
      auto summary = rashomon::describe(load_dataset(data_path));
      std::cout << "samples=" << summary.sample_count << " conditions=" << summary.condition_count
                << " positives=" << summary.positives << " negatives=" << summary.negatives << "\n";
      for (const auto& g : summary.groups) std::cout << "  " << g.source_feature << ": " << g.condition_ids.size() << "\n";
    }
  } catch (const rashomon::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
