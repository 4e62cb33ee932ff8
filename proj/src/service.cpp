#include "rashomon/service.hpp"

#include <httplib.h>

#include <sstream>

#include "rashomon/color.hpp"
#include "rashomon/error.hpp"
#include "rashomon/query.hpp"
#include "rashomon/sunburst.hpp"

namespace rashomon {

namespace {

ApiResponse error_response(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

nlohmann::json color_map_to_json(const ColorMap& colors) {
  nlohmann::json conditions = nlohmann::json::array();
  for (const auto& [id, c] : colors.conditions)
    conditions.push_back({{"id", id},
                          {"feature_index", c.feature_index},
                          {"luminance_rank", c.luminance_rank},
                          {"hue", c.hue},
                          {"luminance", c.luminance},
                          {"color", c.rgb.hex()}});
  return {{"feature_hues", colors.feature_hues},
          {"chroma", colors.chroma},
          {"leaf_gray", colors.leaf_gray.hex()},
          {"conditions", std::move(conditions)}};
}

std::optional<int> parse_int(const std::string& text) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) throw ConfigError("port must be within [1, 65535] (0 binds any free port)");
  if (static_dir && !std::filesystem::is_directory(*static_dir))
    throw ConfigError("static directory " + static_dir->string() + " does not exist");
}

ExplorerApi::ExplorerApi(RashomonSet set, std::optional<std::filesystem::path> favorites_file)
    : set_(std::move(set)), trie_(build_trie(set_)) {
  store_ = std::make_unique<CurationStore>(set_, std::move(favorites_file));
}

int ExplorerApi::default_depth() const { return trie_.height() + 1; }

ApiResponse ExplorerApi::meta() const {
  return {200,
          {{"size", set_.size()},
           {"optimal_objective", set_.optimal_objective},
           {"config", config_to_json(set_.config)},
           {"dataset_hash", set_.dataset_hash},
           {"sample_count", set_.sample_count},
           {"trie_height", trie_.height()},
           {"total_path_links", trie_.total_path_links()},
           {"default_depth", default_depth()},
           {"conditions", conditions_to_json(set_.conditions)},
           {"colors", color_map_to_json(assign_colors(set_.conditions))},
           {"importance", importance_to_json(feature_importance(set_))}}};
}

ApiResponse ExplorerApi::hierarchy(std::optional<int> depth, const std::vector<int>& prefix) const {
  const int d = depth.value_or(default_depth());
  if (d < 1) return error_response(400, "depth must be at least 1");
  try {
    const RuleTrie view = prefix.empty() ? trie_ : subtrie(trie_, prefix);
    auto doc = layout_document(layout(view, d), d);
    doc["prefix"] = prefix;
    doc["total_trees"] = view.total_trees();
    return {200, std::move(doc)};
  } catch (const PrefixNotFound& e) {
    return error_response(404, e.what());
  }
}

ApiResponse ExplorerApi::filter(const std::string& body, std::optional<int> depth) const {
  const int d = depth.value_or(default_depth());
  if (d < 1) return error_response(400, "depth must be at least 1");
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(body.empty() ? std::string("{}") : body);
  } catch (const nlohmann::json::exception& e) {
    return {400, {{"error", "filter body is not valid JSON"}, {"errors", {{{"field", ""}, {"message", e.what()}}}}}};
  }
  try {
    auto result = filtered_hierarchy(set_, trie_, filter_from_json(parsed), d);
    auto doc = layout_document(result.sectors, d);
    doc["ids"] = result.ids;
    doc["count"] = result.ids.size();
    return {200, std::move(doc)};
  } catch (const FilterSpecError& e) {
    nlohmann::json errors = nlohmann::json::array();
    for (const auto& diag : e.diagnostics()) errors.push_back({{"field", diag.field}, {"message", diag.message}});
    return {400, {{"error", e.what()}, {"errors", std::move(errors)}}};
  } catch (const UnknownFeature& e) {
    return {400, {{"error", e.what()}, {"errors", {{{"field", "features"}, {"message", e.what()}}}}}};
  }
}

ApiResponse ExplorerApi::tree(std::int64_t id) const {
  if (!set_.contains(id)) return error_response(404, "unknown tree id " + std::to_string(id));
  const auto& m = set_.member(id);
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& p : extract_paths(m.tree, m.metrics)) paths.push_back(path_to_json(p));
  return {200,
          {{"id", m.id},
           {"tree", tree_to_json(m.tree)},
           {"metrics", metrics_to_json(m.metrics)},
           {"paths", std::move(paths)}}};
}

ApiResponse ExplorerApi::favorites() const {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : store_->list_bookmarks()) records.push_back(record_to_json(r));
  return {200, {{"records", std::move(records)}}};
}

ApiResponse ExplorerApi::add_favorite(const std::string& body) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    return error_response(400, "favorite body is not valid JSON");
  }
  if (!parsed.is_object() || !parsed.contains("tree_id") || !parsed["tree_id"].is_number_integer())
    return {400, {{"error", "tree_id is required"}, {"errors", {{{"field", "tree_id"}, {"message", "expected an integer"}}}}}};
  if (parsed.contains("comment") && !parsed["comment"].is_string())
    return {400, {{"error", "comment must be a string"}, {"errors", {{{"field", "comment"}, {"message", "expected a string"}}}}}};
  const auto id = parsed["tree_id"].get<std::int64_t>();
  if (!set_.contains(id)) return error_response(404, "unknown tree id " + std::to_string(id));
  auto record = store_->bookmark(static_cast<int>(id), parsed.value("comment", std::string{}));
  return {200, record_to_json(record)};
}

ApiResponse ExplorerApi::remove_favorite(std::int64_t id) {
  if (!set_.contains(id)) return error_response(404, "unknown tree id " + std::to_string(id));
  bool removed = store_->unbookmark(static_cast<int>(id));
  return {200, {{"removed", removed}, {"tree_id", id}}};
}

ApiResponse ExplorerApi::export_favorites() const {
  auto file = store_->snapshot();
  if (file.records.empty()) return error_response(409, "nothing is bookmarked");
  return {200, curation_to_json(file)};
}

Service::Service(const ServiceConfig& config) : Service(load_set(config.rashomon_file), config) {}

Service::Service(RashomonSet set, const ServiceConfig& config)
    : config_(config), server_(std::make_unique<httplib::Server>()) {
  config_.validate();
  api_ = std::make_unique<ExplorerApi>(std::move(set), config_.session_dir / "favorites.json");
  install_routes();
}

Service::~Service() = default;

void Service::install_routes() {
  auto& s = *server_;
  auto send = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  };
  auto depth_param = [](const httplib::Request& req) -> std::optional<std::optional<int>> {
    if (!req.has_param("depth")) return std::optional<int>{};
    auto v = parse_int(req.get_param_value("depth"));
    if (!v) return std::nullopt;
    return std::optional<int>{*v};
  };

  s.Get("/api/meta", [=, this](const httplib::Request&, httplib::Response& res) { send(res, api_->meta()); });

  s.Get("/api/hierarchy", [=, this](const httplib::Request& req, httplib::Response& res) {
    auto depth = depth_param(req);
    if (!depth) return send(res, error_response(400, "depth must be an integer"));
    std::vector<int> prefix;
    if (req.has_param("prefix") && !req.get_param_value("prefix").empty()) {
      std::istringstream in(req.get_param_value("prefix"));
      std::string part;
      while (std::getline(in, part, ',')) {
        auto v = parse_int(part);
        if (!v) return send(res, error_response(400, "prefix must be comma-separated condition ids"));
        prefix.push_back(*v);
      }
    }
    send(res, api_->hierarchy(*depth, prefix));
  });

  s.Post("/api/filter", [=, this](const httplib::Request& req, httplib::Response& res) {
    auto depth = depth_param(req);
    if (!depth) return send(res, error_response(400, "depth must be an integer"));
    send(res, api_->filter(req.body, *depth));
  });

  s.Get(R"(/api/trees/(-?\d+))", [=, this](const httplib::Request& req, httplib::Response& res) {
    send(res, api_->tree(std::stoll(req.matches[1])));
  });

  s.Get("/api/favorites", [=, this](const httplib::Request&, httplib::Response& res) { send(res, api_->favorites()); });
  s.Post("/api/favorites", [=, this](const httplib::Request& req, httplib::Response& res) {
    send(res, api_->add_favorite(req.body));
  });
  s.Delete(R"(/api/favorites/(-?\d+))", [=, this](const httplib::Request& req, httplib::Response& res) {
    send(res, api_->remove_favorite(std::stoll(req.matches[1])));
  });

  s.Get("/api/export", [=, this](const httplib::Request&, httplib::Response& res) {
    auto r = api_->export_favorites();
    send(res, r);
    if (r.status == 200) res.set_header("Content-Disposition", "attachment; filename=\"favorites.json\"");
  });

  if (config_.static_dir) s.set_mount_point("/", config_.static_dir->string());
}

int Service::bind() {
  if (config_.port == 0) return server_->bind_to_any_port(config_.host);
  if (!server_->bind_to_port(config_.host, config_.port))
    throw Error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  return config_.port;
}

void Service::listen() { server_->listen_after_bind(); }

void Service::stop() { server_->stop(); }

}  // namespace rashomon
