#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "rashomon/curation.hpp"
#include "rashomon/enumerator.hpp"
#include "rashomon/trie.hpp"

namespace httplib {
class Server;
}

namespace rashomon {

struct ServiceConfig {
  int port = 8080;
  std::filesystem::path rashomon_file;
  std::optional<std::filesystem::path> static_dir;
  std::filesystem::path session_dir = ".rashomon-session";
  std::string host = "127.0.0.1";

  // Throws ConfigError for an out-of-range port or a missing static_dir.
  void validate() const;
};

// Result of one API call, independent of the HTTP transport.
struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Endpoint logic over one loaded Rashomon set. Everything except the
// favorites routes is a pure function of (set, request).
class ExplorerApi {
 public:
  ExplorerApi(RashomonSet set, std::optional<std::filesystem::path> favorites_file);

  ApiResponse meta() const;
  // depth absent = every trie level; prefix re-roots the hierarchy.
  ApiResponse hierarchy(std::optional<int> depth, const std::vector<int>& prefix = {}) const;
  ApiResponse filter(const std::string& body, std::optional<int> depth) const;
  ApiResponse tree(std::int64_t id) const;
  ApiResponse favorites() const;
  ApiResponse add_favorite(const std::string& body);
  ApiResponse remove_favorite(std::int64_t id);
  ApiResponse export_favorites() const;

  const RashomonSet& set() const { return set_; }
  const RuleTrie& trie() const { return trie_; }
  int default_depth() const;

 private:
  RashomonSet set_;
  RuleTrie trie_;
  std::unique_ptr<CurationStore> store_;
};

// HTTP front end for ExplorerApi plus optional static UI assets.
class Service {
 public:
  explicit Service(const ServiceConfig& config);
  Service(RashomonSet set, const ServiceConfig& config);
  ~Service();

  // Binds the configured port (0 picks a free one) and returns the bound port.
  int bind();
  // Blocks until stop().
  void listen();
  void stop();

  ExplorerApi& api() { return *api_; }

 private:
  void install_routes();

  ServiceConfig config_;
  std::unique_ptr<ExplorerApi> api_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace rashomon
