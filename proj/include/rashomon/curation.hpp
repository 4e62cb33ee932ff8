#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rashomon/enumerator.hpp"
#include "rashomon/tree.hpp"

namespace rashomon {

inline constexpr const char* kCurationFormatVersion = "1";

struct CurationRecord {
  int tree_id = 0;
  std::string comment;
  std::string created_at;  // RFC 3339, UTC, millisecond precision
  DecisionTree tree;
  TreeMetrics metrics;

  bool operator==(const CurationRecord&) const = default;
};

// Self-contained deployable: the tree snapshots do not need the set file.
struct CurationFile {
  std::string format_version = kCurationFormatVersion;
  std::string dataset_hash;
  EnumerationConfig config;
  std::vector<SplitCondition> conditions;
  std::vector<CurationRecord> records;

  std::size_t feature_count() const { return conditions.size(); }
  // Throws UnknownTreeId.
  const CurationRecord& record(int tree_id) const;
  bool operator==(const CurationFile&) const = default;
};

nlohmann::json record_to_json(const CurationRecord& record);
nlohmann::json curation_to_json(const CurationFile& file);
// Throws UnsupportedVersion or SchemaError.
CurationFile curation_from_json(const nlohmann::json& doc);

std::string format_rfc3339(std::chrono::system_clock::time_point t);

// Bookmarks over one loaded Rashomon set. All members are safe to call from
// several threads; mutations are serialized and, when a path is given,
// persisted by rewriting that file.
class CurationStore {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  explicit CurationStore(const RashomonSet& set, std::optional<std::filesystem::path> path = std::nullopt,
                         Clock clock = [] { return std::chrono::system_clock::now(); });

  // Idempotent on tree_id: a repeat keeps created_at and replaces the comment.
  CurationRecord bookmark(int tree_id, const std::string& comment);
  // Returns false when the tree was not bookmarked.
  bool unbookmark(int tree_id);
  // Ordered by created_at ascending.
  std::vector<CurationRecord> list_bookmarks() const;
  CurationFile snapshot() const;

 private:
  void persist_locked() const;
  CurationFile snapshot_locked() const;

  const RashomonSet& set_;
  std::optional<std::filesystem::path> path_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::vector<CurationRecord> records_;  // insertion order
};

// Throws EmptySetError when nothing is bookmarked.
CurationFile export_curation(const CurationStore& store, const std::filesystem::path& path);
CurationFile import_curation(const std::filesystem::path& path);
// Logs a warning and returns false when the file came from a different dataset.
bool matches_set(const CurationFile& file, const RashomonSet& set);

// Throws UnknownTreeId or DimensionError.
std::vector<std::uint8_t> load_and_predict(const CurationFile& file, int tree_id,
                                           const std::vector<std::vector<std::uint8_t>>& samples);

}  // namespace rashomon
